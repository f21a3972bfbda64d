#include "delmar/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "delmar/errors.hpp"

namespace delmar {

namespace {

void append_le_u32(std::string& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xFF));
    }
}

void append_le_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int shift = 0; shift < 64; shift += 8) {
        out.push_back(static_cast<char>((bits >> shift) & 0xFF));
    }
}

std::uint32_t take_le_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

double take_le_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) {
        bits = bits << 8 | p[i];
    }
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to " + path);
    }
}

double parse_value(const std::string& token, const std::string& path) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
        throw MalformedHeader(path + ": bad numeric token '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw NonFiniteValue(path + ": non-finite value '" + token + "'");
    }
    return value;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw MalformedHeader(path + ": missing header line");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
        throw MalformedHeader(path + ": header must be 'rows,cols'");
    }
    std::size_t rows = 0, cols = 0;
    try {
        rows = std::stoul(line.substr(0, comma));
        cols = std::stoul(line.substr(comma + 1));
    } catch (const std::exception&) {
        throw MalformedHeader(path + ": header must be 'rows,cols'");
    }
    if (rows == 0 || cols == 0) {
        throw MalformedHeader(path + ": zero dimension in header");
    }

    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw DimensionMismatch(path + ": expected " + std::to_string(rows) +
                                    " rows, got " + std::to_string(i));
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::size_t start = 0, j = 0;
        while (true) {
            const auto next = line.find(',', start);
            const std::string token = line.substr(start, next - start);
            if (j >= cols) {
                throw DimensionMismatch(path + ": row " + std::to_string(i) +
                                        " has more than " + std::to_string(cols) +
                                        " values");
            }
            m(i, j++) = parse_value(token, path);
            if (next == std::string::npos) {
                break;
            }
            start = next + 1;
        }
        if (j != cols) {
            throw DimensionMismatch(path + ": row " + std::to_string(i) + " has " +
                                    std::to_string(j) + " values, expected " +
                                    std::to_string(cols));
        }
    }
    return m;
}

void write_matrix_csv(const std::string& path, const DenseMatrix& m) {
    if (!is_finite(m)) {
        throw NonFiniteValue("write_matrix_csv: non-finite entry");
    }
    std::string out;
    out.reserve(m.data.size() * 25 + 32);
    out += std::to_string(m.rows);
    out += ',';
    out += std::to_string(m.cols);
    out += '\n';
    std::array<char, 32> buf{};
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            const int len = std::snprintf(buf.data(), buf.size(), "%.17g", m(i, j));
            out.append(buf.data(), static_cast<std::size_t>(len));
            out.push_back(j + 1 < m.cols ? ',' : '\n');
        }
    }
    spit(path, out);
}

DenseMatrix read_matrix_dmat(const std::string& path) {
    const std::string bytes = slurp(path);
    if (bytes.size() < 12 || bytes.compare(0, 4, "DMAT") != 0) {
        throw MalformedHeader(path + ": not a DMAT file");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t rows = take_le_u32(p + 4);
    const std::size_t cols = take_le_u32(p + 8);
    if (rows == 0 || cols == 0) {
        throw MalformedHeader(path + ": zero dimension in header");
    }
    const std::size_t expected = 12 + rows * cols * 8;
    if (bytes.size() != expected) {
        throw DimensionMismatch(path + ": payload is " + std::to_string(bytes.size() - 12) +
                                " bytes, header implies " + std::to_string(expected - 12));
    }
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        m.data[i] = take_le_f64(p + 12 + i * 8);
    }
    if (!is_finite(m)) {
        throw NonFiniteValue(path + ": non-finite value in payload");
    }
    return m;
}

void write_matrix_dmat(const std::string& path, const DenseMatrix& m) {
    if (!is_finite(m)) {
        throw NonFiniteValue("write_matrix_dmat: non-finite entry");
    }
    std::string out;
    out.reserve(12 + m.data.size() * 8);
    out += "DMAT";
    append_le_u32(out, static_cast<std::uint32_t>(m.rows));
    append_le_u32(out, static_cast<std::uint32_t>(m.cols));
    for (const double v : m.data) {
        append_le_f64(out, v);
    }
    spit(path, out);
}

DenseMatrix read_matrix(const std::string& path) {
    if (ends_with(path, ".dmat")) {
        return read_matrix_dmat(path);
    }
    if (ends_with(path, ".csv")) {
        return read_matrix_csv(path);
    }
    throw IoError("unrecognized matrix extension in " + path + " (want .csv or .dmat)");
}

void write_matrix(const std::string& path, const DenseMatrix& m) {
    if (ends_with(path, ".dmat")) {
        write_matrix_dmat(path, m);
        return;
    }
    if (ends_with(path, ".csv")) {
        write_matrix_csv(path, m);
        return;
    }
    throw IoError("unrecognized matrix extension in " + path + " (want .csv or .dmat)");
}

std::string content_digest(const DenseMatrix& m) {
    std::string bytes;
    bytes.reserve(8 + m.data.size() * 8);
    append_le_u32(bytes, static_cast<std::uint32_t>(m.rows));
    append_le_u32(bytes, static_cast<std::uint32_t>(m.cols));
    for (const double v : m.data) {
        append_le_f64(bytes, v);
    }
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001B3ULL;
    }
    std::array<char, 17> hex{};
    std::snprintf(hex.data(), hex.size(), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(hex.data(), 16);
}

nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["input"] = {{"path", report.input_path}, {"digest", report.input_digest}};
    j["config"] = {
        {"beta", report.config.beta},
        {"eta", report.config.eta},
        {"tol", report.config.tol},
        {"max_iter", report.config.max_iter},
        {"mode", report.config.mode == SolverMode::Exact ? "exact" : "accelerated"},
        {"seed", report.config.seed},
        {"initial_rank", report.initial_rank},
        {"max_layers", report.max_layers},
        {"mbp", report.mbp_applied},
    };
    j["depth"] = report.depth;
    j["ranks"] = report.ranks;
    j["layers"] = nlohmann::json::array();
    for (std::size_t k = 0; k < report.depth; ++k) {
        j["layers"].push_back({
            {"rank", report.ranks[k]},
            {"final_residual", report.final_residuals[k]},
            {"iterations", report.iterations[k]},
            {"termination", report.terminations[k]},
        });
    }
    j["reconstruction_error"] = report.reconstruction_error;
    j["wall_time_ms"] = {
        {"total", report.wall_total_ms},
        {"per_layer", report.wall_layer_ms},
        {"mbp", report.wall_mbp_ms},
    };
    return j;
}

std::string report_to_string(const RunReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

} // namespace delmar
