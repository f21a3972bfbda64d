#ifndef DELMAR_IO_HPP
#define DELMAR_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "delmar/admm.hpp"
#include "delmar/dense_matrix.hpp"

#include <json.hpp>

namespace delmar {

// CSV layout: header line "rows,cols", then one line per row with
// comma-separated values written at 17 significant digits (round-trips
// doubles exactly through text).
DenseMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const DenseMatrix& m);

// DMAT layout: "DMAT" magic, uint32 little-endian rows and cols, then
// row-major float64 little-endian payload. Bitwise round trip.
DenseMatrix read_matrix_dmat(const std::string& path);
void write_matrix_dmat(const std::string& path, const DenseMatrix& m);

// Dispatch on the file extension (.csv or .dmat).
DenseMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const DenseMatrix& m);

// FNV-1a 64-bit digest over the dimensions and the little-endian payload
// bytes, formatted as 16 hex digits.
std::string content_digest(const DenseMatrix& m);

// Everything a decomposition run reports. Timing lives in a single subobject
// so byte-level comparisons can drop it wholesale.
struct RunReport {
    std::string input_path;
    std::string input_digest;
    AdmmConfig config;
    std::size_t initial_rank = 0;
    std::size_t max_layers = 0;
    bool mbp_applied = false;
    std::size_t depth = 0;
    std::vector<std::size_t> ranks;
    std::vector<double> final_residuals;
    std::vector<std::size_t> iterations;
    std::vector<std::string> terminations;
    double reconstruction_error = 0.0;
    double wall_total_ms = 0.0;
    std::vector<double> wall_layer_ms;
    double wall_mbp_ms = 0.0;
};

nlohmann::json report_to_json(const RunReport& report);
std::string report_to_string(const RunReport& report);

} // namespace delmar

#endif
