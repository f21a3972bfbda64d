#include "delmar/rro.hpp"

#include <algorithm>
#include <cmath>

#include "delmar/errors.hpp"
#include "delmar/kernels.hpp"

namespace delmar {

namespace {

constexpr double kDiagClamp = 1e-12;

// First (lowest) index of the maximum value.
std::size_t argmax_first(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

} // namespace

std::vector<double> weighted_difference(const std::vector<double>& d) {
    if (d.size() < 2) throw VectorTooShort("weighted_difference: need at least 2 entries");
    const std::size_t L = d.size();
    std::vector<double> out(L - 1);
    double prefix = 0.0;
    for (std::size_t i = 0; i + 1 < L; ++i) {
        prefix += d[i];
        if (prefix == 0.0) throw ZeroPrefix("weighted_difference: zero prefix sum");
        out[i] = (d[i] - d[i + 1]) / prefix;
    }
    return out;
}

std::vector<double> weighted_ratio(const std::vector<double>& d) {
    if (d.size() < 2) throw VectorTooShort("weighted_ratio: need at least 2 entries");
    const std::size_t L = d.size();
    std::vector<double> ratios(L - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < L; ++i) {
        if (d[i + 1] == 0.0) throw DivisionByZero("weighted_ratio: zero denominator entry");
        ratios[i] = d[i] / d[i + 1];
        sum += ratios[i];
    }
    // The L-2 scale vanishes for pairs; force it to 1 so a lone ratio survives.
    const double scal = L == 2 ? 1.0 : static_cast<double>(L - 2);
    std::vector<double> out(L - 1);
    for (std::size_t i = 0; i + 1 < L; ++i) out[i] = scal * ratios[i] / sum;
    return out;
}

RankDecision estimate_rank(const DenseMatrix& y) {
    const std::size_t mindim = std::min(y.rows, y.cols);
    if (mindim < 2) throw MatrixTooSmall("estimate_rank: need min(rows, cols) >= 2");
    if (!is_finite(y)) throw NonFiniteInput("estimate_rank: input has NaN/Inf");

    RankDecision rd;
    rd.diag_magnitudes = qr_diagonal(y);
    for (double& v : rd.diag_magnitudes) v = std::max(v, kDiagClamp);

    rd.weighted_differences = weighted_difference(rd.diag_magnitudes);
    rd.weighted_ratios = weighted_ratio(rd.diag_magnitudes);

    // 1-based argmax positions; a spike between d[i] and d[i+1] votes rank i+1.
    const std::size_t pos1 = argmax_first(rd.weighted_differences) + 1;
    const std::size_t pos2 = argmax_first(rd.weighted_ratios) + 1;
    std::size_t candidate = std::max(pos1, pos2);
    if (candidate == mindim) candidate -= 1;
    rd.estimated_rank = std::max<std::size_t>(candidate, 1);
    return rd;
}

std::vector<RankDecision> rro_reduce(const DenseMatrix& y, std::size_t max_steps) {
    std::vector<RankDecision> steps;
    DenseMatrix cur = y;
    for (std::size_t s = 0; s < max_steps; ++s) {
        RankDecision rd = estimate_rank(cur);
        steps.push_back(rd);
        if (rd.estimated_rank <= 1) break;
        DenseMatrix next(rd.estimated_rank, cur.cols);
        for (std::size_t i = 0; i < rd.estimated_rank; ++i)
            for (std::size_t j = 0; j < cur.cols; ++j) next(i, j) = cur(i, j);
        cur = std::move(next);
        if (std::min(cur.rows, cur.cols) < 2) break;
    }
    return steps;
}

} // namespace delmar
