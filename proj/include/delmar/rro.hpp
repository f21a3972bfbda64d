#ifndef DELMAR_RRO_HPP
#define DELMAR_RRO_HPP

#include <cstddef>
#include <vector>

#include "delmar/dense_matrix.hpp"

namespace delmar {

// Rank estimate for one matrix, with the diagnostic vectors that produced it.
struct RankDecision {
    std::size_t estimated_rank = 0;
    std::vector<double> diag_magnitudes;     // |diag(r)| after clamping
    std::vector<double> weighted_differences;
    std::vector<double> weighted_ratios;
};

// Gap statistics over a nonincreasing-ish magnitude vector d (length L >= 2).
//
// weighted_difference[i] = (d[i] - d[i+1]) / (d[0] + ... + d[i]), i < L-1.
// Throws ZeroPrefix when a prefix sum is zero.
std::vector<double> weighted_difference(const std::vector<double>& d);

// weighted_ratio[i] = scale * (d[i] / d[i+1]) / sum_of_ratios with
// scale = L - 2, except L == 2 where the scale is forced to 1.
// Throws DivisionByZero on a zero denominator entry, VectorTooShort for L < 2.
std::vector<double> weighted_ratio(const std::vector<double>& d);

// Estimates the numerical rank of y from the QR diagonal of its tall
// orientation. Both gap statistics vote with their (1-based) argmax position,
// first index winning ties; the larger vote is the candidate, decremented if
// it equals min(rows, cols) and floored at 1. Always returns a value in
// [1, min(rows, cols) - 1].
RankDecision estimate_rank(const DenseMatrix& y);

// Repeatedly estimates the rank and truncates y to its leading estimated_rank
// rows, at most max_steps times, stopping once the estimate reaches 1.
// Returns the per-step decisions; the rank sequence is strictly decreasing.
std::vector<RankDecision> rro_reduce(const DenseMatrix& y, std::size_t max_steps);

} // namespace delmar

#endif
