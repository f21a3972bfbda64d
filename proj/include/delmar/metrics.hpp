#ifndef DELMAR_METRICS_HPP
#define DELMAR_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "delmar/admm.hpp"
#include "delmar/dense_matrix.hpp"

namespace delmar {

// One matched row pair in a similarity report. hausdorff is only meaningful
// when has_hausdorff is set (both rows need nonempty support).
struct MatchedPair {
    std::size_t feature_row = 0;
    std::size_t template_row = 0;
    double abs_pearson = 0.0;
    double overlap = 0.0;
    bool has_hausdorff = false;
    double hausdorff = 0.0;
};

struct SimilarityReport {
    std::vector<MatchedPair> pairs;
    double mean_abs_pearson = 0.0;
    double mean_overlap = 0.0;
    double mean_hausdorff = 0.0; // over pairs with has_hausdorff
    std::size_t hausdorff_pairs = 0;
};

// Pearson correlation; 0 when either input has zero variance.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Jaccard index of the supports of a and b after binarizing entries strictly
// above threshold. Two empty supports count as a perfect match.
double overlap_similarity(const DenseMatrix& a, const DenseMatrix& b,
                          double threshold = 0.0);

// Symmetric Hausdorff distance between two point sets under the Euclidean
// metric. Points must share a dimension; empty sets are rejected.
double hausdorff_distance(const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b);

// Greedy one-to-one assignment maximizing score, largest scores first.
// Returns min(rows, cols) pairs of (row, col) indices.
std::vector<std::pair<std::size_t, std::size_t>> greedy_match(const DenseMatrix& score);

// Row-wise comparison of a feature matrix against a template matrix: rows are
// matched greedily by absolute Pearson correlation, then each pair's support
// overlap and support Hausdorff distance (1-d column coordinates, entries
// binarized above threshold) are collected. Factor rows are sign-indeterminate,
// so a negatively correlated feature row is negated before binarization.
SimilarityReport similarity_report(const DenseMatrix& features,
                                   const DenseMatrix& templates,
                                   double threshold = 0.0);

struct SplitHalfPair {
    std::size_t row_first = 0;
    std::size_t row_second = 0;
    double abs_pearson = 0.0;
};

struct SplitHalfResult {
    std::vector<SplitHalfPair> pairs;
    double mean_abs_pearson = 0.0;
};

// Split the rows of s into two disjoint halves with a seeded shuffle, run a
// single-layer decomposition on each half at the given rank, and greedily
// match the two feature matrices by absolute Pearson correlation.
SplitHalfResult split_half_details(const DenseMatrix& s, const AdmmConfig& config,
                                   std::size_t rank, std::uint64_t split_seed);

// Mean absolute correlation over the matched rows of split_half_details.
double split_half_reproducibility(const DenseMatrix& s, const AdmmConfig& config,
                                  std::size_t rank, std::uint64_t split_seed);

} // namespace delmar

#endif
