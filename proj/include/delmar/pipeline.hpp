#ifndef DELMAR_PIPELINE_HPP
#define DELMAR_PIPELINE_HPP

#include <cstddef>
#include <vector>

#include "delmar/admm.hpp"
#include "delmar/rro.hpp"

namespace delmar {

// A solved hierarchy. Layer 1 factors the signal itself; layer k >= 2 factors
// the feature matrix of layer k-1. rank_decisions holds the gap-test outcome
// that gated each prospective next layer, in evaluation order.
struct LayerStack {
    std::vector<LayerFactor> layers;
    std::vector<std::size_t> ranks;
    std::size_t depth = 0;
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;
    AdmmConfig config_snapshot;
    std::vector<RankDecision> rank_decisions;
};

struct DecomposeResult {
    LayerStack stack;
    std::vector<ConvergenceTrace> traces;
};

// Full hierarchy discovery: solve layer 1 at initial_rank, then repeatedly
// estimate the rank of the newest feature matrix and solve one layer deeper
// until the estimate reaches 1 or max_layers is hit. When apply_mbp is set the
// multiplicative refinement pass is run once over the finished stack.
DecomposeResult decompose(const DenseMatrix& s, const AdmmConfig& config,
                          std::size_t initial_rank, std::size_t max_layers,
                          bool apply_mbp = true);

// x1 * ... * x_upto * y_upto + z1, the deep reconstruction truncated at
// upto_layer (1-based).
DenseMatrix reconstruct(const LayerStack& stack, std::size_t upto_layer);

// Feature matrix of the given layer (1-based).
const DenseMatrix& hierarchy_features(const LayerStack& stack, std::size_t layer);

// ||approx - s||_F / ||s||_F (plain ||approx||_F when s is all zero).
double relative_error(const DenseMatrix& approx, const DenseMatrix& s);

} // namespace delmar

#endif
