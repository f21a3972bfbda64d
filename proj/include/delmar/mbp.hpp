#ifndef DELMAR_MBP_HPP
#define DELMAR_MBP_HPP

#include <cstddef>
#include <vector>

#include "delmar/pipeline.hpp"

namespace delmar {

// Bookkeeping captured while refining one layer: psi is the weight chain
// x1*...*x_{k-1} (identity for k = 1), y_hat the deep feature composition at
// level k, and d = pinv(psi) * (s - z1) * pinv(y_hat) the alignment between
// the chain and the composition.
struct MbpState {
    DenseMatrix psi;
    DenseMatrix y_hat;
    DenseMatrix d;
    std::size_t layer_index = 0;
};

struct BackpropResult {
    LayerStack stack;
    std::vector<MbpState> states;
};

// Product of the first k-1 weight matrices; identity(source_rows) for k = 1.
DenseMatrix compose_psi(const LayerStack& stack, std::size_t k);

// One multiplicative refinement of y_hat for the regression psi * y ~ target.
// Splits y into nonnegative parts, applies the coupled sign-split update, and
// recombines. Never flips the sign of an entry and leaves exact fits fixed.
DenseMatrix mbp_update_y(const DenseMatrix& psi, const DenseMatrix& target,
                         const DenseMatrix& y_hat);

// Refinement sweep(s) over a solved stack, deepest layer first. Each layer's
// feature matrix is refined against the target it is responsible for
// explaining: s - z1 for layer 1, y_{k-1} - z_k deeper. Weights and sparse
// parts are left untouched. states records the bookkeeping of the last sweep
// in refinement order (k = depth down to 1).
BackpropResult backpropagate(const LayerStack& stack, const DenseMatrix& s,
                             std::size_t sweeps = 1);

} // namespace delmar

#endif
