#include "delmar/pipeline.hpp"

#include <algorithm>
#include <string>

#include "delmar/errors.hpp"
#include "delmar/kernels.hpp"
#include "delmar/mbp.hpp"

namespace delmar {

DecomposeResult decompose(const DenseMatrix& s, const AdmmConfig& config,
                          std::size_t initial_rank, std::size_t max_layers,
                          bool apply_mbp) {
    const std::size_t mindim = std::min(s.rows, s.cols);
    if (mindim < 3) {
        throw DegenerateInput("decompose: input must be at least 3x3, got " +
                              std::to_string(s.rows) + "x" + std::to_string(s.cols));
    }
    if (initial_rank < 1 || initial_rank >= mindim) {
        throw RankTooLarge("decompose: initial rank " + std::to_string(initial_rank) +
                           " outside [1, " + std::to_string(mindim - 1) + "]");
    }
    if (max_layers < 1) {
        throw InvalidConfig("decompose: max_layers must be at least 1");
    }

    DecomposeResult result;
    LayerStack& stack = result.stack;
    stack.source_rows = s.rows;
    stack.source_cols = s.cols;
    stack.config_snapshot = config;

    SolveResult first = solve_layer(s, initial_rank, config, 1);
    stack.layers.push_back(std::move(first.factor));
    stack.ranks.push_back(initial_rank);
    result.traces.push_back(std::move(first.trace));

    while (stack.layers.size() < max_layers) {
        const DenseMatrix& y = stack.layers.back().y;
        if (std::min(y.rows, y.cols) < 2) {
            break; // rank-1 features cannot be factored further
        }
        RankDecision decision = estimate_rank(y);
        const std::size_t next_rank = decision.estimated_rank;
        stack.rank_decisions.push_back(std::move(decision));
        if (next_rank <= 1) {
            break;
        }
        SolveResult deeper = solve_layer(y, next_rank, config, stack.layers.size() + 1);
        stack.layers.push_back(std::move(deeper.factor));
        stack.ranks.push_back(next_rank);
        result.traces.push_back(std::move(deeper.trace));
    }
    stack.depth = stack.layers.size();

    if (apply_mbp) {
        BackpropResult refined = backpropagate(stack, s);
        result.stack = std::move(refined.stack);
    }
    return result;
}

DenseMatrix reconstruct(const LayerStack& stack, std::size_t upto_layer) {
    if (stack.depth == 0) {
        throw InvalidConfig("reconstruct: empty stack");
    }
    if (upto_layer < 1 || upto_layer > stack.depth) {
        throw InvalidConfig("reconstruct: layer " + std::to_string(upto_layer) +
                            " outside [1, " + std::to_string(stack.depth) + "]");
    }
    DenseMatrix acc = stack.layers[upto_layer - 1].y;
    for (std::size_t k = upto_layer; k-- > 0;) {
        acc = multiply(stack.layers[k].x, acc);
    }
    return add_scaled(acc, 1.0, stack.layers[0].z);
}

const DenseMatrix& hierarchy_features(const LayerStack& stack, std::size_t layer) {
    if (layer < 1 || layer > stack.depth) {
        throw InvalidConfig("hierarchy_features: layer " + std::to_string(layer) +
                            " outside [1, " + std::to_string(stack.depth) + "]");
    }
    return stack.layers[layer - 1].y;
}

double relative_error(const DenseMatrix& approx, const DenseMatrix& s) {
    if (!approx.same_shape(s)) {
        throw ShapeMismatch("relative_error: shapes differ");
    }
    DenseMatrix diff = subtract(approx, s);
    const double denom = frobenius_norm(s);
    const double num = frobenius_norm(diff);
    return denom > 0.0 ? num / denom : num;
}

} // namespace delmar
