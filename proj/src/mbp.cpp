#include "delmar/mbp.hpp"

#include <cmath>
#include <string>

#include "delmar/errors.hpp"
#include "delmar/kernels.hpp"

namespace delmar {

namespace {

constexpr double kDenomFloor = 1e-12;

// Elementwise y_part * sqrt(num / den) with the denominator floored away from
// zero. num and den are built from nonnegative pieces, so the quotient is
// always well defined.
DenseMatrix scaled_sqrt_ratio(const DenseMatrix& part, const DenseMatrix& num,
                              const DenseMatrix& den) {
    DenseMatrix out = part;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double d = den.data[i] > kDenomFloor ? den.data[i] : kDenomFloor;
        out.data[i] *= std::sqrt(num.data[i] / d);
    }
    return out;
}

DenseMatrix add3(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c) {
    return add_scaled(add_scaled(a, 1.0, b), 1.0, c);
}

} // namespace

DenseMatrix compose_psi(const LayerStack& stack, std::size_t k) {
    if (stack.depth == 0) {
        throw InvalidConfig("compose_psi: empty stack");
    }
    if (k < 1 || k > stack.depth) {
        throw InvalidConfig("compose_psi: layer " + std::to_string(k) + " outside [1, " +
                            std::to_string(stack.depth) + "]");
    }
    if (k == 1) {
        return identity(stack.source_rows);
    }
    DenseMatrix acc = stack.layers[0].x;
    for (std::size_t i = 1; i + 1 < k; ++i) {
        acc = multiply(acc, stack.layers[i].x);
    }
    return acc;
}

DenseMatrix mbp_update_y(const DenseMatrix& psi, const DenseMatrix& target,
                         const DenseMatrix& y_hat) {
    if (psi.rows != target.rows || psi.cols != y_hat.rows || y_hat.cols != target.cols) {
        throw ShapeMismatch("mbp_update_y: incompatible shapes");
    }

    const DenseMatrix psi_t = transpose(psi);
    const SignSplit b = split_signs(multiply(psi_t, target));
    const SignSplit g = split_signs(multiply(psi_t, psi));
    const SignSplit y = split_signs(y_hat);

    // The two sign blocks share their numerators and denominators crosswise:
    // the positive block grows where the negative one shrinks and vice versa.
    const DenseMatrix favour_pos =
        add3(b.pos, multiply(g.neg, y.pos), multiply(g.pos, y.neg));
    const DenseMatrix favour_neg =
        add3(b.neg, multiply(g.pos, y.pos), multiply(g.neg, y.neg));

    const DenseMatrix next_pos = scaled_sqrt_ratio(y.pos, favour_pos, favour_neg);
    const DenseMatrix next_neg = scaled_sqrt_ratio(y.neg, favour_neg, favour_pos);
    return subtract(next_pos, next_neg);
}

BackpropResult backpropagate(const LayerStack& stack, const DenseMatrix& s,
                             std::size_t sweeps) {
    if (stack.depth == 0) {
        throw InvalidConfig("backpropagate: empty stack");
    }
    if (sweeps == 0) {
        throw InvalidConfig("backpropagate: sweeps must be >= 1");
    }
    if (s.rows != stack.source_rows || s.cols != stack.source_cols) {
        throw ShapeMismatch("backpropagate: source shape does not match stack");
    }

    BackpropResult result;
    result.stack = stack;
    LayerStack& st = result.stack;
    const DenseMatrix denoised = subtract(s, st.layers[0].z);

    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        result.states.clear();
        DenseMatrix deeper_hat; // composition from the previous (deeper) step
        for (std::size_t k = st.depth; k >= 1; --k) {
            LayerFactor& layer = st.layers[k - 1];
            const DenseMatrix target =
                k == 1 ? denoised : subtract(st.layers[k - 2].y, layer.z);
            layer.y = mbp_update_y(layer.x, target, layer.y);

            MbpState state;
            state.layer_index = k;
            state.psi = compose_psi(st, k);
            state.y_hat = k == st.depth ? layer.y : multiply(st.layers[k].x, deeper_hat);
            state.d = multiply(multiply(pseudoinverse(state.psi), denoised),
                               pseudoinverse(state.y_hat));
            deeper_hat = state.y_hat;
            result.states.push_back(std::move(state));
        }
    }
    return result;
}

} // namespace delmar
