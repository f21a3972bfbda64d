#include "delmar/admm.hpp"

#include <algorithm>
#include <cmath>

#include "delmar/errors.hpp"
#include "delmar/kernels.hpp"
#include "delmar/rng.hpp"

namespace delmar {

namespace {

constexpr double kOrthoTol = 1e-8;

void check_config(const AdmmConfig& c) {
    if (!(c.beta > 1.0)) throw InvalidConfig("admm: beta must be > 1");
    if (!(c.eta >= 1.0)) throw InvalidConfig("admm: eta must be >= 1");
    if (!(c.tol > 0.0)) throw InvalidConfig("admm: tol must be > 0");
    if (c.max_iter < 1) throw InvalidConfig("admm: max_iter must be >= 1");
}

DenseMatrix shifted_target(const DenseMatrix& s, const DenseMatrix& e, double beta) {
    return add_scaled(s, -1.0 / beta, e);
}

// z from a precomputed product xy; the public op routes through here so the
// solver loop and the op are bit-for-bit the same computation.
DenseMatrix update_z_impl(const DenseMatrix& s, const DenseMatrix& xy, const DenseMatrix& e,
                          double beta) {
    DenseMatrix v = subtract(s, xy);
    v = add_scaled(v, -1.0 / beta, e);
    return shrink(v, 1.0 / (beta * beta));
}

DenseMatrix constraint_residual(const DenseMatrix& xy, const DenseMatrix& z,
                                const DenseMatrix& s) {
    DenseMatrix r = add_scaled(xy, 1.0, z);
    return subtract(r, s);
}

double lagrangian_impl(const DenseMatrix& xy, const DenseMatrix& z, const DenseMatrix& e,
                       const DenseMatrix& s, double beta) {
    DenseMatrix d = subtract(xy, s);
    return 0.5 * beta * frobenius_inner(d, d) + frobenius_inner(d, e) + l1_norm(z) / beta;
}

DenseMatrix update_x_exact_impl(const DenseMatrix& shifted, const DenseMatrix& y) {
    return multiply(shifted, pseudoinverse(y));
}

DenseMatrix update_x_accel_impl(const DenseMatrix& shifted, const DenseMatrix& y) {
    DenseMatrix product = multiply(shifted, transpose(y));
    return qr_decompose(product).q;
}

DenseMatrix update_y_exact_impl(const DenseMatrix& shifted, const DenseMatrix& x) {
    return multiply(pseudoinverse(x), shifted);
}

DenseMatrix update_y_accel_impl(const DenseMatrix& shifted, const DenseMatrix& x) {
    DenseMatrix product = multiply(transpose(x), shifted);
    if (orthonormality_defect(x) <= kOrthoTol) return product;
    // Literal form for a non-orthonormal x: the orthonormal factor of the
    // product, row-orthonormal when the product is wide.
    QrResult f = qr_decompose(product);
    return f.transposed_input ? transpose(f.q) : f.q;
}

} // namespace

double evaluate_lagrangian(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& z,
                           const DenseMatrix& e, const DenseMatrix& s, double beta) {
    return lagrangian_impl(multiply(x, y), z, e, s, beta);
}

DenseMatrix update_x_exact(const DenseMatrix& s, const DenseMatrix& y, const DenseMatrix& e,
                           double beta) {
    return update_x_exact_impl(shifted_target(s, e, beta), y);
}

DenseMatrix update_x_accelerated(const DenseMatrix& s, const DenseMatrix& y, const DenseMatrix& e,
                                 double beta) {
    return update_x_accel_impl(shifted_target(s, e, beta), y);
}

DenseMatrix update_y_exact(const DenseMatrix& s, const DenseMatrix& x, const DenseMatrix& e,
                           double beta) {
    return update_y_exact_impl(shifted_target(s, e, beta), x);
}

DenseMatrix update_y_accelerated(const DenseMatrix& s, const DenseMatrix& x, const DenseMatrix& e,
                                 double beta) {
    return update_y_accel_impl(shifted_target(s, e, beta), x);
}

DenseMatrix update_z(const DenseMatrix& s, const DenseMatrix& x, const DenseMatrix& y,
                     const DenseMatrix& e, double beta) {
    return update_z_impl(s, multiply(x, y), e, beta);
}

DenseMatrix update_multiplier(const DenseMatrix& e, const DenseMatrix& s, const DenseMatrix& x,
                              const DenseMatrix& y, const DenseMatrix& z, double beta, double eta) {
    return add_scaled(e, eta * beta, constraint_residual(multiply(x, y), z, s));
}

namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed,
                     std::uint64_t layer, std::uint64_t role) {
    Rng rng(seed, layer, role);
    DenseMatrix m(rows, cols);
    for (double& v : m.data) v = rng.next_normal();
    return m;
}

SolveResult run_admm(const DenseMatrix& target, LayerFactor state, const AdmmConfig& config) {
    const double norm_target = frobenius_norm(target);
    const double denom = norm_target > 0.0 ? norm_target : 1.0;

    SolveResult out;
    out.trace.termination = Termination::MaxIter;

    for (std::size_t it = 0; it < config.max_iter; ++it) {
        DenseMatrix product;
        DenseMatrix residual;
        // The target was validated finite on entry, so a kernel rejecting its
        // input mid-iteration means the iterates themselves blew up.
        try {
            DenseMatrix shifted = shifted_target(target, state.multiplier, config.beta);
            state.x = config.mode == SolverMode::Exact ? update_x_exact_impl(shifted, state.y)
                                                       : update_x_accel_impl(shifted, state.y);
            state.y = config.mode == SolverMode::Exact ? update_y_exact_impl(shifted, state.x)
                                                       : update_y_accel_impl(shifted, state.x);
            product = multiply(state.x, state.y);
            state.z = update_z_impl(target, product, state.multiplier, config.beta);
            residual = constraint_residual(product, state.z, target);
            state.multiplier = add_scaled(state.multiplier, config.eta * config.beta, residual);
        } catch (const NonFiniteInput& err) {
            throw NonFiniteIterate(std::string("solve_layer: diverged: ") + err.what());
        }

        const double rel = frobenius_norm(residual) / denom;
        const double lag = lagrangian_impl(product, state.z, state.multiplier, target, config.beta);
        if (!std::isfinite(rel) || !std::isfinite(lag) || !is_finite(state.x) ||
            !is_finite(state.y)) {
            throw NonFiniteIterate("solve_layer: iterate left the finite range");
        }
        out.trace.primal_residuals.push_back(rel);
        out.trace.lagrangian_values.push_back(lag);
        if (rel <= config.tol) {
            out.trace.termination = Termination::Tolerance;
            break;
        }
    }
    out.trace.iterations = out.trace.primal_residuals.size();
    out.factor = std::move(state);
    return out;
}

} // namespace

SolveResult solve_layer(const DenseMatrix& target, std::size_t rank, const AdmmConfig& config,
                        std::size_t layer_index) {
    check_config(config);
    const std::size_t mindim = std::min(target.rows, target.cols);
    if (rank < 1 || rank >= mindim) {
        throw RankTooLarge("solve_layer: rank must satisfy 1 <= rank < min(rows, cols)");
    }
    if (!is_finite(target)) throw NonFiniteInput("solve_layer: target has NaN/Inf");

    LayerFactor init;
    init.x = gaussian(target.rows, rank, config.seed, layer_index, 0);
    init.y = gaussian(rank, target.cols, config.seed, layer_index, 1);
    init.z = zeros(target.rows, target.cols);
    init.multiplier = zeros(target.rows, target.cols);
    init.rank = rank;
    init.layer_index = layer_index;
    return run_admm(target, std::move(init), config);
}

SolveResult solve_layer_from(const DenseMatrix& target, const LayerFactor& init,
                             const AdmmConfig& config) {
    check_config(config);
    if (init.x.rows != target.rows || init.y.cols != target.cols ||
        init.x.cols != init.y.rows || !init.z.same_shape(target) ||
        !init.multiplier.same_shape(target)) {
        throw ShapeMismatch("solve_layer_from: initial state does not match target");
    }
    return run_admm(target, init, config);
}

} // namespace delmar
