#ifndef DELMAR_ADMM_HPP
#define DELMAR_ADMM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "delmar/dense_matrix.hpp"

namespace delmar {

enum class SolverMode { Exact, Accelerated };

enum class Termination { Tolerance, MaxIter };

struct AdmmConfig {
    double beta = 10.0;      // penalty weight, > 1
    double eta = 1.6;        // multiplier step scale, >= 1
    double tol = 1e-5;       // relative primal residual target, > 0
    std::size_t max_iter = 500;
    SolverMode mode = SolverMode::Accelerated;
    std::uint64_t seed = 0;  // keys the Gaussian factor initialization
};

// One solved layer: target ~ x * y + z, with the running multiplier kept so a
// solve can be restarted exactly where it stopped.
struct LayerFactor {
    DenseMatrix x;
    DenseMatrix y;
    DenseMatrix z;
    DenseMatrix multiplier;
    std::size_t rank = 0;
    std::size_t layer_index = 0;
};

struct ConvergenceTrace {
    std::vector<double> primal_residuals;   // ||xy + z - target||_F / ||target||_F
    std::vector<double> lagrangian_values;  // augmented Lagrangian after each iteration
    Termination termination = Termination::MaxIter;
    std::size_t iterations = 0;
};

struct SolveResult {
    LayerFactor factor;
    ConvergenceTrace trace;
};

// Augmented Lagrangian: (beta/2)||xy - s||_F^2 + <xy - s, e> + (1/beta)||z||_1.
double evaluate_lagrangian(const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& z,
                           const DenseMatrix& e, const DenseMatrix& s, double beta);

// Weight update. Exact: least-squares against the shifted target,
// x = (s - e/beta) * pinv(y). Accelerated: orthonormal basis of the same
// quantity's product with yᵀ, x = Q-factor of (s - e/beta) * yᵀ.
DenseMatrix update_x_exact(const DenseMatrix& s, const DenseMatrix& y, const DenseMatrix& e,
                           double beta);
DenseMatrix update_x_accelerated(const DenseMatrix& s, const DenseMatrix& y, const DenseMatrix& e,
                                 double beta);

// Feature update. Exact: y = pinv(x) * (s - e/beta). Accelerated: when x has
// orthonormal columns this resolves to the projection-consistent closed form
// y = xᵀ (s - e/beta); otherwise the Q-factor of that product is returned.
DenseMatrix update_y_exact(const DenseMatrix& s, const DenseMatrix& x, const DenseMatrix& e,
                           double beta);
DenseMatrix update_y_accelerated(const DenseMatrix& s, const DenseMatrix& x, const DenseMatrix& e,
                                 double beta);

// Sparse component: z = shrink(s - xy - e/beta, 1/beta^2). The threshold is
// the sparsity weight 1/beta divided by the penalty beta.
DenseMatrix update_z(const DenseMatrix& s, const DenseMatrix& x, const DenseMatrix& y,
                     const DenseMatrix& e, double beta);

// Multiplier ascent: e + eta * beta * (xy + z - s).
DenseMatrix update_multiplier(const DenseMatrix& e, const DenseMatrix& s, const DenseMatrix& x,
                              const DenseMatrix& y, const DenseMatrix& z, double beta, double eta);

// Full per-layer solve: Gaussian-initialized factors, x -> y -> z -> e sweeps
// until the relative primal residual reaches config.tol or max_iter runs out.
// Initial factors may be supplied to restart from a previous state.
SolveResult solve_layer(const DenseMatrix& target, std::size_t rank, const AdmmConfig& config,
                        std::size_t layer_index = 1);
SolveResult solve_layer_from(const DenseMatrix& target, const LayerFactor& init,
                             const AdmmConfig& config);

} // namespace delmar

#endif
