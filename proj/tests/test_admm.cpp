#include <doctest.h>

#include <cmath>

#include "delmar/admm.hpp"
#include "delmar/errors.hpp"
#include "delmar/kernels.hpp"
#include "delmar/synth.hpp"
#include "test_support.hpp"

using namespace delmar;
using testsupport::golden_min;
using testsupport::mgs_basis;
using testsupport::oracle_grad_x;
using testsupport::oracle_grad_y;
using testsupport::oracle_lagrangian;
using testsupport::project_onto;
using testsupport::random_matrix;

TEST_CASE("config validation") {
    const DenseMatrix s = random_matrix(10, 20, 700);
    AdmmConfig cfg;
    cfg.beta = 1.0;
    CHECK_THROWS_AS(solve_layer(s, 3, cfg), InvalidConfig);
    cfg = AdmmConfig{};
    cfg.eta = 0.9;
    CHECK_THROWS_AS(solve_layer(s, 3, cfg), InvalidConfig);
    cfg = AdmmConfig{};
    cfg.tol = 0.0;
    CHECK_THROWS_AS(solve_layer(s, 3, cfg), InvalidConfig);
    cfg = AdmmConfig{};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(solve_layer(s, 3, cfg), InvalidConfig);
}

TEST_CASE("rank bounds") {
    const DenseMatrix s = random_matrix(10, 20, 701);
    CHECK_THROWS_AS(solve_layer(s, 0, AdmmConfig{}), RankTooLarge);
    CHECK_THROWS_AS(solve_layer(s, 10, AdmmConfig{}), RankTooLarge);
    CHECK_NOTHROW(solve_layer(s, 9, AdmmConfig{}));
}

TEST_CASE("non-finite target is rejected") {
    DenseMatrix s = random_matrix(6, 9, 702);
    s(3, 3) = std::nan("");
    CHECK_THROWS_AS(solve_layer(s, 2, AdmmConfig{}), NonFiniteInput);
}

TEST_CASE("zero target converges in one iteration to the zero fixed point") {
    const DenseMatrix s = zeros(12, 25);
    const SolveResult r = solve_layer(s, 4, AdmmConfig{});
    CHECK(r.trace.iterations == 1);
    CHECK(r.trace.termination == Termination::Tolerance);
    DenseMatrix recon = add_scaled(multiply(r.factor.x, r.factor.y), 1.0, r.factor.z);
    CHECK(frobenius_norm(recon) == 0.0);
}

TEST_CASE("solver loop is bitwise the same computation as the public ops") {
    const DenseMatrix s = random_matrix(14, 33, 703);
    LayerFactor init;
    init.x = random_matrix(14, 5, 704);
    init.y = random_matrix(5, 33, 705);
    init.z = zeros(14, 33);
    init.multiplier = random_matrix(14, 33, 706, 0.1);
    init.rank = 5;

    AdmmConfig cfg;
    cfg.max_iter = 1;
    cfg.tol = 1e-30;
    for (SolverMode mode : {SolverMode::Accelerated, SolverMode::Exact}) {
        cfg.mode = mode;
        const SolveResult r = solve_layer_from(s, init, cfg);

        const DenseMatrix x = mode == SolverMode::Exact
                                  ? update_x_exact(s, init.y, init.multiplier, cfg.beta)
                                  : update_x_accelerated(s, init.y, init.multiplier, cfg.beta);
        const DenseMatrix y = mode == SolverMode::Exact
                                  ? update_y_exact(s, x, init.multiplier, cfg.beta)
                                  : update_y_accelerated(s, x, init.multiplier, cfg.beta);
        const DenseMatrix z = update_z(s, x, y, init.multiplier, cfg.beta);
        const DenseMatrix e = update_multiplier(init.multiplier, s, x, y, z, cfg.beta, cfg.eta);

        CHECK(max_abs_diff(r.factor.x, x) == 0.0);
        CHECK(max_abs_diff(r.factor.y, y) == 0.0);
        CHECK(max_abs_diff(r.factor.z, z) == 0.0);
        CHECK(max_abs_diff(r.factor.multiplier, e) == 0.0);
    }
}

TEST_CASE("exact updates satisfy first-order stationarity") {
    const DenseMatrix s = random_matrix(30, 80, 707);
    const DenseMatrix e = random_matrix(30, 80, 708, 0.3);
    const double beta = 10.0;

    const DenseMatrix y0 = random_matrix(6, 80, 709);
    const DenseMatrix x = update_x_exact(s, y0, e, beta);
    const DenseMatrix gx = oracle_grad_x(x, y0, e, s, beta);
    CHECK(frobenius_norm(gx) <=
          1e-8 * beta * frobenius_norm(s) * frobenius_norm(y0));

    const DenseMatrix y = update_y_exact(s, x, e, beta);
    const DenseMatrix gy = oracle_grad_y(x, y, e, s, beta);
    CHECK(frobenius_norm(gy) <=
          1e-8 * beta * frobenius_norm(s) * frobenius_norm(y));
}

TEST_CASE("z update minimizes its scalar objective (golden-section oracle)") {
    const DenseMatrix s = random_matrix(9, 13, 710);
    const DenseMatrix x = random_matrix(9, 3, 711);
    const DenseMatrix y = random_matrix(3, 13, 712);
    const DenseMatrix e = random_matrix(9, 13, 713, 0.5);
    const double beta = 4.0;
    const DenseMatrix z = update_z(s, x, y, e, beta);
    const DenseMatrix xy = multiply(x, y);

    for (std::size_t idx : {0u, 7u, 23u, 50u, 88u, 116u}) {
        const std::size_t i = idx / s.cols, j = idx % s.cols;
        const double v = xy(i, j) - s(i, j);
        const double eij = e(i, j);
        auto f = [&](double t) {
            return 0.5 * beta * (v + t) * (v + t) + eij * (v + t) + std::abs(t) / beta;
        };
        const double span = std::abs(v) + std::abs(eij) / beta + 1.0;
        const double best = golden_min(f, -span, span);
        CHECK(std::abs(z(i, j) - best) < 1e-6);
        CHECK(f(z(i, j)) <= f(best) + 1e-12);
    }
}

TEST_CASE("z threshold is 1/beta^2") {
    // x*y = 0, e = 0: z = shrink(s, 1/beta^2) exactly
    const double beta = 5.0;
    DenseMatrix s(1, 3);
    s(0, 0) = 0.05;  // above 1/25 = 0.04
    s(0, 1) = 0.03;  // below
    s(0, 2) = -0.1;
    const DenseMatrix z =
        update_z(s, zeros(1, 2), zeros(2, 3), zeros(1, 3), beta);
    CHECK(z(0, 0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(z(0, 1) == 0.0);
    CHECK(z(0, 2) == doctest::Approx(-0.06).epsilon(1e-12));
}

TEST_CASE("multiplier update frozen and additive behavior") {
    const DenseMatrix s = random_matrix(5, 7, 714);
    const DenseMatrix x = random_matrix(5, 2, 715);
    const DenseMatrix y = random_matrix(2, 7, 716);
    const DenseMatrix z = random_matrix(5, 7, 717, 0.1);
    // eta * beta = 2
    DenseMatrix e = update_multiplier(zeros(5, 7), s, x, y, z, 2.0, 1.0);
    DenseMatrix residual = add_scaled(multiply(x, y), 1.0, z);
    residual = subtract(residual, s);
    CHECK(max_abs_diff(e, scale(residual, 2.0)) < 1e-14);

    // constant factors: successive updates add the same increment
    const DenseMatrix e2 = update_multiplier(e, s, x, y, z, 2.0, 1.0);
    CHECK(max_abs_diff(subtract(e2, e), scale(residual, 2.0)) < 1e-12);

    // zero residual leaves e unchanged up to the roundoff of recomposing it
    const DenseMatrix zfit = subtract(s, multiply(x, y));
    const DenseMatrix e3 = update_multiplier(e, s, x, y, zfit, 2.0, 1.0);
    CHECK(max_abs_diff(e3, e) < 1e-13);
}

TEST_CASE("lagrangian matches the scalar oracle") {
    const DenseMatrix s = random_matrix(11, 17, 718);
    const DenseMatrix x = random_matrix(11, 4, 719);
    const DenseMatrix y = random_matrix(4, 17, 720);
    const DenseMatrix z = random_matrix(11, 17, 721, 0.2);
    const DenseMatrix e = random_matrix(11, 17, 722, 0.4);
    const double got = evaluate_lagrangian(x, y, z, e, s, 7.0);
    const double want = oracle_lagrangian(x, y, z, e, s, 7.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("accelerated x has orthonormal columns and xy projects the shifted target") {
    const DenseMatrix s = random_matrix(24, 60, 723);
    const DenseMatrix e = random_matrix(24, 60, 724, 0.2);
    const DenseMatrix y0 = random_matrix(7, 60, 725);
    const double beta = 10.0;

    const DenseMatrix x = update_x_accelerated(s, y0, e, beta);
    CHECK(orthonormality_defect(x) <= 1e-10);

    const DenseMatrix y = update_y_accelerated(s, x, e, beta);
    const DenseMatrix xy = multiply(x, y);

    // independent projector: modified Gram-Schmidt basis of the same columns
    const DenseMatrix shifted = add_scaled(s, -1.0 / beta, e);
    const DenseMatrix q = mgs_basis(multiply(shifted, transpose(y0)));
    const DenseMatrix projected = project_onto(q, shifted);
    CHECK(frobenius_norm(subtract(xy, projected)) <= 1e-8 * frobenius_norm(s));
}

TEST_CASE("solves are bitwise deterministic") {
    const DenseMatrix s = random_matrix(20, 45, 726);
    AdmmConfig cfg;
    cfg.tol = 1e-9;
    cfg.max_iter = 40;
    cfg.seed = 9;
    const SolveResult a = solve_layer(s, 5, cfg);
    const SolveResult b = solve_layer(s, 5, cfg);
    CHECK(max_abs_diff(a.factor.x, b.factor.x) == 0.0);
    CHECK(max_abs_diff(a.factor.y, b.factor.y) == 0.0);
    CHECK(max_abs_diff(a.factor.z, b.factor.z) == 0.0);
    CHECK(max_abs_diff(a.factor.multiplier, b.factor.multiplier) == 0.0);
    REQUIRE(a.trace.iterations == b.trace.iterations);
    for (std::size_t i = 0; i < a.trace.iterations; ++i) {
        CHECK(a.trace.primal_residuals[i] == b.trace.primal_residuals[i]);
        CHECK(a.trace.lagrangian_values[i] == b.trace.lagrangian_values[i]);
    }
}

TEST_CASE("noiseless planted factorization converges below 1e-4") {
    const DenseMatrix s = multiply(random_matrix(40, 5, 727), random_matrix(5, 120, 728));
    AdmmConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_iter = 300;
    const SolveResult r = solve_layer(s, 5, cfg);
    CHECK(r.trace.primal_residuals.back() <= 1e-4);
    CHECK(r.trace.iterations <= 300);
}

TEST_CASE("trace bookkeeping is consistent") {
    const DenseMatrix s = random_matrix(15, 40, 729);
    AdmmConfig cfg;
    cfg.tol = 1e-16;
    cfg.max_iter = 7;
    const SolveResult r = solve_layer(s, 4, cfg);
    CHECK(r.trace.termination == Termination::MaxIter);
    CHECK(r.trace.iterations == 7);
    CHECK(r.trace.primal_residuals.size() == 7);
    CHECK(r.trace.lagrangian_values.size() == 7);
    CHECK(r.factor.rank == 4);
    CHECK(r.factor.layer_index == 1);
}

TEST_CASE("restart state must match the target shape") {
    const DenseMatrix s = random_matrix(10, 16, 730);
    LayerFactor bad;
    bad.x = random_matrix(10, 3, 731);
    bad.y = random_matrix(4, 16, 732); // inner mismatch
    bad.z = zeros(10, 16);
    bad.multiplier = zeros(10, 16);
    CHECK_THROWS_AS(solve_layer_from(s, bad, AdmmConfig{}), ShapeMismatch);
}

TEST_CASE("diverging multiplier raises NonFiniteIterate") {
    const DenseMatrix s = random_matrix(8, 14, 733);
    AdmmConfig cfg;
    cfg.eta = 1e300; // force the multiplier out of range immediately
    cfg.tol = 1e-30;
    cfg.max_iter = 4;
    CHECK_THROWS_AS(solve_layer(s, 3, cfg), NonFiniteIterate);
}

TEST_CASE("z stays as sparse as the planted background after convergence") {
    // The shrink threshold 1/beta^2 must sit above the early-iteration
    // residual junk, or the multiplier bakes it in and z goes dense. beta = 2
    // gives threshold 0.25: noise stays out, the background passes through.
    SynthSpec spec;
    spec.m = 60;
    spec.n = 200;
    spec.ranks = {8};
    spec.background_density = 0.05;
    spec.background_amplitude = 0.25;
    spec.seed = 42;

    AdmmConfig cfg;
    cfg.beta = 2.0;
    cfg.tol = 1e-8;
    cfg.max_iter = 200;

    SUBCASE("noiseless, deep convergence") {
        const GroundTruth truth = generate(spec);
        const SolveResult r = solve_layer(truth.s, 8, cfg);
        REQUIRE(r.trace.termination == Termination::Tolerance);
        std::size_t nnz = 0;
        for (double v : r.factor.z.data) nnz += v != 0.0;
        const double frac = double(nnz) / double(r.factor.z.data.size());
        CHECK(frac <= 3.0 * spec.background_density);
        CHECK(nnz > 0);
    }

    SUBCASE("with dense noise below the threshold") {
        spec.noise_sigma = 0.002;
        const GroundTruth truth = generate(spec);
        cfg.tol = 1e-2; // the uncaptured noise sets the residual floor
        const SolveResult r = solve_layer(truth.s, 8, cfg);
        REQUIRE(r.trace.termination == Termination::Tolerance);
        std::size_t nnz = 0;
        for (double v : r.factor.z.data) nnz += v != 0.0;
        const double frac = double(nnz) / double(r.factor.z.data.size());
        CHECK(frac <= 3.0 * spec.background_density);
        CHECK(nnz > 0);
    }
}
