// Shared helpers for the test suite. Everything here recomputes results
// through routes independent of the library kernels: plain scalar loops,
// std::mt19937_64 randomness, modified Gram-Schmidt, golden-section search,
// and a Gram-matrix Jacobi eigensolver. Tests compare library output against
// these, never against the library itself.
#ifndef DELMAR_TEST_SUPPORT_HPP
#define DELMAR_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "delmar/dense_matrix.hpp"

namespace testsupport {

using delmar::DenseMatrix;

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                 double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, scale);
    DenseMatrix m(rows, cols);
    for (double& v : m.data) v = dist(gen);
    return m;
}

inline DenseMatrix sparse_matrix(std::size_t rows, std::size_t cols, double density,
                                 double amplitude, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DenseMatrix m(rows, cols);
    for (double& v : m.data) {
        if (u(gen) < density) v = u(gen) < 0.5 ? amplitude : -amplitude;
    }
    return m;
}

// Plain triple-loop product, accumulation order j-major to stay independent
// of the library's i-k-j kernel.
inline DenseMatrix oracle_multiply(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) {
        for (std::size_t i = 0; i < a.rows; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) {
                acc += a(i, k) * b(k, j);
            }
            c(i, j) = acc;
        }
    }
    return c;
}

// Scalar-loop augmented Lagrangian: (beta/2)||XY-S||^2 + <XY-S, e> + ||Z||_1/beta.
inline double oracle_lagrangian(const DenseMatrix& x, const DenseMatrix& y,
                                const DenseMatrix& z, const DenseMatrix& e,
                                const DenseMatrix& s, double beta) {
    double quad = 0.0, inner = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < s.rows; ++i) {
        for (std::size_t j = 0; j < s.cols; ++j) {
            double xy = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k) xy += x(i, k) * y(k, j);
            const double d = xy - s(i, j);
            quad += d * d;
            inner += d * e(i, j);
            l1 += std::abs(z(i, j));
        }
    }
    return 0.5 * beta * quad + inner + l1 / beta;
}

// Golden-section minimizer for a strictly unimodal scalar function.
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

// Modified Gram-Schmidt orthonormal basis of the columns of a. Columns whose
// residual norm falls below drop_tol are dropped, so the result spans the
// numerical column space.
inline DenseMatrix mgs_basis(const DenseMatrix& a, double drop_tol = 1e-10) {
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < a.cols; ++j) {
        std::vector<double> v(a.rows);
        for (std::size_t i = 0; i < a.rows; ++i) v[i] = a(i, j);
        for (const auto& q : cols) {
            double dot = 0.0;
            for (std::size_t i = 0; i < a.rows; ++i) dot += q[i] * v[i];
            for (std::size_t i = 0; i < a.rows; ++i) v[i] -= dot * q[i];
        }
        double norm = 0.0;
        for (double t : v) norm += t * t;
        norm = std::sqrt(norm);
        if (norm > drop_tol) {
            for (double& t : v) t /= norm;
            cols.push_back(std::move(v));
        }
    }
    DenseMatrix q(a.rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < a.rows; ++i) q(i, j) = cols[j][i];
    }
    return q;
}

// Q * Q^T * m for an orthonormal-column q: projection onto span(q).
inline DenseMatrix project_onto(const DenseMatrix& q, const DenseMatrix& m) {
    return oracle_multiply(q, oracle_multiply(delmar::transpose(q), m));
}

// Singular values (descending) via cyclic Jacobi on the small-side Gram
// matrix. Independent of the library's one-sided SVD.
inline std::vector<double> oracle_sigmas(const DenseMatrix& a) {
    const DenseMatrix b = a.rows <= a.cols ? a : delmar::transpose(a);
    DenseMatrix g = oracle_multiply(b, delmar::transpose(b));
    const std::size_t n = g.rows;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += g(p, q) * g(p, q);
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(g(p, q)) < 1e-300) continue;
                const double zeta = (g(q, q) - g(p, p)) / (2.0 * g(p, q));
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double gkp = g(k, p), gkq = g(k, q);
                    g(k, p) = c * gkp - s * gkq;
                    g(k, q) = s * gkp + c * gkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double gpk = g(p, k), gqk = g(q, k);
                    g(p, k) = c * gpk - s * gqk;
                    g(q, k) = s * gpk + c * gqk;
                }
            }
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(std::max(0.0, g(i, i)));
    std::sort(out.rbegin(), out.rend());
    return out;
}

// Rank by counting singular values above a fixed fraction of the largest.
inline std::size_t oracle_rank(const DenseMatrix& a, double rel_threshold) {
    const std::vector<double> sv = oracle_sigmas(a);
    std::size_t count = 0;
    for (double s : sv) {
        if (s > rel_threshold * sv.front()) ++count;
    }
    return count;
}

// Gradient of the augmented Lagrangian in Y at fixed X, Z: X^T(beta(XY-S)+e),
// scalar loops throughout.
inline DenseMatrix oracle_grad_y(const DenseMatrix& x, const DenseMatrix& y,
                                 const DenseMatrix& e, const DenseMatrix& s, double beta) {
    DenseMatrix inner(s.rows, s.cols);
    for (std::size_t i = 0; i < s.rows; ++i) {
        for (std::size_t j = 0; j < s.cols; ++j) {
            double xy = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k) xy += x(i, k) * y(k, j);
            inner(i, j) = beta * (xy - s(i, j)) + e(i, j);
        }
    }
    return oracle_multiply(delmar::transpose(x), inner);
}

// Gradient in X at fixed Y, Z: (beta(XY-S)+e)Y^T.
inline DenseMatrix oracle_grad_x(const DenseMatrix& x, const DenseMatrix& y,
                                 const DenseMatrix& e, const DenseMatrix& s, double beta) {
    DenseMatrix inner(s.rows, s.cols);
    for (std::size_t i = 0; i < s.rows; ++i) {
        for (std::size_t j = 0; j < s.cols; ++j) {
            double xy = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k) xy += x(i, k) * y(k, j);
            inner(i, j) = beta * (xy - s(i, j)) + e(i, j);
        }
    }
    return oracle_multiply(inner, delmar::transpose(y));
}

inline double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

} // namespace testsupport

#endif
