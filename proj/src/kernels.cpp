#include "delmar/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "delmar/errors.hpp"

namespace delmar {

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw ShapeMismatch("multiply: inner dimensions differ");
    DenseMatrix c(a.rows, b.cols);
    const std::int64_t m = static_cast<std::int64_t>(a.rows);
    const std::size_t kk = a.cols;
    const std::size_t n = b.cols;
    // Row-parallel i-k-j order: every c(i,j) accumulates over k ascending,
    // the same op sequence as the serial reference, so outputs are bitwise
    // identical for any thread count.
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
        double* crow = &c.data[static_cast<std::size_t>(i) * n];
        const double* arow = &a.data[static_cast<std::size_t>(i) * kk];
        for (std::size_t k = 0; k < kk; ++k) {
            const double av = arow[k];
            const double* brow = &b.data[k * n];
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

DenseMatrix shrink(const DenseMatrix& a, double tau) {
    if (!(tau >= 0.0)) throw NegativeThreshold("shrink: threshold must be nonnegative");
    DenseMatrix out(a.rows, a.cols);
    const std::int64_t n = static_cast<std::int64_t>(a.data.size());
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = a.data[static_cast<std::size_t>(i)];
        const double mag = std::fabs(v) - tau;
        out.data[static_cast<std::size_t>(i)] = mag > 0.0 ? (v < 0.0 ? -mag : mag) : 0.0;
    }
    return out;
}

SignSplit split_signs(const DenseMatrix& a) {
    if (!is_finite(a)) throw NonFiniteInput("split_signs: input has NaN/Inf");
    SignSplit s{DenseMatrix(a.rows, a.cols), DenseMatrix(a.rows, a.cols)};
    const std::int64_t n = static_cast<std::int64_t>(a.data.size());
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = a.data[static_cast<std::size_t>(i)];
        if (v > 0.0) {
            s.pos.data[static_cast<std::size_t>(i)] = v;
        } else if (v < 0.0) {
            s.neg.data[static_cast<std::size_t>(i)] = -v;
        }
    }
    return s;
}

namespace {

// Householder QR of a tall (rows >= cols) matrix. Reflectors are applied
// column by column; the trailing update and the Q accumulation are parallel
// over independent columns, each handled by one thread with a serial dot
// product, so results do not depend on the thread count.
void householder_tall(const DenseMatrix& a, DenseMatrix& q, DenseMatrix& r) {
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    DenseMatrix w = a;                 // working copy, becomes R in the top block
    DenseMatrix v(m, n);               // reflector k stored in column k, rows k..m-1
    std::vector<double> beta(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) norm2 += w(i, k) * w(i, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) {
            w(k, k) = 0.0;
            continue;                  // zero column: identity reflector
        }
        const double alpha = w(k, k) >= 0.0 ? -norm : norm;
        const double v0 = w(k, k) - alpha;
        v(k, k) = v0;
        double vtv = v0 * v0;
        for (std::size_t i = k + 1; i < m; ++i) {
            v(i, k) = w(i, k);
            vtv += w(i, k) * w(i, k);
        }
        beta[k] = 2.0 / vtv;
        w(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) w(i, k) = 0.0;

        const std::int64_t jend = static_cast<std::int64_t>(n);
        #pragma omp parallel for schedule(static)
        for (std::int64_t j = static_cast<std::int64_t>(k) + 1; j < jend; ++j) {
            const std::size_t jj = static_cast<std::size_t>(j);
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v(i, k) * w(i, jj);
            const double s = beta[k] * dot;
            for (std::size_t i = k; i < m; ++i) w(i, jj) -= s * v(i, k);
        }
    }

    // Q = H_0 ... H_{n-1} applied to the first n identity columns, built by
    // applying reflectors in reverse; columns are independent.
    q = DenseMatrix(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t kk = n; kk-- > 0;) {
        if (beta[kk] == 0.0) continue;
        const std::int64_t jend = static_cast<std::int64_t>(n);
        #pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < jend; ++j) {
            const std::size_t jj = static_cast<std::size_t>(j);
            double dot = 0.0;
            for (std::size_t i = kk; i < m; ++i) dot += v(i, kk) * q(i, jj);
            const double s = beta[kk] * dot;
            for (std::size_t i = kk; i < m; ++i) q(i, jj) -= s * v(i, kk);
        }
    }

    // Fix signs so r's diagonal is nonnegative.
    r = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) r(i, j) = w(i, j);
    for (std::size_t k = 0; k < n; ++k) {
        if (r(k, k) < 0.0) {
            for (std::size_t j = k; j < n; ++j) r(k, j) = -r(k, j);
            for (std::size_t i = 0; i < m; ++i) q(i, k) = -q(i, k);
        }
    }
}

} // namespace

QrResult qr_decompose(const DenseMatrix& a) {
    if (a.rows == 0 || a.cols == 0) throw ShapeMismatch("qr_decompose: empty matrix");
    if (!is_finite(a)) throw NonFiniteInput("qr_decompose: input has NaN/Inf");
    QrResult out;
    if (a.rows >= a.cols) {
        householder_tall(a, out.q, out.r);
    } else {
        DenseMatrix at = transpose(a);
        householder_tall(at, out.q, out.r);
        out.transposed_input = true;
    }
    return out;
}

std::vector<double> qr_diagonal(const DenseMatrix& a) {
    QrResult f = qr_decompose(a);
    const std::size_t L = f.r.rows;
    std::vector<double> d(L);
    for (std::size_t i = 0; i < L; ++i) d[i] = std::fabs(f.r(i, i));
    return d;
}

double orthonormality_defect(const DenseMatrix& a) {
    DenseMatrix g = multiply(transpose(a), a);
    for (std::size_t i = 0; i < g.rows; ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

namespace {

// One-sided Jacobi SVD of a tall matrix: cyclic column rotations until all
// column pairs are orthogonal. Serial; accuracy matters more than speed here
// and the inputs stay small (factors, not signals).
struct JacobiSvd {
    DenseMatrix u;              // m x n, columns scaled to unit norm (or zero)
    DenseMatrix v;              // n x n
    std::vector<double> sigma;  // n
};

JacobiSvd jacobi_svd_tall(const DenseMatrix& a) {
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    DenseMatrix w = a;
    DenseMatrix v = identity(n);
    const int max_sweeps = 60;
    const double ortho_tol = 1e-14;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::fabs(apq) <= ortho_tol * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    JacobiSvd out{DenseMatrix(m, n), std::move(v), std::vector<double>(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm2 += w(i, j) * w(i, j);
        const double norm = std::sqrt(norm2);
        out.sigma[j] = norm;
        if (norm > 0.0) {
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) = w(i, j) / norm;
        }
    }
    return out;
}

} // namespace

DenseMatrix pseudoinverse(const DenseMatrix& a) {
    if (a.rows == 0 || a.cols == 0) throw ShapeMismatch("pseudoinverse: empty matrix");
    if (!is_finite(a)) throw NonFiniteInput("pseudoinverse: input has NaN/Inf");
    if (a.rows < a.cols) return transpose(pseudoinverse(transpose(a)));

    JacobiSvd svd = jacobi_svd_tall(a);
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    double sigma_max = 0.0;
    for (double s : svd.sigma) sigma_max = std::max(sigma_max, s);
    const double cutoff = static_cast<double>(std::max(m, n)) *
                          std::numeric_limits<double>::epsilon() * sigma_max;

    // pinv = sum over kept singular triplets of v_j u_jᵀ / sigma_j
    DenseMatrix pinv(n, m);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = svd.sigma[j];
        if (s <= cutoff || s == 0.0) continue;
        const double inv = 1.0 / s;
        for (std::size_t r = 0; r < n; ++r) {
            const double vr = svd.v(r, j) * inv;
            if (vr == 0.0) continue;
            for (std::size_t c = 0; c < m; ++c) pinv(r, c) += vr * svd.u(c, j);
        }
    }
    return pinv;
}

} // namespace delmar
