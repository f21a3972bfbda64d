#include "delmar/reference.hpp"

#include <cmath>

#include "delmar/errors.hpp"

namespace delmar {
namespace reference {

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw ShapeMismatch("reference::multiply: inner dimensions differ");
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
    return c;
}

DenseMatrix shrink(const DenseMatrix& a, double tau) {
    if (!(tau >= 0.0)) throw NegativeThreshold("reference::shrink: threshold must be nonnegative");
    DenseMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double v = a.data[i];
        const double mag = std::fabs(v) - tau;
        out.data[i] = mag > 0.0 ? (v < 0.0 ? -mag : mag) : 0.0;
    }
    return out;
}

SignSplit split_signs(const DenseMatrix& a) {
    if (!is_finite(a)) throw NonFiniteInput("reference::split_signs: input has NaN/Inf");
    SignSplit s{DenseMatrix(a.rows, a.cols), DenseMatrix(a.rows, a.cols)};
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double v = a.data[i];
        if (v > 0.0) {
            s.pos.data[i] = v;
        } else if (v < 0.0) {
            s.neg.data[i] = -v;
        }
    }
    return s;
}

namespace {

// Same Householder elimination as the parallel kernel, column loops serial.
void householder_tall(const DenseMatrix& a, DenseMatrix& q, DenseMatrix& r) {
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    DenseMatrix w = a;
    DenseMatrix v(m, n);
    std::vector<double> beta(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) norm2 += w(i, k) * w(i, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) {
            w(k, k) = 0.0;
            continue;
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

        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v(i, k) * w(i, j);
            const double s = beta[k] * dot;
            for (std::size_t i = k; i < m; ++i) w(i, j) -= s * v(i, k);
        }
    }

    q = DenseMatrix(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t kk = n; kk-- > 0;) {
        if (beta[kk] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = kk; i < m; ++i) dot += v(i, kk) * q(i, j);
            const double s = beta[kk] * dot;
            for (std::size_t i = kk; i < m; ++i) q(i, j) -= s * v(i, kk);
        }
    }

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
    if (a.rows == 0 || a.cols == 0) throw ShapeMismatch("reference::qr_decompose: empty matrix");
    if (!is_finite(a)) throw NonFiniteInput("reference::qr_decompose: input has NaN/Inf");
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

} // namespace reference
} // namespace delmar
