#ifndef DELMAR_KERNELS_HPP
#define DELMAR_KERNELS_HPP

#include "delmar/dense_matrix.hpp"

namespace delmar {

// Thin (economy) QR by Householder reflections. For rows >= cols the factors
// satisfy q (rows x cols, orthonormal columns) * r (cols x cols, upper
// triangular, nonnegative diagonal) = a. A wide input is factored through its
// transpose: transposed_input is set and q * r reconstructs aᵀ instead; only
// |diag(r)| is meaningful to callers in that case, which is all the rank
// estimator reads.
struct QrResult {
    DenseMatrix q;
    DenseMatrix r;
    bool transposed_input = false;
};

// C = A * B. OpenMP-parallel over rows of C; each output element is
// accumulated serially in ascending inner index, so results are bitwise
// identical to reference::multiply for any thread count.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

QrResult qr_decompose(const DenseMatrix& a);

// Moore-Penrose pseudoinverse via one-sided Jacobi SVD. Singular values below
// max(rows, cols) * eps * sigma_max are treated as zero.
DenseMatrix pseudoinverse(const DenseMatrix& a);

// Soft threshold: shrink(a, tau)[i][j] = sign(a) * max(|a| - tau, 0).
DenseMatrix shrink(const DenseMatrix& a, double tau);

// Splits a into elementwise nonnegative (pos, neg) with pos - neg = a exactly
// and pos .* neg = 0.
struct SignSplit {
    DenseMatrix pos;
    DenseMatrix neg;
};
SignSplit split_signs(const DenseMatrix& a);

// Absolute values of r's diagonal in factorization order.
std::vector<double> qr_diagonal(const DenseMatrix& a);

// ||aᵀa - I||_F, the orthonormality defect of a's columns.
double orthonormality_defect(const DenseMatrix& a);

} // namespace delmar

#endif
