#ifndef DELMAR_DENSE_MATRIX_HPP
#define DELMAR_DENSE_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace delmar {

// Row-major dense matrix of doubles. Plain value type: copies are deep,
// moves are cheap, nothing is shared, so passing matrices across threads
// is safe by construction.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool same_shape(const DenseMatrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

DenseMatrix zeros(std::size_t rows, std::size_t cols);
DenseMatrix identity(std::size_t n);

bool is_finite(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);
double l1_norm(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

[[nodiscard]] DenseMatrix transpose(const DenseMatrix& a);

// c = a + alpha * b; inputs are untouched, the sum is returned.
[[nodiscard]] DenseMatrix add_scaled(const DenseMatrix& a, double alpha, const DenseMatrix& b);
[[nodiscard]] DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
[[nodiscard]] DenseMatrix scale(const DenseMatrix& a, double alpha);

} // namespace delmar

#endif
