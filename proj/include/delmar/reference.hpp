#ifndef DELMAR_REFERENCE_HPP
#define DELMAR_REFERENCE_HPP

#include "delmar/kernels.hpp"

namespace delmar {
namespace reference {

// Serial twins of the OpenMP kernels. Loop bodies and accumulation order match
// the parallel versions exactly, so outputs are required to be bitwise equal;
// the test suite and the benchmark both rely on that.

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix shrink(const DenseMatrix& a, double tau);
SignSplit split_signs(const DenseMatrix& a);
QrResult qr_decompose(const DenseMatrix& a);

} // namespace reference
} // namespace delmar

#endif
