#include "fmcoint/simd.hpp"

#include <cmath>

namespace fmcoint::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double gauss_kernel_sum(const double* s, std::size_t n, double center, double inv_bw) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (center - s[i]) * inv_bw;
    acc += std::exp(-0.5 * z * z);
  }
  return acc;
}

}  // namespace fmcoint::simd::scalar
