#pragma once

#include <cstddef>

// Data-parallel inner loops used by the estimators and the Monte Carlo
// harness. Every primitive has a scalar reference implementation and an
// AVX2+FMA variant; the active one is selected once at startup from CPU
// capabilities (override with FMCOINT_SIMD=scalar|avx2). The variants are
// equivalence-tested against each other; results may differ in the last
// bits because reduction order differs.

namespace fmcoint::simd {

enum class Backend { Scalar, Avx2 };

// Backend chosen at startup; stable for the process lifetime.
Backend active();
const char* backend_name(Backend b);
bool avx2_supported();

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(std::size_t n, double alpha, const double* x, double* y);

// sum_i x[i]
double sum(const double* x, std::size_t n);

// sum_i exp(-0.5 * ((center - s[i]) * inv_bw)^2)  -- Gaussian KDE inner loop
double gauss_kernel_sum(const double* s, std::size_t n, double center, double inv_bw);

// Reference and vector implementations, exposed for equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(std::size_t n, double alpha, const double* x, double* y);
double sum(const double* x, std::size_t n);
double gauss_kernel_sum(const double* s, std::size_t n, double center, double inv_bw);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(std::size_t n, double alpha, const double* x, double* y);
double sum(const double* x, std::size_t n);
double gauss_kernel_sum(const double* s, std::size_t n, double center, double inv_bw);
}  // namespace avx2

}  // namespace fmcoint::simd
