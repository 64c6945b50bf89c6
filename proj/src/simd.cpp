#include "fmcoint/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace fmcoint::simd {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend select_backend() {
  if (const char* env = std::getenv("FMCOINT_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::Avx2;
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

const Backend g_backend = select_backend();

}  // namespace

Backend active() { return g_backend; }

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
  return g_backend == Backend::Avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  g_backend == Backend::Avx2 ? avx2::axpy(n, alpha, x, y) : scalar::axpy(n, alpha, x, y);
}

double sum(const double* x, std::size_t n) {
  return g_backend == Backend::Avx2 ? avx2::sum(x, n) : scalar::sum(x, n);
}

double gauss_kernel_sum(const double* s, std::size_t n, double center, double inv_bw) {
  return g_backend == Backend::Avx2 ? avx2::gauss_kernel_sum(s, n, center, inv_bw)
                                    : scalar::gauss_kernel_sum(s, n, center, inv_bw);
}

}  // namespace fmcoint::simd
