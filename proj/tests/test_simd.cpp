#include <doctest.h>

#include <cmath>
#include <vector>

#include "fmcoint/rng.hpp"
#include "fmcoint/simd.hpp"

using namespace fmcoint;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  PhiloxStream rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.next_gaussian();
  return v;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  if (!simd::avx2_supported()) {
    MESSAGE("avx2 not available; skipping equivalence tests");
    return;
  }
  // odd sizes exercise every tail path
  for (const std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{17},
                              std::size_t{64}, std::size_t{1001}, std::size_t{4096}}) {
    const auto a = random_vector(n, 11 + n);
    const auto b = random_vector(n, 77 + n);

    const double d_ref = simd::scalar::dot(a.data(), b.data(), n);
    const double d_vec = simd::avx2::dot(a.data(), b.data(), n);
    CHECK(d_vec == doctest::Approx(d_ref).epsilon(1e-12));

    const double s_ref = simd::scalar::sum(a.data(), n);
    const double s_vec = simd::avx2::sum(a.data(), n);
    CHECK(s_vec == doctest::Approx(s_ref).epsilon(1e-12));

    std::vector<double> y_ref = b, y_vec = b;
    simd::scalar::axpy(n, -0.37, a.data(), y_ref.data());
    simd::avx2::axpy(n, -0.37, a.data(), y_vec.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y_vec[i] == doctest::Approx(y_ref[i]).epsilon(1e-14));
    }

    const double k_ref = simd::scalar::gauss_kernel_sum(a.data(), n, 0.25, 2.0);
    const double k_vec = simd::avx2::gauss_kernel_sum(a.data(), n, 0.25, 2.0);
    CHECK(k_vec == doctest::Approx(k_ref).epsilon(1e-11));
  }
}

TEST_CASE("avx2 gaussian kernel handles extreme arguments") {
  if (!simd::avx2_supported()) return;
  // huge z underflows to ~0 instead of producing garbage
  const std::vector<double> far(8, 1000.0);
  const double v = simd::avx2::gauss_kernel_sum(far.data(), far.size(), 0.0, 1.0);
  CHECK(v >= 0.0);
  CHECK(v < 1e-100);

  // z = 0 gives exactly n
  const std::vector<double> at(5, 0.25);
  CHECK(simd::avx2::gauss_kernel_sum(at.data(), at.size(), 0.25, 3.0) ==
        doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("dispatched entry points match the active backend") {
  const auto a = random_vector(257, 5);
  const auto b = random_vector(257, 6);
  const double got = simd::dot(a.data(), b.data(), a.size());
  const double want = simd::active() == simd::Backend::Avx2
                          ? simd::avx2::dot(a.data(), b.data(), a.size())
                          : simd::scalar::dot(a.data(), b.data(), a.size());
  CHECK(got == want);
}
