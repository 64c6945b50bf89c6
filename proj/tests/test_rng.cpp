#include <doctest.h>

#include <cmath>
#include <vector>

#include "fmcoint/rng.hpp"

using namespace fmcoint;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 reference vectors
  CHECK(PhiloxStream::block({0u, 0u, 0u, 0u}, {0u, 0u}) ==
        std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(PhiloxStream::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu}) ==
        std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(PhiloxStream::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("same seed and stream reproduce bit-identically") {
  PhiloxStream a(123456789, 7);
  PhiloxStream b(123456789, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_gaussian() == b.next_gaussian());
}

TEST_CASE("different streams under one seed are distinct") {
  PhiloxStream a(42, 0);
  PhiloxStream b(42, 1);
  int equal = 0;
  for (int i = 0; i < 256; ++i) equal += a.next_uniform() == b.next_uniform();
  CHECK(equal == 0);
}

TEST_CASE("uniforms live in (0,1] and gaussians have the right moments") {
  PhiloxStream rng(2024);
  const int n = 200000;
  double mean = 0.0, var = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    if (i == 0) continue;
  }
  std::vector<double> z(n);
  rng.fill_gaussian(z);
  for (const double v : z) mean += v;
  mean /= n;
  for (const double v : z) var += (v - mean) * (v - mean);
  var /= n - 1;
  // 3 sigma bands for the sample moments
  CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}
