#include <doctest.h>

#include <cmath>

#include "fmcoint/kernels.hpp"
#include "fmcoint/rng.hpp"

using namespace fmcoint;

TEST_CASE("parzen values") {
  const KernelSpec parzen(KernelFamily::Parzen);
  CHECK(parzen.weight(0.0) == 1.0);
  // both branch formulas agree at the break: 1-1.5+0.75 = 2*(0.5)^3
  CHECK(parzen.weight(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(parzen.weight(1.2) == 0.0);
  CHECK(parzen.weight(-1.0) == 0.0);
}

TEST_CASE("evenness and range over random points") {
  PhiloxStream rng(3);
  for (const auto family : {KernelFamily::Parzen, KernelFamily::TukeyHanning,
                            KernelFamily::Bartlett, KernelFamily::QuadraticSpectral}) {
    const KernelSpec spec(family);
    CHECK(spec.weight(0.0) == 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = 4.0 * (rng.next_uniform() - 0.5);
      CHECK(spec.weight(x) == spec.weight(-x));
      CHECK(std::fabs(spec.weight(x)) <= 1.0);
    }
  }
}

TEST_CASE("compact support and qs tail decay") {
  CHECK(KernelSpec(KernelFamily::Parzen).compact_support());
  CHECK(KernelSpec(KernelFamily::TukeyHanning).compact_support());
  CHECK(KernelSpec(KernelFamily::Bartlett).compact_support());
  const KernelSpec qs(KernelFamily::QuadraticSpectral);
  CHECK_FALSE(qs.compact_support());
  // O(x^-2) tails: |w(x)| x^2 stays bounded
  CHECK(std::fabs(qs.weight(10.0)) * 100.0 < 1.0);
  CHECK(std::fabs(qs.weight(100.0)) * 10000.0 < 1.0);
}

TEST_CASE("assumption-K flags") {
  CHECK(KernelSpec(KernelFamily::Parzen).satisfies_assumption_k());
  CHECK(KernelSpec(KernelFamily::TukeyHanning).satisfies_assumption_k());
  CHECK_FALSE(KernelSpec(KernelFamily::Bartlett).satisfies_assumption_k());
  CHECK_FALSE(KernelSpec(KernelFamily::QuadraticSpectral).satisfies_assumption_k());
}

TEST_CASE("curvature matches a central finite difference") {
  // (w(h) - 2w(0) + w(-h)) / h^2 -> w''(0)
  for (const auto family : {KernelFamily::Parzen, KernelFamily::TukeyHanning,
                            KernelFamily::QuadraticSpectral}) {
    const KernelSpec spec(family);
    const double h = 1e-4;
    const double fd = (spec.weight(h) - 2.0 + spec.weight(-h)) / (h * h);
    CHECK(spec.curvature_at_zero() == doctest::Approx(fd).epsilon(1e-4));
  }
  CHECK(KernelSpec(KernelFamily::Parzen).curvature_at_zero() == -12.0);
  CHECK(KernelSpec(KernelFamily::TukeyHanning).curvature_at_zero() ==
        doctest::Approx((KernelSpec(KernelFamily::TukeyHanning).weight(1e-4) - 2.0 +
                         KernelSpec(KernelFamily::TukeyHanning).weight(-1e-4)) /
                        1e-8)
            .epsilon(1e-6));
  CHECK_THROWS_AS((void)KernelSpec(KernelFamily::Bartlett).curvature_at_zero(),
                  std::domain_error);
}

TEST_CASE("bandwidth rules") {
  CHECK(BandwidthRule::power(1.0, 0.25).evaluate(256) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(BandwidthRule::power(3.0, 0.2).evaluate(243) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(BandwidthRule::power(1.0, 0.25).evaluate(100) ==
        doctest::Approx(std::pow(100.0, 0.25)).epsilon(1e-15));
  CHECK(BandwidthRule::power(1.0, 0.25, true).evaluate(100) == 3.0);  // floor(3.1623)
  CHECK(BandwidthRule::constant(5.0).evaluate(10) == 5.0);
  CHECK_THROWS_AS(BandwidthRule::power(1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthRule::power(-1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthRule::constant(0.0), std::invalid_argument);
}

TEST_CASE("bandwidth parsing") {
  CHECK(BandwidthRule::parse("1*T^0.25").evaluate(256) == doctest::Approx(4.0));
  CHECK(BandwidthRule::parse("T^0.25").evaluate(256) == doctest::Approx(4.0));
  CHECK(BandwidthRule::parse("3*T^0.2").evaluate(243) == doctest::Approx(9.0));
  CHECK(BandwidthRule::parse("4").evaluate(999) == 4.0);
  CHECK(BandwidthRule::parse("1*T^0.25", true).evaluate(100) == 3.0);
  CHECK_THROWS(BandwidthRule::parse("junk*junk"));
}

TEST_CASE("kernel parsing") {
  CHECK(KernelSpec::parse("parzen").family() == KernelFamily::Parzen);
  CHECK(KernelSpec::parse("th").family() == KernelFamily::TukeyHanning);
  CHECK(KernelSpec::parse("bartlett").family() == KernelFamily::Bartlett);
  CHECK(KernelSpec::parse("qs").family() == KernelFamily::QuadraticSpectral);
  CHECK_THROWS_AS((void)KernelSpec::parse("gauss"), std::invalid_argument);
}
