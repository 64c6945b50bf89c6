#include <doctest.h>

#include <cmath>

#include "fmcoint/dgp.hpp"
#include "fmcoint/fmols.hpp"
#include "fmcoint/lrcov.hpp"
#include "fmcoint/rng.hpp"

using namespace fmcoint;

namespace {

// m0 = 2, mx = 1 design with cross-correlated MA(1) errors
DgpSpec trivariate_spec() {
  DgpSpec spec;
  spec.a = Matrix(2, 1);
  spec.a << 1.5, -0.7;
  Matrix d1(3, 3);
  d1 << 0.4, 0.1, 0.2,
        0.0, 0.3, -0.1,
        0.2, 0.0, 0.5;
  spec.ma_coeffs = {d1};
  spec.sigma = Matrix::Identity(3, 3);
  spec.sigma(0, 2) = spec.sigma(2, 0) = 0.4;
  spec.x0 = Vector::Zero(1);
  return spec;
}

}  // namespace

TEST_CASE("step (vi) reconstructs from the stored intermediates") {
  const auto data = simulate(DgpSpec::dgp2(0.8), 150, 5);
  const auto fit = fm_ols(data, KernelSpec(KernelFamily::Parzen), 4.0);
  const Matrix numer = cross_product(fit.y_plus, data.x) -
                       static_cast<double>(fit.sample_size) * fit.delta_plus_0x;
  const Matrix rebuilt = linalg::spd_solve(fit.xtx, numer.transpose(), "test").transpose();
  CHECK((rebuilt - fit.a_plus).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("zero corrections reduce the FM estimator to OLS") {
  const auto data = simulate(DgpSpec::dgp1(0.0), 120, 9);
  const auto fit = fm_ols(data, KernelSpec(KernelFamily::Parzen), 3.0);
  // inject delta_plus_0x = 0 and f_hat = 0 into step (vi): y+ becomes y
  const Matrix numer = cross_product(data.y, data.x);
  const Matrix reduced = linalg::spd_solve(fit.xtx, numer.transpose(), "test").transpose();
  CHECK((reduced - fit.a_ols).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("pipeline-duplication oracle, DGP2 p=0.8, T=100") {
  const auto spec = DgpSpec::dgp2(0.8);
  const Eigen::Index t_len = 100;
  const auto data = simulate(spec, t_len, 2024);
  const double k_bw = std::pow(static_cast<double>(t_len), 0.25);
  const auto fit = fm_ols(data, KernelSpec(KernelFamily::Parzen), k_bw);

  // straight-line reimplementation of steps (ii)-(vi): explicit loops plus
  // lag_autocovariance, nothing shared with the fmols/lrcov code paths
  const auto& y = data.y.values();
  const auto& x = data.x.values();
  double sxx = 0.0, sxy = 0.0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    sxx += x(t, 0) * x(t, 0);
    sxy += y(t, 0) * x(t, 0);
  }
  const double a_ols = sxy / sxx;

  Matrix uh(t_len, 2);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    uh(t, 0) = y(t, 0) - a_ols * x(t, 0);
    uh(t, 1) = t == 0 ? x(0, 0) - (*data.x0)(0) : x(t, 0) - x(t - 1, 0);
  }
  const TimeSeriesMatrix uh_ts(uh);

  auto parzen = [](double v) {
    const double ax = std::fabs(v);
    if (ax <= 0.5) return 1.0 - 6.0 * ax * ax + 6.0 * ax * ax * ax;
    if (ax <= 1.0) return 2.0 * (1.0 - ax) * (1.0 - ax) * (1.0 - ax);
    return 0.0;
  };
  Matrix delta = lag_autocovariance(uh_ts, 0);
  const Matrix gamma0 = delta;
  for (Eigen::Index j = 1; j < t_len; ++j) {
    const double w = parzen(static_cast<double>(j) / k_bw);
    if (w == 0.0) continue;
    delta += w * lag_autocovariance(uh_ts, j);
  }
  const Matrix omega = delta + delta.transpose() - gamma0;
  const double f = omega(0, 1) / omega(1, 1);
  const double d_plus = delta(0, 1) - f * delta(1, 1);
  double num = 0.0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    num += (y(t, 0) - f * uh(t, 1)) * x(t, 0);
  }
  const double a_plus = (num - static_cast<double>(t_len) * d_plus) / sxx;

  CHECK(fit.a_ols(0, 0) == doctest::Approx(a_ols).epsilon(1e-12));
  CHECK(fit.a_plus(0, 0) == doctest::Approx(a_plus).epsilon(1e-10));
}

TEST_CASE("equivariance under y -> Cy") {
  const auto data = simulate(trivariate_spec(), 200, 77);
  const KernelSpec parzen(KernelFamily::Parzen);
  const auto base = fm_ols(data, parzen, 3.5);

  Matrix c(2, 2);
  c << 1.2, -0.4, 0.3, 2.0;
  const SystemData rotated{TimeSeriesMatrix(data.y.values() * c.transpose()), data.x, data.x0};
  const auto rot = fm_ols(rotated, parzen, 3.5);

  const Matrix want = c * base.a_plus;
  CHECK((rot.a_plus - want).cwiseAbs().maxCoeff() <
        1e-9 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  // the correction blocks transform consistently
  const Matrix want_0x = c * base.lr.omega0x();
  CHECK((rot.lr.omega0x() - want_0x).cwiseAbs().maxCoeff() <
        1e-9 * std::max(1.0, want_0x.cwiseAbs().maxCoeff()));
  const Matrix want_dp = c * base.delta_plus_0x;
  CHECK((rot.delta_plus_0x - want_dp).cwiseAbs().maxCoeff() <
        1e-9 * std::max(1.0, want_dp.cwiseAbs().maxCoeff()));
}

TEST_CASE("scale: x -> s x maps A+ to A+/s") {
  const auto data = simulate(DgpSpec::dgp2(0.8), 150, 13);
  const KernelSpec parzen(KernelFamily::Parzen);
  const auto base = fm_ols(data, parzen, 3.5);
  const double s = -2.5;
  const SystemData scaled{data.y, TimeSeriesMatrix(s * data.x.values()),
                          Vector(s * (*data.x0))};
  const auto fit = fm_ols(scaled, parzen, 3.5);
  CHECK(fit.a_plus(0, 0) == doctest::Approx(base.a_plus(0, 0) / s).epsilon(1e-9));
}

TEST_CASE("conditional residuals match a row-by-row loop") {
  const auto data = simulate(trivariate_spec(), 120, 21);
  const auto fit = fm_ols(data, KernelSpec(KernelFamily::Parzen), 3.0);
  const auto resid = conditional_residuals(fit);

  const auto& y = data.y.values();
  const auto& x = data.x.values();
  for (Eigen::Index t = 0; t < y.rows(); ++t) {
    const double dx = t == 0 ? x(0, 0) - (*data.x0)(0) : x(t, 0) - x(t - 1, 0);
    for (Eigen::Index i = 0; i < 2; ++i) {
      double u0 = y(t, i);
      for (Eigen::Index k = 0; k < 1; ++k) u0 -= fit.a_ols(i, k) * x(t, k);
      const double want = u0 - fit.lr.f_hat(i, 0) * dx;
      CHECK(resid.values()(t, i) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("conditional residual long-run variance shrinks under singularity") {
  // multicointegrated design: the augmented-regression error is I(-1), so
  // its estimated long-run variance drains toward zero as T grows
  const auto spec = DgpSpec::dgp1(-1.0);
  const KernelSpec parzen(KernelFamily::Parzen);
  double prev = std::numeric_limits<double>::infinity();
  for (const Eigen::Index t_len : {500, 2000, 8000}) {
    double avg = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto data = simulate(spec, t_len, 4000 + seed);
      const double k_bw = std::pow(static_cast<double>(t_len), 0.25);
      const auto fit = fm_ols(data, parzen, k_bw);
      const auto lrv = longrun_cov(fit.residuals_cond, parzen, k_bw);
      avg += lrv(0, 0) / 8.0;
    }
    CHECK(avg < prev);
    prev = avg;
  }
}

TEST_CASE("missing x0 drops the first row and keeps results consistent") {
  const auto data = simulate(DgpSpec::dgp2(0.8), 151, 31);
  // dropping the initial row and carrying its x as the initialization must
  // equal passing the truncated system explicitly
  const SystemData no_x0{data.y, data.x, std::nullopt};
  const auto implicit_fit = fm_ols(no_x0, KernelSpec(KernelFamily::Parzen), 3.5);

  const SystemData explicit_sys{
      TimeSeriesMatrix(data.y.values().bottomRows(150)),
      TimeSeriesMatrix(data.x.values().bottomRows(150)),
      Vector(data.x.values().row(0).transpose())};
  const auto explicit_fit = fm_ols(explicit_sys, KernelSpec(KernelFamily::Parzen), 3.5);
  CHECK(implicit_fit.sample_size == 150);
  CHECK(implicit_fit.a_plus(0, 0) == explicit_fit.a_plus(0, 0));
}

TEST_CASE("intercept handling demeans before the pipeline") {
  const auto base = simulate(DgpSpec::dgp2(0.8), 150, 41);
  // shifting y by a constant must not move the slope when demeaning is on
  Matrix y_shift = base.y.values().array() + 100.0;
  const SystemData shifted{TimeSeriesMatrix(std::move(y_shift)), base.x, base.x0};
  const auto fit0 = fm_ols(base, KernelSpec(KernelFamily::Parzen), 3.5, true);
  const auto fit1 = fm_ols(shifted, KernelSpec(KernelFamily::Parzen), 3.5, true);
  CHECK(fit0.a_plus(0, 0) == doctest::Approx(fit1.a_plus(0, 0)).epsilon(1e-12));
  CHECK(fit0.intercept_used);
}

TEST_CASE("bad inputs raise") {
  const auto data = simulate(DgpSpec::dgp1(0.0), 50, 3);
  CHECK_THROWS_AS((void)fm_ols(data, KernelSpec(KernelFamily::Parzen), 0.0),
                  std::invalid_argument);
  const SystemData mismatched{data.y, data.x, Vector::Zero(2)};
  CHECK_THROWS_AS((void)fm_ols(mismatched, KernelSpec(KernelFamily::Parzen), 3.0),
                  std::invalid_argument);
}
