#include <doctest.h>

#include <cmath>

#include "fmcoint/dgp.hpp"
#include "fmcoint/errors.hpp"
#include "fmcoint/lrcov.hpp"
#include "fmcoint/rng.hpp"

using namespace fmcoint;

namespace {

TimeSeriesMatrix random_series(Eigen::Index t, Eigen::Index m, std::uint64_t seed) {
  PhiloxStream rng(seed);
  Matrix v(t, m);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) v(i, j) = rng.next_gaussian();
  }
  return TimeSeriesMatrix(std::move(v));
}

}  // namespace

TEST_CASE("orthogonal design collapses to gamma0") {
  // nonzero rows spaced 4 apart, kernel window |j| <= 2: every weighted lag
  // covariance inside the window is exactly zero
  Matrix u = Matrix::Zero(9, 1);
  u(0, 0) = 1.0;
  u(4, 0) = -2.0;
  u(8, 0) = 3.0;
  const KernelSpec parzen(KernelFamily::Parzen);
  const TimeSeriesMatrix ts(u);
  const Matrix gamma0 = lag_autocovariance(ts, 0);
  const Matrix omega = longrun_cov(ts, parzen, 3.0);
  const Matrix delta = onesided_longrun_cov(ts, parzen, 3.0);
  CHECK((omega - gamma0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((delta - gamma0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-sided estimate equals the brute-force weighted sum") {
  const auto u = random_series(50, 2, 17);
  const KernelSpec parzen(KernelFamily::Parzen);
  const double k_bw = 3.0;
  Matrix want = Matrix::Zero(2, 2);
  for (std::int64_t j = -49; j <= 49; ++j) {
    const double w = parzen.weight(static_cast<double>(j) / k_bw);
    if (w == 0.0) continue;
    want += w * lag_autocovariance(u, j);
  }
  const Matrix got = longrun_cov(u, parzen, k_bw);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);

  // non-compact kernel runs the full sum
  const KernelSpec qs(KernelFamily::QuadraticSpectral);
  Matrix want_qs = Matrix::Zero(2, 2);
  for (std::int64_t j = -49; j <= 49; ++j) {
    want_qs += qs.weight(static_cast<double>(j) / k_bw) * lag_autocovariance(u, j);
  }
  CHECK((longrun_cov(u, qs, k_bw) - want_qs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("omega = delta + delta' - gamma0 exactly, for every kernel") {
  for (const auto family : {KernelFamily::Parzen, KernelFamily::TukeyHanning,
                            KernelFamily::Bartlett, KernelFamily::QuadraticSpectral}) {
    const KernelSpec spec(family);
    for (const std::uint64_t seed : {1u, 2u, 3u}) {
      const auto u = random_series(40, 2, seed);
      const Matrix omega = longrun_cov(u, spec, 4.0);
      const Matrix delta = onesided_longrun_cov(u, spec, 4.0);
      const Matrix gamma0 = lag_autocovariance(u, 0);
      CHECK((omega - (delta + delta.transpose() - gamma0)).cwiseAbs().maxCoeff() == 0.0);
      CHECK(linalg::asymmetry(omega) == 0.0);
    }
  }
}

TEST_CASE("parzen estimates are positive semidefinite") {
  const KernelSpec parzen(KernelFamily::Parzen);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto u = random_series(30, 2, 1000 + seed);
    const Matrix omega = longrun_cov(u, parzen, 3.0);
    const auto eig = linalg::sym_eigen(omega);
    CHECK(eig.eigenvalues(eig.eigenvalues.size() - 1) >= -1e-10 * omega.trace());
  }
}

TEST_CASE("schur complement stays PSD when omega is PSD") {
  const KernelSpec parzen(KernelFamily::Parzen);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto u = random_series(40, 3, 2000 + seed);
    const auto est = estimate_longrun(u, parzen, 3.5, 2);
    const auto eig = linalg::sym_eigen(est.omega_cond);
    CHECK(eig.eigenvalues(eig.eigenvalues.size() - 1) >= -1e-9 * est.omega_cond.trace());
  }
}

TEST_CASE("conditional lrcov of a block-diagonal omega is the 00 block") {
  Matrix omega = Matrix::Zero(3, 3);
  omega(0, 0) = 2.0;
  omega(1, 1) = 3.0;
  omega(2, 2) = 4.0;
  omega(0, 1) = omega(1, 0) = 0.5;
  const auto cond = conditional_lrcov(omega, 2);
  CHECK((cond.omega_cond - omega.topLeftCorner(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(cond.f.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("analytic singular designs have zero conditional lrcov") {
  // rank-1 omega from dgp2 at p = 5.2
  const auto pop2 = population(DgpSpec::dgp2(5.2));
  CHECK(pop2.omega(0, 0) == doctest::Approx(2.37).epsilon(1e-12));
  CHECK(pop2.omega(0, 1) == doctest::Approx(9.48).epsilon(1e-12));
  CHECK(pop2.omega(1, 1) == doctest::Approx(37.92).epsilon(1e-12));
  CHECK(pop2.f(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::fabs(pop2.omega_cond(0, 0)) < 1e-10);

  const auto pop1 = population(DgpSpec::dgp1(-1.0));
  CHECK(std::fabs(pop1.omega(0, 0)) < 1e-15);
  CHECK(pop1.omega(1, 1) == doctest::Approx(1.0));
  CHECK(std::fabs(pop1.omega_cond(0, 0)) < 1e-15);
}

TEST_CASE("near-singular omega_xx raises") {
  Matrix omega = Matrix::Zero(2, 2);
  omega(0, 0) = 1.0;
  omega(1, 1) = 1e-30;
  CHECK_THROWS_AS((void)conditional_lrcov(omega, 1), SingularDesignError);
}

TEST_CASE("singular_directions basics") {
  const auto zero = singular_directions(Matrix::Zero(2, 2), 1e-6);
  CHECK(zero.rank == 0);
  CHECK(zero.r_scaled.cols() == 0);
  CHECK((zero.r_perp * zero.r_perp.transpose() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 4.0;
  const auto d = singular_directions(diag, 1e-6);
  CHECK(d.rank == 1);
  CHECK((d.r_scaled * d.r_scaled.transpose() - diag).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::fabs(d.r_perp(0, 0)) < 1e-14);
  CHECK(std::fabs(std::fabs(d.r_perp(1, 0)) - 1.0) < 1e-14);
}

TEST_CASE("singular_directions recovers a constructed low-rank factor") {
  PhiloxStream rng(55);
  Matrix g(3, 2);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) g(i, j) = rng.next_gaussian();
  }
  const Matrix target = g * g.transpose();
  const auto dirs = singular_directions(target, 1e-6);
  CHECK(dirs.rank == 2);
  CHECK((dirs.r_scaled * dirs.r_scaled.transpose() - target).cwiseAbs().maxCoeff() < 1e-9);
  // (normalized R, R_perp) is an orthonormal basis
  Matrix basis(3, 3);
  basis.leftCols(2) = dirs.r_scaled;
  basis.col(0).normalize();
  basis.col(1).normalize();
  basis.rightCols(1) = dirs.r_perp;
  CHECK((basis.transpose() * basis - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("singular_directions rejects asymmetry") {
  Matrix bad(2, 2);
  bad << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS((void)singular_directions(bad, 1e-6), std::invalid_argument);
}

TEST_CASE("kernel estimate approaches the analytic long-run covariance") {
  // white-noise bivariate errors: omega = I
  const auto spec = DgpSpec::dgp1(0.0);
  const auto u = simulate_errors(spec, 20000, 9001);
  const Matrix omega = longrun_cov(u, KernelSpec(KernelFamily::Parzen),
                                   std::pow(20000.0, 0.25));
  CHECK((omega - Matrix::Identity(2, 2)).norm() / std::sqrt(2.0) < 0.05);

  const Matrix delta = onesided_longrun_cov(u, KernelSpec(KernelFamily::Parzen),
                                            std::pow(20000.0, 0.25));
  CHECK((delta - Matrix::Identity(2, 2)).norm() / std::sqrt(2.0) < 0.05);
}
