#include <doctest.h>

#include <cmath>

#include "fmcoint/dgp.hpp"
#include "fmcoint/errors.hpp"
#include "fmcoint/lrcov.hpp"
#include "fmcoint/rng.hpp"

using namespace fmcoint;

TEST_CASE("dgp1 population oracle at the singular point") {
  const auto pop = population(DgpSpec::dgp1(-1.0));
  CHECK(std::fabs(pop.omega(0, 0)) < 1e-15);
  CHECK(std::fabs(pop.omega(0, 1)) < 1e-15);
  CHECK(pop.omega(1, 1) == doctest::Approx(1.0));
  CHECK(std::fabs(pop.omega_cond(0, 0)) < 1e-15);
  CHECK(pop.mc_rank == 1);
  // e_t = -eta_{0t}
  REQUIRE(pop.e_coeffs.size() == 1);
  CHECK(pop.e_coeffs[0](0, 0) == doctest::Approx(-1.0));
  CHECK(std::fabs(pop.e_coeffs[0](0, 1)) < 1e-15);
  CHECK(pop.omega_ee(0, 0) == doctest::Approx(1.0));
  CHECK(std::fabs(pop.phi0(0, 0)) < 1e-15);
  CHECK(std::fabs(pop.phi_minus_inf(0, 0)) < 1e-15);
}

TEST_CASE("dgp2 population oracle at the singular point") {
  const auto pop = population(DgpSpec::dgp2(5.2));
  CHECK(pop.omega(0, 0) == doctest::Approx(2.37).epsilon(1e-12));
  CHECK(pop.omega(0, 1) == doctest::Approx(9.48).epsilon(1e-12));
  CHECK(pop.omega(1, 0) == doctest::Approx(9.48).epsilon(1e-12));
  CHECK(pop.omega(1, 1) == doctest::Approx(37.92).epsilon(1e-12));
  CHECK(pop.f(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::fabs(pop.omega_cond(0, 0)) < 1e-10);
  CHECK(pop.mc_rank == 1);
  // second-order covariances feed the singular limit constants
  CHECK(pop.omega_ee(0, 0) > 0.0);
}

TEST_CASE("white noise population") {
  const auto pop = population(DgpSpec::dgp1(0.0));
  CHECK((pop.omega - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((pop.gamma_plus - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(pop.omega_cond(0, 0) == doctest::Approx(1.0));
  CHECK(pop.mc_rank == 0);
  CHECK(pop.e_coeffs.empty());
}

TEST_CASE("analytic omega equals the summed autocovariances") {
  for (const double p : {-1.0, -0.5, 0.3}) {
    const auto spec = DgpSpec::dgp2(p);
    const auto pop = population(spec);
    Matrix sum = Matrix::Zero(2, 2);
    for (std::int64_t j = -spec.q(); j <= spec.q(); ++j) {
      sum += population_autocov(spec, j);
    }
    CHECK((pop.omega - sum).cwiseAbs().maxCoeff() < 1e-12);
    // gamma_plus + gamma_plus' - gamma0 = omega
    CHECK((pop.gamma_plus + pop.gamma_plus.transpose() - pop.gamma0 - pop.omega)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("simulation is bit-reproducible and stream-keyed") {
  const auto spec = DgpSpec::dgp2(0.8);
  const auto a = simulate(spec, 50, 7, 3);
  const auto b = simulate(spec, 50, 7, 3);
  CHECK((a.y.values() - b.y.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.x.values() - b.x.values()).cwiseAbs().maxCoeff() == 0.0);
  const auto c = simulate(spec, 50, 7, 4);
  CHECK((a.y.values() - c.y.values()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("degenerate spec gives iid y and a random-walk x") {
  DgpSpec spec;
  spec.a = Matrix::Zero(1, 1);
  spec.sigma = Matrix::Identity(2, 2);
  spec.x0 = Vector::Zero(1);
  const auto data = simulate(spec, 10000, 11);
  // A = 0, q = 0: y_t = eta_{0t}
  const double var =
      data.y.values().col(0).squaredNorm() / static_cast<double>(data.y.rows());
  CHECK(std::fabs(var - 1.0) < 3.0 * std::sqrt(2.0 / 10000.0));
  // x increments are the eta_x draws
  const auto diffs = first_difference(data.x);
  const double var_dx =
      diffs.values().col(0).squaredNorm() / static_cast<double>(diffs.rows());
  CHECK(std::fabs(var_dx - 1.0) < 3.0 * std::sqrt(2.0 / 10000.0));
}

TEST_CASE("sample lag-1 autocovariance approaches D1 Sigma") {
  const auto spec = DgpSpec::dgp1(-0.5);
  const auto u = simulate_errors(spec, 100000, 123);
  const Matrix got = lag_autocovariance(u, 1);
  const Matrix want = spec.ma_coeffs[0] * spec.sigma;  // Gamma(1) for MA(1)
  CHECK((got - want).cwiseAbs().maxCoeff() < 0.02 * std::max(1.0, want.cwiseAbs().maxCoeff()));
}

TEST_CASE("multicoint_rank identities") {
  CHECK(multicoint_rank(Matrix::Identity(2, 2), 1) == 0);
  const auto pop = population(DgpSpec::dgp2(5.2));
  CHECK(multicoint_rank(pop.omega, 1) == 1);

  // construct-then-recover over random reduced-rank omegas with PD xx block
  PhiloxStream rng(321);
  int trials = 0;
  for (int it = 0; trials < 500; ++it) {
    const Eigen::Index m = 3, m0 = 1;
    const Eigen::Index rank = 2;  // s = 1
    Matrix g(m, rank);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = rng.next_gaussian();
    }
    const Matrix omega = g * g.transpose();
    // keep only draws whose xx block is comfortably PD
    const Matrix xx = omega.bottomRightCorner(m - m0, m - m0);
    const auto eig = linalg::sym_eigen(xx);
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) < 1e-3) continue;
    ++trials;
    CHECK(multicoint_rank(omega, m0) == static_cast<int>(m - rank));
  }
}

TEST_CASE("multicoint_rank requires a PD xx block") {
  Matrix omega = Matrix::Zero(2, 2);
  omega(0, 0) = 1.0;
  CHECK_THROWS_AS((void)multicoint_rank(omega, 1), SingularDesignError);
}

TEST_CASE("dgp spec json round-trip") {
  const auto spec = DgpSpec::dgp2(5.2);
  const auto back = DgpSpec::from_json(spec.to_json());
  CHECK((back.a - spec.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.sigma - spec.sigma).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.ma_coeffs[0] - spec.ma_coeffs[0]).cwiseAbs().maxCoeff() == 0.0);
  const auto a = simulate(spec, 20, 1);
  const auto b = simulate(back, 20, 1);
  CHECK((a.y.values() - b.y.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("invalid specs are rejected") {
  DgpSpec bad = DgpSpec::dgp1(0.0);
  bad.sigma(0, 1) = 0.9;  // asymmetric
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  DgpSpec notpd = DgpSpec::dgp1(0.0);
  notpd.sigma << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(notpd.validate(), std::invalid_argument);
}
