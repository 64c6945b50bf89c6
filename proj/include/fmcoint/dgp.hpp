#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "fmcoint/series.hpp"

namespace fmcoint {

// Triangular system with MA(q) linear-process errors:
//   y_t = A x_t + u_{0t},   x_t = x_{t-1} + u_{xt},
//   u_t = eta_t + D_1 eta_{t-1} + ... + D_q eta_{t-q},  eta_t ~ iid N(0, Sigma).
struct DgpSpec {
  Matrix a;                       // m0 x mx cointegrating coefficient
  std::vector<Matrix> ma_coeffs;  // D_1 .. D_q, each m x m (D_0 = I implied)
  Matrix sigma;                   // m x m innovation covariance, PD
  Vector x0;                      // mx, initial regressor value

  Eigen::Index m0() const { return a.rows(); }
  Eigen::Index mx() const { return a.cols(); }
  Eigen::Index m() const { return a.rows() + a.cols(); }
  Eigen::Index q() const { return static_cast<Eigen::Index>(ma_coeffs.size()); }

  void validate() const;

  // Bivariate MA(1) presets: scalar A = 2,
  //   dgp1: D1 = [[p,0],[0,0]],     Sigma = I2
  //   dgp2: D1 = [[0.3,0.4],[p,0.6]], Sigma = [[1,0.5],[0.5,1]]
  static DgpSpec dgp1(double p);
  static DgpSpec dgp2(double p);

  nlohmann::ordered_json to_json() const;
  static DgpSpec from_json(const nlohmann::json& j);
};

// Draws eta_{1-q}..eta_T from the counter-based stream (seed, stream) and
// builds the system. Bit-reproducible given (spec, T, seed, stream); the
// q pre-sample innovations give u_1 the exact stationary law.
SystemData simulate(const DgpSpec& spec, Eigen::Index t_len, std::uint64_t seed,
                    std::uint64_t stream = 0);

// The raw error series u_t (T x m) from the same draw path.
TimeSeriesMatrix simulate_errors(const DgpSpec& spec, Eigen::Index t_len, std::uint64_t seed,
                                 std::uint64_t stream = 0);

// Population autocovariance Gamma(h) = sum_k D_{k+h} Sigma D_k' (h >= 0;
// Gamma(-h) = Gamma(h)'). Finite sum for MA(q).
Matrix population_autocov(const DgpSpec& spec, std::int64_t h);

// Closed-form population quantities. When omega_xx is not PD the
// conditional block is skipped and omega_xx_pd is false.
struct PopulationQuantities {
  Matrix omega;        // D(1) Sigma D(1)'
  Matrix gamma_plus;   // sum_{h>=0} Gamma(h)
  Matrix gamma0;       // Gamma(0)
  bool omega_xx_pd = false;
  Matrix omega_cond;   // m0 x m0 Schur complement
  Matrix f;            // m0 x mx
  int mc_rank = 0;     // m - rank(omega) = m0 - rank(omega_cond)

  // Singular-direction error process e_t = sum_j E_j eta_{t-j} with
  // E_j = R_perp' [I,-F] sum_{t>j} D_t  (s x m, s = m0 - rank(omega_cond));
  // empty when the conditional matrix has full rank.
  std::vector<Matrix> e_coeffs;
  Matrix r_perp;          // m0 x s
  Matrix omega_ee;        // s x s long-run variance of e
  Matrix phi0;            // s x mx: sum_{j>=0} (j+1/2) Gamma_{e,ux}(j)
  Matrix phi_minus_inf;   // s x mx: sum over all j
};

PopulationQuantities population(const DgpSpec& spec);

// m - numerical_rank(omega); checks the equivalent expression
// m0 - numerical_rank(omega_cond) agrees. Requires the xx block PD.
int multicoint_rank(const Matrix& omega, Eigen::Index m0, double tol = linalg::kRankRelTol);

}  // namespace fmcoint
