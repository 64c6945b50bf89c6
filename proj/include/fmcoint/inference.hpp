#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "fmcoint/fmols.hpp"

namespace fmcoint {

// Restrictions on a = vec(A), where vec is ROW vectorization:
// a[(i)*mx + k] = A(i,k).

// Q a = r0 with Q of full row rank q.
struct LinearRestriction {
  Matrix q;
  Vector r0;
};

// R1 A R2 = R3 (R1: q1 x m0, R2: mx x q2, R3: q1 x q2); equivalent to
// (R1 kron R2') a = vec(R3).
struct TensorRestriction {
  Matrix r1;
  Matrix r2;
  Matrix r3;
};

// phi(a) = 0 with optional analytic Jacobian d phi / d a' (q x m0*mx);
// a central finite difference is used when absent (flagged in notes).
struct GeneralRestriction {
  std::function<Vector(const Vector&)> phi;
  std::function<Matrix(const Vector&)> jacobian;
};

using RestrictionSpec = std::variant<LinearRestriction, TensorRestriction, GeneralRestriction>;

// The full restriction A = A0 (identity tensor form).
TensorRestriction full_restriction(const Matrix& a0);

Vector vec_row(const Matrix& a);
Matrix unvec_row(const Vector& a, Eigen::Index m0, Eigen::Index mx);

struct WaldResult {
  double statistic = 0.0;
  int q_nominal = 0;
  int q_effective = 0;
  double p_nominal = 1.0;    // vs chi^2(q_nominal)
  double p_effective = 1.0;  // vs chi^2(q_effective); 1 when q_effective = 0
  bool degenerate = false;   // restriction touches singular directions
  std::string notes;
};

struct WaldOptions {
  // With a numerically singular weighting matrix the default is a hard
  // error carrying the rank diagnosis; opting in switches to an
  // eigenvalue-thresholded pseudo-inverse (changes the statistic's
  // meaning, so never silent).
  bool allow_degenerate = false;
  double rank_tol = linalg::kRankRelTol;
};

// Everything the test statistics need from a fit; lets a serialized fit be
// re-tested without the full estimation state.
struct WaldInputs {
  Matrix a_plus;      // m0 x mx
  Matrix omega_cond;  // m0 x m0
  Matrix xtx;         // mx x mx

  static WaldInputs from_fit(const FmolsFit& fit) {
    return WaldInputs{fit.a_plus, fit.lr.omega_cond, fit.xtx};
  }
};

// W = phi(a+)' { Phi (omega_cond kron (X'X)^{-1}) Phi' }^{-1} phi(a+), with
// p-values against chi^2 at both the nominal and the effective degrees of
// freedom. For tensor (and full) restrictions the effective rank follows
// the Kronecker factorization rank(R1 omega_cond R1') * q2.
WaldResult wald(const WaldInputs& in, const RestrictionSpec& restriction,
                const WaldOptions& options = {});
WaldResult wald(const FmolsFit& fit, const RestrictionSpec& restriction,
                const WaldOptions& options = {});

struct RankDiagnosis {
  int q_nominal = 0;
  int q_effective = 0;
  bool satisfied = false;
};

RankDiagnosis rank_condition_check(const RestrictionSpec& restriction, const Matrix& omega_cond,
                                   const Matrix& xtx, double tol = linalg::kRankRelTol);

// Scalar-system t statistic (m0 = mx = 1):
//   t = (A+ - a0) / sqrt(omega_cond / sum_t x_t^2).
// Throws DegenerateVarianceError when omega_cond <= 0.
double t_statistic(const WaldInputs& in, double a0);
double t_statistic(const FmolsFit& fit, double a0);

// Convergence-rate gain in the singular direction:
//   T^{1+2k} (k < 1/4), T^{3/2} (1/4 <= k <= 1/2), T^{2-k} (k > 1/2).
double delta_rate(std::int64_t t_len, double k);

// Upper-tail chi-squared p-value.
double chi_squared_pvalue(double statistic, int df);

// Two-sided p-value of a standard normal statistic.
double normal_two_sided_pvalue(double t);

}  // namespace fmcoint
