#include "fmcoint/lrcov.hpp"

#include <cmath>
#include <stdexcept>

#include "fmcoint/errors.hpp"

namespace fmcoint {

namespace {

// Number of positive lags with possibly nonzero weight.
Eigen::Index max_lag(const TimeSeriesMatrix& u, const KernelSpec& kernel, double k_bandwidth) {
  if (!(k_bandwidth > 0.0)) throw std::invalid_argument("bandwidth K must be positive");
  const Eigen::Index t_len = u.rows();
  if (!kernel.compact_support()) return t_len - 1;
  const auto cutoff = static_cast<Eigen::Index>(std::ceil(k_bandwidth)) - 1;
  return std::min(t_len - 1, std::max<Eigen::Index>(cutoff, 0));
}

Matrix onesided_sum(const TimeSeriesMatrix& u, const KernelSpec& kernel, double k_bandwidth,
                    Matrix* gamma0_out) {
  Matrix gamma0 = lag_autocovariance(u, 0);
  Matrix delta = gamma0;
  const Eigen::Index j_max = max_lag(u, kernel, k_bandwidth);
  for (Eigen::Index j = 1; j <= j_max; ++j) {
    const double w = kernel.weight(static_cast<double>(j) / k_bandwidth);
    if (w == 0.0) continue;
    delta += w * lag_autocovariance(u, j);
  }
  if (gamma0_out) *gamma0_out = std::move(gamma0);
  return delta;
}

}  // namespace

Matrix onesided_longrun_cov(const TimeSeriesMatrix& u, const KernelSpec& kernel,
                            double k_bandwidth) {
  return onesided_sum(u, kernel, k_bandwidth, nullptr);
}

Matrix longrun_cov(const TimeSeriesMatrix& u, const KernelSpec& kernel, double k_bandwidth) {
  Matrix gamma0;
  const Matrix delta = onesided_sum(u, kernel, k_bandwidth, &gamma0);
  // w even and w(0)=1 make the two-sided sum equal to this exactly.
  return delta + delta.transpose() - gamma0;
}

LongRunEstimates estimate_longrun(const TimeSeriesMatrix& u, const KernelSpec& kernel,
                                  double k_bandwidth, Eigen::Index m0) {
  if (m0 < 1 || m0 >= u.cols()) {
    throw std::invalid_argument("estimate_longrun: partition index m0 out of range");
  }
  LongRunEstimates est;
  est.kernel = kernel;
  est.bandwidth = k_bandwidth;
  est.m0 = m0;
  est.delta = onesided_sum(u, kernel, k_bandwidth, &est.gamma0);
  est.omega = est.delta + est.delta.transpose() - est.gamma0;
  conditional_lrcov(est);
  return est;
}

ConditionalLrcov conditional_lrcov(const Matrix& omega, Eigen::Index m0) {
  const Eigen::Index m = omega.rows();
  if (m0 < 1 || m0 >= m) throw std::invalid_argument("conditional_lrcov: bad partition");
  const Eigen::Index mx = m - m0;
  const Matrix omega0x = omega.topRightCorner(m0, mx);
  const Matrix omegaxx = omega.bottomRightCorner(mx, mx);
  // F' solves omegaxx F' = omegax0
  Matrix f = linalg::spd_solve(omegaxx, omega0x.transpose(), "conditional_lrcov: omega_xx")
                 .transpose();
  ConditionalLrcov out;
  out.omega_cond = omega.topLeftCorner(m0, m0) - f * omega0x.transpose();
  out.f = std::move(f);
  return out;
}

Matrix conditional_lrcov(LongRunEstimates& est) {
  auto cond = conditional_lrcov(est.omega, est.m0);
  est.omega_cond = cond.omega_cond;
  est.f_hat = cond.f;
  return est.omega_cond;
}

SingularDirections singular_directions(const Matrix& omega_cond, double tol) {
  const double scale = std::max(1.0, omega_cond.cwiseAbs().maxCoeff());
  if (linalg::asymmetry(omega_cond) > 1e-8 * scale) {
    throw std::invalid_argument("singular_directions: matrix is not symmetric");
  }
  const auto eig = linalg::sym_eigen(omega_cond);
  const Eigen::Index m0 = omega_cond.rows();
  const double lmax = eig.eigenvalues(0);

  SingularDirections out;
  out.eigenvalues = eig.eigenvalues;
  int r = 0;
  if (lmax > linalg::kRankAbsFloor) {
    const double cut = std::max(tol * lmax, linalg::kRankAbsFloor);
    while (r < m0 && eig.eigenvalues(r) > cut) ++r;
  }
  out.rank = r;
  out.r_scaled = Matrix(m0, r);
  for (int i = 0; i < r; ++i) {
    out.r_scaled.col(i) = eig.eigenvectors.col(i) * std::sqrt(eig.eigenvalues(i));
  }
  out.r_perp = eig.eigenvectors.rightCols(m0 - r);
  return out;
}

}  // namespace fmcoint
