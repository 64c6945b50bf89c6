#pragma once

#include "fmcoint/kernels.hpp"
#include "fmcoint/series.hpp"

namespace fmcoint {

// Kernel long-run covariance estimates of an m-vector error series,
// partitioned after the first m0 coordinates:
//
//   delta = sum_{j>=0} w(j/K) Gamma_hat(j)          (one-sided)
//   omega = delta + delta' - Gamma_hat(0)           (two-sided; exact identity)
//
// omega_cond is the Schur complement omega00 - omega0x omegaxx^{-1} omegax0
// and f_hat = omega0x omegaxx^{-1} is the long-run regression coefficient.
struct LongRunEstimates {
  Matrix omega;       // m x m, symmetric
  Matrix delta;       // m x m
  Matrix gamma0;      // m x m
  Eigen::Index m0 = 0;
  double bandwidth = 0.0;
  KernelSpec kernel{KernelFamily::Parzen};

  Matrix omega00() const { return omega.topLeftCorner(m0, m0); }
  Matrix omega0x() const { return omega.topRightCorner(m0, omega.cols() - m0); }
  Matrix omegaxx() const {
    const Eigen::Index mx = omega.cols() - m0;
    return omega.bottomRightCorner(mx, mx);
  }
  Matrix delta0x() const { return delta.topRightCorner(m0, delta.cols() - m0); }
  Matrix deltaxx() const {
    const Eigen::Index mx = delta.cols() - m0;
    return delta.bottomRightCorner(mx, mx);
  }

  Matrix omega_cond;  // m0 x m0
  Matrix f_hat;       // m0 x mx
};

// Two-sided estimate sum_{|j|<T} w(j/K) Gamma_hat(j). Compact-support
// kernels truncate the sum at |j| <= ceil(K)-1 (identical to the full sum).
Matrix longrun_cov(const TimeSeriesMatrix& u, const KernelSpec& kernel, double k_bandwidth);

// One-sided estimate sum_{j=0..T-1} w(j/K) Gamma_hat(j).
Matrix onesided_longrun_cov(const TimeSeriesMatrix& u, const KernelSpec& kernel,
                            double k_bandwidth);

// Everything at once, sharing one pass over the Gamma_hat(j).
LongRunEstimates estimate_longrun(const TimeSeriesMatrix& u, const KernelSpec& kernel,
                                  double k_bandwidth, Eigen::Index m0);

struct ConditionalLrcov {
  Matrix omega_cond;  // m0 x m0
  Matrix f;           // m0 x mx
};

// Schur complement of the xx block. Throws SingularDesignError when
// omegaxx is numerically singular.
ConditionalLrcov conditional_lrcov(const Matrix& omega, Eigen::Index m0);

// Fills est.omega_cond / est.f_hat and returns omega_cond.
Matrix conditional_lrcov(LongRunEstimates& est);

// Eigendecomposition-based split of a (near-)singular symmetric PSD matrix
// into a full-rank factor and its orthogonal complement:
//   omega_cond ~= r_scaled r_scaled',  r_scaled = Q_r diag(sqrt(lambda_r))
// r counts eigenvalues above tol * lambda_max (rank 0 when lambda_max is
// below an absolute floor); r_perp spans the remaining directions.
struct SingularDirections {
  int rank = 0;
  Matrix r_scaled;     // m0 x r
  Matrix r_perp;       // m0 x (m0 - r), orthonormal columns
  Vector eigenvalues;  // descending
};

SingularDirections singular_directions(const Matrix& omega_cond, double tol = 1e-8);

}  // namespace fmcoint
