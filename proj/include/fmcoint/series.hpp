#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmcoint/linalg.hpp"

namespace fmcoint {

// T x m panel of observations, rows = time t = 1..T. Immutable after
// construction; all entries must be finite, T >= 2, m >= 1.
class TimeSeriesMatrix {
 public:
  explicit TimeSeriesMatrix(Matrix data, std::vector<std::string> labels = {});

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  const Matrix& values() const { return data_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  const double* col_data(Eigen::Index c) const { return data_.col(c).data(); }

 private:
  Matrix data_;  // column-major, so each series is contiguous
  std::vector<std::string> labels_;
};

// Triangular-system data: y (T x m0) regressed on x (T x mx). x0 is the
// regressor's initial value: present for simulated data (differences are
// observed from t=1), absent for raw observed data (estimators then start
// the sample at the second row).
struct SystemData {
  TimeSeriesMatrix y;
  TimeSeriesMatrix x;
  std::optional<Vector> x0;
};

// Sample autocovariance Gamma_hat(j) = T^{-1} sum_{1<=t,t+j<=T} u_{t+j} u_t'.
// No mean removal; the divisor is T (not T-j). Gamma_hat(-j) = Gamma_hat(j)'
// bit-for-bit. Throws std::domain_error when |j| >= T.
Matrix lag_autocovariance(const TimeSeriesMatrix& u, std::int64_t j);

// Row t of the result is the column-wise sum of rows 1..t.
TimeSeriesMatrix partial_sum(const TimeSeriesMatrix& u);

// Inverse of partial_sum: first row kept, then row differences.
TimeSeriesMatrix first_difference(const TimeSeriesMatrix& big_u);

struct OlsFit {
  Matrix coef;              // m0 x mx,  A_hat = Y'X (X'X)^{-1}
  Matrix xtx;               // mx x mx
  TimeSeriesMatrix residuals;  // y_t - A_hat x_t
};

// Least squares of y on x (no intercept). Throws SingularDesignError when
// X'X is numerically rank deficient.
OlsFit ols(const TimeSeriesMatrix& y, const TimeSeriesMatrix& x);

// C(i,j) = dot(a.col(i), b.col(j)) over rows [row_begin, rows); the shared
// inner product used for X'X, Y'X and the covariance sums.
Matrix cross_product(const TimeSeriesMatrix& a, const TimeSeriesMatrix& b,
                     Eigen::Index row_begin = 0);

}  // namespace fmcoint
