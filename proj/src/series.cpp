#include "fmcoint/series.hpp"

#include <cmath>
#include <stdexcept>

#include "fmcoint/errors.hpp"
#include "fmcoint/simd.hpp"

namespace fmcoint {

TimeSeriesMatrix::TimeSeriesMatrix(Matrix data, std::vector<std::string> labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  if (data_.rows() < 2 || data_.cols() < 1) {
    throw std::invalid_argument("TimeSeriesMatrix requires T >= 2 and m >= 1");
  }
  if (!data_.allFinite()) {
    throw std::invalid_argument("TimeSeriesMatrix entries must be finite");
  }
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != data_.cols()) {
    throw std::invalid_argument("label count must match column count");
  }
}

Matrix lag_autocovariance(const TimeSeriesMatrix& u, std::int64_t j) {
  const Eigen::Index t_len = u.rows();
  const Eigen::Index m = u.cols();
  if (std::llabs(j) >= t_len) {
    throw std::domain_error("lag_autocovariance: |j| must be < T");
  }
  if (j < 0) return lag_autocovariance(u, -j).transpose();

  // (i,k) entry: T^{-1} sum_t u_{t+j,i} u_{t,k}
  const Eigen::Index n = t_len - j;
  Matrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      g(i, k) = simd::dot(u.col_data(i) + j, u.col_data(k), static_cast<std::size_t>(n)) /
                static_cast<double>(t_len);
    }
  }
  return g;
}

TimeSeriesMatrix partial_sum(const TimeSeriesMatrix& u) {
  Matrix out(u.rows(), u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    double acc = 0.0;
    const double* src = u.col_data(c);
    double* dst = out.col(c).data();
    for (Eigen::Index t = 0; t < u.rows(); ++t) {
      acc += src[t];
      dst[t] = acc;
    }
  }
  return TimeSeriesMatrix(std::move(out), u.labels());
}

TimeSeriesMatrix first_difference(const TimeSeriesMatrix& big_u) {
  Matrix out(big_u.rows(), big_u.cols());
  out.row(0) = big_u.values().row(0);
  for (Eigen::Index t = 1; t < big_u.rows(); ++t) {
    out.row(t) = big_u.values().row(t) - big_u.values().row(t - 1);
  }
  return TimeSeriesMatrix(std::move(out), big_u.labels());
}

Matrix cross_product(const TimeSeriesMatrix& a, const TimeSeriesMatrix& b,
                     Eigen::Index row_begin) {
  if (a.rows() != b.rows()) throw std::invalid_argument("cross_product: row mismatch");
  const auto n = static_cast<std::size_t>(a.rows() - row_begin);
  Matrix c(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
      c(i, k) = simd::dot(a.col_data(i) + row_begin, b.col_data(k) + row_begin, n);
    }
  }
  return c;
}

OlsFit ols(const TimeSeriesMatrix& y, const TimeSeriesMatrix& x) {
  if (y.rows() != x.rows()) throw std::invalid_argument("ols: y and x must share T");
  Matrix xtx = cross_product(x, x);
  Matrix ytx = cross_product(y, x);
  // A' solves (X'X) A' = X'Y
  Matrix coef = linalg::spd_solve(xtx, ytx.transpose(), "ols: X'X").transpose();

  Matrix resid = y.values();
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      simd::axpy(static_cast<std::size_t>(x.rows()), -coef(i, k), x.col_data(k),
                 resid.col(i).data());
    }
  }
  return OlsFit{std::move(coef), std::move(xtx), TimeSeriesMatrix(std::move(resid))};
}

}  // namespace fmcoint
