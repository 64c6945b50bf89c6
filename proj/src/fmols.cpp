#include "fmcoint/fmols.hpp"

#include <stdexcept>

#include "fmcoint/errors.hpp"
#include "fmcoint/simd.hpp"

namespace fmcoint {

namespace {

// Normalized inputs for the estimation sample: y, x aligned with a known
// initial regressor value so dx_t exists for every row.
struct Sample {
  Matrix y;
  Matrix x;
  Vector x0;
};

Sample make_sample(const SystemData& data) {
  if (data.y.rows() != data.x.rows()) {
    throw std::invalid_argument("fm_ols: y and x must share T");
  }
  Sample s;
  if (data.x0) {
    if (data.x0->size() != data.x.cols()) {
      throw std::invalid_argument("fm_ols: x0 dimension mismatch");
    }
    s.y = data.y.values();
    s.x = data.x.values();
    s.x0 = *data.x0;
  } else {
    // No initial value: treat the first row as the initialization.
    s.y = data.y.values().bottomRows(data.y.rows() - 1);
    s.x = data.x.values().bottomRows(data.x.rows() - 1);
    s.x0 = data.x.values().row(0).transpose();
  }
  return s;
}

}  // namespace

FmolsFit fm_ols(const SystemData& data, const KernelSpec& kernel, double k_bandwidth,
                bool intercept) {
  if (!(k_bandwidth > 0.0)) throw std::invalid_argument("fm_ols: bandwidth K must be positive");
  Sample s = make_sample(data);
  const Eigen::Index t_len = s.y.rows();
  const Eigen::Index m0 = s.y.cols();
  const Eigen::Index mx = s.x.cols();
  if (t_len <= mx + (intercept ? 1 : 0)) {
    throw std::invalid_argument("fm_ols: sample too short for the design");
  }

  if (intercept) {
    const Eigen::RowVectorXd ybar = s.y.colwise().mean();
    const Eigen::RowVectorXd xbar = s.x.colwise().mean();
    s.y.rowwise() -= ybar;
    s.x.rowwise() -= xbar;
    s.x0 -= xbar.transpose();  // differences are unchanged
  }

  const TimeSeriesMatrix y_series(s.y);
  const TimeSeriesMatrix x_series(s.x);

  // (ii) OLS residuals seed the kernel estimates
  OlsFit ols_fit = ols(y_series, x_series);

  // dx_t = x_t - x_{t-1}, with dx_1 = x_1 - x0
  Matrix dx(t_len, mx);
  dx.row(0) = s.x.row(0) - s.x0.transpose();
  dx.bottomRows(t_len - 1) = s.x.bottomRows(t_len - 1) - s.x.topRows(t_len - 1);

  // (iii) long-run estimates from (u0_hat', dx')'
  Matrix u(t_len, m0 + mx);
  u.leftCols(m0) = ols_fit.residuals.values();
  u.rightCols(mx) = dx;
  LongRunEstimates lr = estimate_longrun(TimeSeriesMatrix(std::move(u)), kernel, k_bandwidth, m0);

  // (iv) y+_t = y_t - f_hat dx_t
  Matrix y_plus = s.y;
  for (Eigen::Index i = 0; i < m0; ++i) {
    for (Eigen::Index k = 0; k < mx; ++k) {
      simd::axpy(static_cast<std::size_t>(t_len), -lr.f_hat(i, k), dx.col(k).data(),
                 y_plus.col(i).data());
    }
  }

  // (v) delta_plus_0x = delta_0x - f_hat delta_xx
  Matrix delta_plus_0x = lr.delta0x() - lr.f_hat * lr.deltaxx();

  // (vi) A+ = (Y+'X - T delta_plus_0x)(X'X)^{-1}
  TimeSeriesMatrix y_plus_series(std::move(y_plus));
  Matrix numer =
      cross_product(y_plus_series, x_series) - static_cast<double>(t_len) * delta_plus_0x;
  Matrix a_plus =
      linalg::spd_solve(ols_fit.xtx, numer.transpose(), "fm_ols: X'X").transpose();

  // u_{0.x,t} = u0_hat_t - f_hat dx_t
  Matrix resid_cond = ols_fit.residuals.values();
  for (Eigen::Index i = 0; i < m0; ++i) {
    for (Eigen::Index k = 0; k < mx; ++k) {
      simd::axpy(static_cast<std::size_t>(t_len), -lr.f_hat(i, k), dx.col(k).data(),
                 resid_cond.col(i).data());
    }
  }

  FmolsFit fit{std::move(a_plus),
               std::move(ols_fit.coef),
               std::move(lr),
               std::move(delta_plus_0x),
               std::move(y_plus_series),
               TimeSeriesMatrix(std::move(resid_cond)),
               std::move(ols_fit.xtx),
               intercept,
               k_bandwidth,
               kernel,
               t_len};
  return fit;
}

FmolsFit fm_ols(const SystemData& data, const KernelSpec& kernel, const BandwidthRule& rule,
                bool intercept) {
  const Eigen::Index t_len = data.x0 ? data.y.rows() : data.y.rows() - 1;
  return fm_ols(data, kernel, rule.evaluate(t_len), intercept);
}

TimeSeriesMatrix conditional_residuals(const FmolsFit& fit) { return fit.residuals_cond; }

}  // namespace fmcoint
