#pragma once

#include "fmcoint/kernels.hpp"
#include "fmcoint/lrcov.hpp"
#include "fmcoint/series.hpp"

namespace fmcoint {

// Fully modified least squares fit:
//   A+ = (Y+'X - T delta_plus_0x) (X'X)^{-1}
// with the endogeneity-corrected dependent variable
//   y+_t = y_t - omega_0x omega_xx^{-1} dx_t
// and the serial-correlation correction
//   delta_plus_0x = delta_0x - omega_0x omega_xx^{-1} delta_xx.
// Long-run quantities come from the kernel estimates on (u0_hat_t', dx_t')'
// where u0_hat are the OLS residuals.
struct FmolsFit {
  Matrix a_plus;                   // m0 x mx
  Matrix a_ols;                    // m0 x mx
  LongRunEstimates lr;             // omega/delta/gamma0 + conditional blocks
  Matrix delta_plus_0x;            // m0 x mx
  TimeSeriesMatrix y_plus;         // T x m0 (estimation sample)
  TimeSeriesMatrix residuals_cond; // u0_hat_t - f_hat dx_t
  Matrix xtx;                      // mx x mx over the estimation sample
  bool intercept_used = false;
  double bandwidth_used = 0.0;
  KernelSpec kernel{KernelFamily::Parzen};
  Eigen::Index sample_size = 0;    // effective T
};

// Pipeline: (i) optional demeaning of y and x (intercept), (ii) OLS
// residuals, (iii) kernel long-run estimates, (iv) y+, (v) delta_plus_0x,
// (vi) A+. When data.x0 is absent the estimation sample starts at the
// second row (x0 := first x row), so the first difference is observed.
FmolsFit fm_ols(const SystemData& data, const KernelSpec& kernel, double k_bandwidth,
                bool intercept = false);

FmolsFit fm_ols(const SystemData& data, const KernelSpec& kernel, const BandwidthRule& rule,
                bool intercept = false);

// u0_hat_t - f_hat dx_t, the augmented-regression residual series.
TimeSeriesMatrix conditional_residuals(const FmolsFit& fit);

}  // namespace fmcoint
