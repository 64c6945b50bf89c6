#pragma once

#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fmcoint/dgp.hpp"
#include "fmcoint/fmols.hpp"

namespace fmcoint {

// One simulation experiment: a DGP crossed with sample sizes and bandwidth
// rules, `reps` replications per cell. Replication r draws from stream r of
// the seed, so reports are bit-identical for any worker count.
struct McConfig {
  DgpSpec dgp;
  std::vector<Eigen::Index> t_list;
  int reps = 10000;
  KernelSpec kernel{KernelFamily::Parzen};
  std::vector<BandwidthRule> bandwidths{BandwidthRule::power(1.0, 0.25, true)};
  double a0 = 2.0;  // hypothesized scalar coefficient
  bool intercept = false;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 -> hardware concurrency
  int density_grid_points = 512;
  bool densities = false;

  void validate() const;
};

// Per-cell aggregates. Rejections use two-sided standard-normal critical
// values at the 0.10/0.05/0.01 levels. Replications with nonpositive
// conditional long-run variance are counted in degenerate_count and
// excluded from the t moments and rejection rates (bias moments keep them).
struct McCell {
  Eigen::Index t_len = 0;
  double k_bandwidth = 0.0;
  double bias_ols_mean = 0.0, bias_ols_sd = 0.0;
  double bias_mean = 0.0, bias_sd = 0.0;
  double t_mean = 0.0, t_sd = 0.0;
  double reject_010 = 0.0, reject_005 = 0.0, reject_001 = 0.0;
  int degenerate_count = 0;
  int reps = 0;
  std::vector<double> bias_grid, bias_density, t_grid, t_density;
};

struct McReport {
  std::vector<McCell> cells;
  std::uint64_t seed = 0;
  double a0 = 0.0;

  nlohmann::ordered_json to_json() const;
  // Table row layout: T, p, K, Bias-OLS, SD-OLS, Bias, SD, t-Bias, t-SD,
  // 0.10, 0.05, 0.01 (p is supplied by the caller's DGP loop).
  static std::string csv_header();
  std::string csv_rows(double p_label) const;
};

McReport run_experiment(const McConfig& config);

// Gaussian kernel density on an arbitrary grid.
std::vector<double> density_estimate(std::span<const double> samples,
                                     std::span<const double> grid, double bw);

// 0.9 * min(sd, iqr/1.34) * n^{-1/5}
double silverman_bandwidth(std::span<const double> samples);

// Equally spaced grid over mean +- 4 sd.
std::vector<double> density_grid(std::span<const double> samples, int points);

// Least-squares slope of log(sd) on log(T) with its standard error;
// the convergence-rate exponent is -slope.
struct RateFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

RateFit rate_exponent(std::span<const std::pair<double, double>> t_sd_points);

}  // namespace fmcoint
