#include "fmcoint/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fmcoint/csv.hpp"
#include "fmcoint/errors.hpp"
#include "fmcoint/inference.hpp"
#include "fmcoint/simd.hpp"

namespace fmcoint {

namespace {

// two-sided standard-normal critical values for 0.10 / 0.05 / 0.01
constexpr double kCrit010 = 1.6448536269514722;
constexpr double kCrit005 = 1.9599639845400545;
constexpr double kCrit001 = 2.5758293035489004;

struct RepOutcome {
  double bias_ols = 0.0;
  double bias = 0.0;
  double t = 0.0;
  bool degenerate = false;
};

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  m.mean = simd::sum(v.data(), v.size()) / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double acc = 0.0;
  for (const double x : v) acc += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(acc / static_cast<double>(v.size() - 1));
  return m;
}

}  // namespace

void McConfig::validate() const {
  dgp.validate();
  if (dgp.m0() != 1 || dgp.mx() != 1) {
    throw std::invalid_argument("run_experiment: the harness studies scalar systems (t-based)");
  }
  if (reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  if (t_list.empty()) throw std::invalid_argument("run_experiment: empty T list");
  if (bandwidths.empty()) throw std::invalid_argument("run_experiment: no bandwidth rule");
}

McReport run_experiment(const McConfig& config) {
  config.validate();
  const int workers = config.workers > 0
                          ? config.workers
                          : std::max(1u, std::thread::hardware_concurrency());

  McReport report;
  report.seed = config.seed;
  report.a0 = config.a0;

  for (const Eigen::Index t_len : config.t_list) {
    for (const auto& rule : config.bandwidths) {
      const double k_bw = rule.evaluate(t_len);

      // one preallocated slot per replication; aggregation stays in
      // replication order so worker count cannot change the report
      std::vector<RepOutcome> slots(static_cast<std::size_t>(config.reps));
      parallel_for(config.reps, workers, [&](int rep) {
        const SystemData data =
            simulate(config.dgp, t_len, config.seed, static_cast<std::uint64_t>(rep));
        const OlsFit ols_fit = ols(data.y, data.x);
        const FmolsFit fit = fm_ols(data, config.kernel, k_bw, config.intercept);
        RepOutcome& slot = slots[static_cast<std::size_t>(rep)];
        slot.bias_ols = ols_fit.coef(0, 0) - config.dgp.a(0, 0);
        slot.bias = fit.a_plus(0, 0) - config.dgp.a(0, 0);
        try {
          slot.t = t_statistic(fit, config.a0);
        } catch (const DegenerateVarianceError&) {
          slot.degenerate = true;
        }
      });

      McCell cell;
      cell.t_len = t_len;
      cell.k_bandwidth = k_bw;
      cell.reps = config.reps;
      std::vector<double> bias_ols, bias, tstats;
      bias_ols.reserve(slots.size());
      bias.reserve(slots.size());
      tstats.reserve(slots.size());
      int rej10 = 0, rej5 = 0, rej1 = 0;
      for (const auto& slot : slots) {
        bias_ols.push_back(slot.bias_ols);
        bias.push_back(slot.bias);
        if (slot.degenerate) {
          ++cell.degenerate_count;
          continue;
        }
        tstats.push_back(slot.t);
        const double abs_t = std::fabs(slot.t);
        rej10 += abs_t > kCrit010;
        rej5 += abs_t > kCrit005;
        rej1 += abs_t > kCrit001;
      }
      const auto mo = moments(bias_ols);
      cell.bias_ols_mean = mo.mean;
      cell.bias_ols_sd = mo.sd;
      const auto mb = moments(bias);
      cell.bias_mean = mb.mean;
      cell.bias_sd = mb.sd;
      const auto mt = moments(tstats);
      cell.t_mean = mt.mean;
      cell.t_sd = mt.sd;
      const auto n_valid = static_cast<double>(tstats.size());
      if (n_valid > 0) {
        cell.reject_010 = rej10 / n_valid;
        cell.reject_005 = rej5 / n_valid;
        cell.reject_001 = rej1 / n_valid;
      }
      if (config.densities) {
        cell.bias_grid = density_grid(bias, config.density_grid_points);
        cell.bias_density = density_estimate(bias, cell.bias_grid, silverman_bandwidth(bias));
        if (!tstats.empty()) {
          cell.t_grid = density_grid(tstats, config.density_grid_points);
          cell.t_density = density_estimate(tstats, cell.t_grid, silverman_bandwidth(tstats));
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

nlohmann::ordered_json McReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["a0"] = a0;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json jc;
    jc["T"] = c.t_len;
    jc["K"] = c.k_bandwidth;
    jc["bias_ols_mean"] = c.bias_ols_mean;
    jc["bias_ols_sd"] = c.bias_ols_sd;
    jc["bias_mean"] = c.bias_mean;
    jc["bias_sd"] = c.bias_sd;
    jc["t_mean"] = c.t_mean;
    jc["t_sd"] = c.t_sd;
    jc["reject_010"] = c.reject_010;
    jc["reject_005"] = c.reject_005;
    jc["reject_001"] = c.reject_001;
    jc["degenerate_count"] = c.degenerate_count;
    jc["reps"] = c.reps;
    if (!c.bias_grid.empty()) {
      jc["bias_grid"] = c.bias_grid;
      jc["bias_density"] = c.bias_density;
      jc["t_grid"] = c.t_grid;
      jc["t_density"] = c.t_density;
    }
    j["cells"].push_back(std::move(jc));
  }
  return j;
}

std::string McReport::csv_header() {
  return "T,p,K,Bias-OLS,SD-OLS,Bias,SD,t-Bias,t-SD,0.10,0.05,0.01";
}

std::string McReport::csv_rows(double p_label) const {
  std::ostringstream out;
  for (const auto& c : cells) {
    out << c.t_len << ',' << format_double(p_label) << ',' << format_double(c.k_bandwidth) << ','
        << format_double(c.bias_ols_mean) << ',' << format_double(c.bias_ols_sd) << ','
        << format_double(c.bias_mean) << ',' << format_double(c.bias_sd) << ','
        << format_double(c.t_mean) << ',' << format_double(c.t_sd) << ','
        << format_double(c.reject_010) << ',' << format_double(c.reject_005) << ','
        << format_double(c.reject_001) << '\n';
  }
  return out.str();
}

std::vector<double> density_estimate(std::span<const double> samples,
                                     std::span<const double> grid, double bw) {
  if (samples.size() < 2) throw std::invalid_argument("density_estimate: need >= 2 samples");
  if (!(bw > 0.0)) throw std::invalid_argument("density_estimate: bandwidth must be positive");

  // Sort once, then per grid point sum the Gaussian kernel over the samples
  // within 8.6 bandwidths (contributions beyond are below double precision
  // relative to the in-window mass).
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double cut = 8.6 * bw;
  const double inv_bw = 1.0 / bw;
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bw * std::sqrt(2.0 * M_PI));

  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), grid[g] - cut);
    const auto hi = std::upper_bound(lo, sorted.end(), grid[g] + cut);
    const auto n = static_cast<std::size_t>(hi - lo);
    out[g] = n == 0 ? 0.0 : norm * simd::gauss_kernel_sum(&*lo, n, grid[g], inv_bw);
  }
  return out;
}

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("silverman_bandwidth: need >= 2 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double mean = simd::sum(sorted.data(), sorted.size()) / n;
  double acc = 0.0;
  for (const double x : sorted) acc += (x - mean) * (x - mean);
  const double sd = std::sqrt(acc / (n - 1.0));
  auto quantile = [&](double p) {
    const double idx = p * (n - 1.0);
    const auto lo = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(lo);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  if (!(spread > 0.0)) spread = std::max(std::fabs(sorted.back()), 1.0) * 1e-12;
  return 0.9 * spread * std::pow(n, -0.2);
}

std::vector<double> density_grid(std::span<const double> samples, int points) {
  if (points < 2) throw std::invalid_argument("density_grid: need >= 2 points");
  const auto n = static_cast<double>(samples.size());
  double mean = simd::sum(samples.data(), samples.size()) / n;
  double acc = 0.0;
  for (const double x : samples) acc += (x - mean) * (x - mean);
  double sd = n > 1 ? std::sqrt(acc / (n - 1.0)) : 0.0;
  if (!(sd > 0.0)) sd = std::max(1.0, std::fabs(mean)) * 1e-8;
  const double lo = mean - 4.0 * sd;
  const double hi = mean + 4.0 * sd;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

RateFit rate_exponent(std::span<const std::pair<double, double>> t_sd_points) {
  if (t_sd_points.size() < 3) throw std::invalid_argument("rate_exponent: need >= 3 points");
  const auto n = static_cast<double>(t_sd_points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [t, sd] : t_sd_points) {
    if (!(t > 0.0) || !(sd > 0.0)) throw std::invalid_argument("rate_exponent: need positive T, sd");
    sx += std::log(t);
    sy += std::log(sd);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, sse = 0.0;
  for (const auto& [t, sd] : t_sd_points) {
    const double dx = std::log(t) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(sd) - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  for (const auto& [t, sd] : t_sd_points) {
    const double e = (std::log(sd) - my) - fit.slope * (std::log(t) - mx);
    sse += e * e;
  }
  if (t_sd_points.size() > 2) {
    fit.stderr_slope = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return fit;
}

}  // namespace fmcoint
