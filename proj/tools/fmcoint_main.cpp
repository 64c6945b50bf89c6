// fmcoint command line: simulation, estimation, testing, Monte Carlo tables
// and the fiscal sustainability pipeline.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmcoint/csv.hpp"
#include "fmcoint/dgp.hpp"
#include "fmcoint/fiscal.hpp"
#include "fmcoint/fmols.hpp"
#include "fmcoint/inference.hpp"
#include "fmcoint/jsonio.hpp"
#include "fmcoint/montecarlo.hpp"
#include "fmcoint/simd.hpp"

namespace {

using namespace fmcoint;

struct KernelFlags {
  std::string kernel = "parzen";
  std::string bandwidth;
  double bandwidth_const = 0.0;
  bool bandwidth_floor = false;

  void attach(CLI::App* cmd, const std::string& default_rule) {
    bandwidth = default_rule;
    cmd->add_option("--kernel", kernel, "kernel family: parzen|th|bartlett|qs")
        ->capture_default_str();
    cmd->add_option("--bandwidth", bandwidth, "bandwidth rule \"c*T^k\"")->capture_default_str();
    cmd->add_option("--bandwidth-const", bandwidth_const, "fixed bandwidth K (overrides rule)");
    cmd->add_flag("--bandwidth-floor", bandwidth_floor,
                  "floor c*T^k to an integer (the simulation-table convention)");
  }

  KernelSpec spec() const { return KernelSpec::parse(kernel); }
  BandwidthRule rule() const {
    if (bandwidth_const > 0.0) return BandwidthRule::constant(bandwidth_const);
    return BandwidthRule::parse(bandwidth, bandwidth_floor);
  }
};

DgpSpec dgp_from_flags(const std::string& name, double p, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);
    return DgpSpec::from_json(nlohmann::json::parse(in));
  }
  if (name == "dgp1") return DgpSpec::dgp1(p);
  if (name == "dgp2") return DgpSpec::dgp2(p);
  throw std::runtime_error("unknown DGP preset: " + name + " (use dgp1|dgp2 or --dgp-file)");
}

// "0,-0.1,...,-1.0" -> arithmetic progression; plain comma lists also work.
std::vector<double> parse_value_list(const std::string& text) {
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) tokens.push_back(tok);
  std::vector<double> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "...") {
      if (out.size() < 2 || i + 1 >= tokens.size()) {
        throw std::runtime_error("list ellipsis needs two leading values and a final value");
      }
      const double step = out[out.size() - 1] - out[out.size() - 2];
      const double last = std::stod(tokens[i + 1]);
      if (step == 0.0) throw std::runtime_error("list ellipsis with zero step");
      double v = out.back() + step;
      while ((step > 0 && v < last + 1e-9 * std::fabs(step)) ||
             (step < 0 && v > last - 1e-9 * std::fabs(step))) {
        out.push_back(v);
        v += step;
      }
      ++i;
      continue;
    }
    out.push_back(std::stod(tokens[i]));
  }
  return out;
}

std::vector<Eigen::Index> parse_t_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  // "100:1600" doubles from the left end to the right end
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const auto lo = static_cast<Eigen::Index>(std::stoll(text.substr(0, colon)));
    const auto hi = static_cast<Eigen::Index>(std::stoll(text.substr(colon + 1)));
    for (Eigen::Index t = lo; t <= hi; t *= 2) out.push_back(t);
    return out;
  }
  for (const double v : parse_value_list(text)) out.push_back(static_cast<Eigen::Index>(v));
  return out;
}

// "1,2;3,4" -> 2x2
Matrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row_str;
  while (std::getline(ss, row_str, ';')) rows.push_back(parse_value_list(row_str));
  if (rows.empty()) throw std::runtime_error("empty matrix literal");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (rows[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(m.cols())) {
      throw std::runtime_error("ragged matrix literal");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

std::vector<Eigen::Index> resolve_columns(const TimeSeriesMatrix& data, const std::string& sel) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(sel);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    bool numeric = !tok.empty() && tok.find_first_not_of("0123456789") == std::string::npos;
    if (numeric) {
      out.push_back(std::stoll(tok));
      continue;
    }
    bool found = false;
    for (std::size_t c = 0; c < data.labels().size(); ++c) {
      if (data.labels()[c] == tok) {
        out.push_back(static_cast<Eigen::Index>(c));
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("no column named '" + tok + "'");
  }
  if (out.empty()) throw std::runtime_error("empty column selection");
  return out;
}

TimeSeriesMatrix select_columns(const TimeSeriesMatrix& data,
                                const std::vector<Eigen::Index>& cols) {
  Matrix m(data.rows(), static_cast<Eigen::Index>(cols.size()));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] < 0 || cols[i] >= data.cols()) throw std::runtime_error("column index out of range");
    m.col(static_cast<Eigen::Index>(i)) = data.values().col(cols[i]);
    if (data.has_labels()) labels.push_back(data.labels()[static_cast<std::size_t>(cols[i])]);
  }
  return TimeSeriesMatrix(std::move(m), std::move(labels));
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << content;
}

int run(int argc, char** argv) {
  CLI::App app{"FM-OLS estimation and inference for cointegrated systems with "
               "possibly singular long-run covariance"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "draw a triangular system from a preset or JSON DGP");
  std::string sim_dgp = "dgp1", sim_dgp_file, sim_out;
  double sim_p = 0.0;
  Eigen::Index sim_t = 100;
  std::uint64_t sim_seed = 0, sim_stream = 0;
  sim->add_option("--dgp", sim_dgp, "dgp1|dgp2")->capture_default_str();
  sim->add_option("--p", sim_p, "preset MA parameter")->capture_default_str();
  sim->add_option("--dgp-file", sim_dgp_file, "JSON DgpSpec (overrides preset)");
  sim->add_option("--T", sim_t, "sample size")->capture_default_str();
  sim->add_option("--seed", sim_seed, "64-bit seed")->capture_default_str();
  sim->add_option("--stream", sim_stream, "stream id under the seed")->capture_default_str();
  sim->add_option("--out", sim_out, "output CSV (default stdout)");
  sim->callback([&] {
    const DgpSpec spec = dgp_from_flags(sim_dgp, sim_p, sim_dgp_file);
    const SystemData data = simulate(spec, sim_t, sim_seed, sim_stream);
    Matrix joined(data.y.rows(), data.y.cols() + data.x.cols());
    joined << data.y.values(), data.x.values();
    std::vector<std::string> labels = data.y.labels();
    labels.insert(labels.end(), data.x.labels().begin(), data.x.labels().end());
    const TimeSeriesMatrix out_mat(std::move(joined), std::move(labels));
    if (sim_out.empty() || sim_out == "-") {
      std::ostringstream buf;
      for (Eigen::Index c = 0; c < out_mat.cols(); ++c) {
        buf << (c ? "," : "") << out_mat.labels()[static_cast<std::size_t>(c)];
      }
      buf << '\n';
      for (Eigen::Index r = 0; r < out_mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < out_mat.cols(); ++c) {
          buf << (c ? "," : "") << format_double(out_mat.values()(r, c));
        }
        buf << '\n';
      }
      std::cout << buf.str();
    } else {
      write_csv_matrix(sim_out, out_mat);
    }
  });

  // ---- estimate ----
  auto* est = app.add_subcommand("estimate", "FM-OLS fit from a CSV of series");
  std::string est_input, est_ycols = "0", est_xcols = "1", est_x0, est_out;
  bool est_intercept = false, est_dump_lrcov = false;
  KernelFlags est_kernel;
  est->add_option("--input", est_input, "input CSV")->required();
  est->add_option("--ycols", est_ycols, "dependent columns (names or 0-based indices)")
      ->capture_default_str();
  est->add_option("--xcols", est_xcols, "regressor columns")->capture_default_str();
  est->add_option("--x0", est_x0,
                  "initial regressor value: \"zero\" or comma list; omit for observed data");
  est->add_flag("--intercept", est_intercept, "demean y and x before the pipeline");
  est->add_flag("--dump-lrcov", est_dump_lrcov, "include full long-run matrices in the report");
  est_kernel.attach(est, "1*T^0.25");
  est->add_option("--out", est_out, "output JSON (default stdout)");
  est->callback([&] {
    const TimeSeriesMatrix raw = read_csv_matrix(est_input);
    const TimeSeriesMatrix y = select_columns(raw, resolve_columns(raw, est_ycols));
    const TimeSeriesMatrix x = select_columns(raw, resolve_columns(raw, est_xcols));
    std::optional<Vector> x0;
    if (!est_x0.empty()) {
      if (est_x0 == "zero") {
        x0 = Vector::Zero(x.cols());
      } else {
        const auto vals = parse_value_list(est_x0);
        x0 = Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
      }
    }
    const SystemData data{y, x, x0};
    const FmolsFit fit = fm_ols(data, est_kernel.spec(), est_kernel.rule(), est_intercept);
    emit(est_out, fit_to_json(fit, est_dump_lrcov).dump(2) + "\n");
  });

  // ---- test ----
  auto* tst = app.add_subcommand("test", "Wald/t tests on a serialized fit");
  std::string tst_fit, tst_a0, tst_q, tst_r0, tst_out;
  bool tst_allow_degenerate = false;
  tst->add_option("--fit", tst_fit, "fit JSON from `estimate`")->required();
  tst->add_option("--A0", tst_a0, "full restriction A = A0, matrix literal \"1,2;3,4\"");
  tst->add_option("--linear-Q", tst_q, "linear restriction matrix Q (rows ';', cols ',')");
  tst->add_option("--linear-r0", tst_r0, "linear restriction target r0 (comma list)");
  tst->add_flag("--allow-degenerate", tst_allow_degenerate,
                "pseudo-invert a singular weighting matrix instead of failing");
  tst->add_option("--out", tst_out, "output JSON (default stdout)");
  tst->callback([&] {
    std::ifstream in(tst_fit);
    if (!in) throw std::runtime_error("cannot open " + tst_fit);
    const auto fit_json = nlohmann::json::parse(in);
    const WaldInputs inputs = wald_inputs_from_json(fit_json);

    RestrictionSpec restriction;
    if (!tst_a0.empty()) {
      restriction = full_restriction(parse_matrix(tst_a0));
    } else if (!tst_q.empty()) {
      LinearRestriction lin;
      lin.q = parse_matrix(tst_q);
      const auto r0 = parse_value_list(tst_r0);
      lin.r0 = Eigen::Map<const Vector>(r0.data(), static_cast<Eigen::Index>(r0.size()));
      restriction = std::move(lin);
    } else {
      throw std::runtime_error("pass --A0 or --linear-Q/--linear-r0");
    }
    WaldOptions options;
    options.allow_degenerate = tst_allow_degenerate;
    const WaldResult res = wald(inputs, restriction, options);

    nlohmann::ordered_json j;
    j["statistic"] = res.statistic;
    j["q_nominal"] = res.q_nominal;
    j["q_effective"] = res.q_effective;
    j["p_nominal"] = res.p_nominal;
    j["p_effective"] = res.p_effective;
    j["degenerate"] = res.degenerate;
    j["notes"] = res.notes;
    if (inputs.a_plus.rows() == 1 && inputs.a_plus.cols() == 1 && !tst_a0.empty()) {
      j["t_statistic"] = t_statistic(inputs, parse_matrix(tst_a0)(0, 0));
    }
    emit(tst_out, j.dump(2) + "\n");
  });

  // ---- mc-table ----
  auto* mct = app.add_subcommand("mc-table", "simulation table over p and T");
  std::string mct_dgp = "dgp1", mct_dgp_file, mct_plist = "0", mct_tlist = "50,100";
  std::string mct_const_list, mct_out;
  int mct_reps = 10000, mct_workers = 0;
  std::uint64_t mct_seed = 42;
  double mct_a0 = 2.0;
  KernelFlags mct_kernel;
  bool mct_no_floor = false;
  mct->add_option("--dgp", mct_dgp, "dgp1|dgp2")->capture_default_str();
  mct->add_option("--dgp-file", mct_dgp_file, "JSON DgpSpec template (p ignored)");
  mct->add_option("--p-list", mct_plist, "e.g. \"0,-0.1,...,-1.0\"")->capture_default_str();
  mct->add_option("--T", mct_tlist, "sample sizes")->capture_default_str();
  mct->add_option("--reps", mct_reps, "replications per cell")->capture_default_str();
  mct->add_option("--seed", mct_seed, "seed")->capture_default_str();
  mct->add_option("--A0", mct_a0, "null value for the t statistic")->capture_default_str();
  mct->add_option("--workers", mct_workers, "worker threads (0 = hardware)");
  mct->add_option("--bandwidth-const-list", mct_const_list,
                  "fixed bandwidths, e.g. \"3,4,...,10\"");
  mct->add_flag("--no-bandwidth-floor", mct_no_floor,
                "use the real-valued c*T^k instead of the table convention floor(c*T^k)");
  mct_kernel.attach(mct, "1*T^0.25");
  mct->add_option("--out", mct_out, "output CSV (default stdout)");
  mct->callback([&] {
    std::ostringstream out;
    out << McReport::csv_header() << '\n';
    for (const double p : parse_value_list(mct_plist)) {
      McConfig config;
      config.dgp = dgp_from_flags(mct_dgp, p, mct_dgp_file);
      config.t_list = parse_t_list(mct_tlist);
      config.reps = mct_reps;
      config.kernel = mct_kernel.spec();
      config.bandwidths.clear();
      if (!mct_const_list.empty()) {
        for (const double k : parse_value_list(mct_const_list)) {
          config.bandwidths.push_back(BandwidthRule::constant(k));
        }
      } else if (mct_kernel.bandwidth_const > 0.0) {
        config.bandwidths.push_back(BandwidthRule::constant(mct_kernel.bandwidth_const));
      } else {
        // table convention: integer bandwidths unless opted out
        config.bandwidths.push_back(BandwidthRule::parse(mct_kernel.bandwidth, !mct_no_floor));
      }
      config.a0 = mct_a0;
      config.seed = mct_seed;
      config.workers = mct_workers;
      out << run_experiment(config).csv_rows(p);
    }
    emit(mct_out, out.str());
  });

  // ---- mc-density ----
  auto* mcd = app.add_subcommand("mc-density", "density grids of the bias and t statistic");
  std::string mcd_dgp = "dgp1", mcd_dgp_file, mcd_plist = "0,-0.5,-1.0", mcd_tlist = "50,100";
  std::string mcd_out;
  int mcd_reps = 10000, mcd_workers = 0, mcd_grid = 512;
  std::uint64_t mcd_seed = 42;
  double mcd_a0 = 2.0;
  KernelFlags mcd_kernel;
  bool mcd_no_floor = false;
  mcd->add_option("--dgp", mcd_dgp, "dgp1|dgp2")->capture_default_str();
  mcd->add_option("--dgp-file", mcd_dgp_file, "JSON DgpSpec template");
  mcd->add_option("--p-list", mcd_plist, "MA parameters")->capture_default_str();
  mcd->add_option("--T", mcd_tlist, "sample sizes")->capture_default_str();
  mcd->add_option("--reps", mcd_reps, "replications")->capture_default_str();
  mcd->add_option("--seed", mcd_seed, "seed")->capture_default_str();
  mcd->add_option("--A0", mcd_a0, "null value")->capture_default_str();
  mcd->add_option("--grid", mcd_grid, "grid points")->capture_default_str();
  mcd->add_option("--workers", mcd_workers, "worker threads");
  mcd->add_flag("--no-bandwidth-floor", mcd_no_floor, "real-valued bandwidth rule");
  mcd_kernel.attach(mcd, "1*T^0.25");
  mcd->add_option("--out", mcd_out, "output CSV (default stdout)");
  mcd->callback([&] {
    std::ostringstream out;
    out << "T,p,K,stat,grid,density\n";
    for (const double p : parse_value_list(mcd_plist)) {
      McConfig config;
      config.dgp = dgp_from_flags(mcd_dgp, p, mcd_dgp_file);
      config.t_list = parse_t_list(mcd_tlist);
      config.reps = mcd_reps;
      config.kernel = mcd_kernel.spec();
      config.bandwidths = {BandwidthRule::parse(mcd_kernel.bandwidth, !mcd_no_floor)};
      config.a0 = mcd_a0;
      config.seed = mcd_seed;
      config.workers = mcd_workers;
      config.densities = true;
      config.density_grid_points = mcd_grid;
      const McReport rep = run_experiment(config);
      for (const auto& cell : rep.cells) {
        for (std::size_t i = 0; i < cell.bias_grid.size(); ++i) {
          out << cell.t_len << ',' << p << ',' << format_double(cell.k_bandwidth) << ",bias,"
              << format_double(cell.bias_grid[i]) << ',' << format_double(cell.bias_density[i])
              << '\n';
        }
        for (std::size_t i = 0; i < cell.t_grid.size(); ++i) {
          out << cell.t_len << ',' << p << ',' << format_double(cell.k_bandwidth) << ",t,"
              << format_double(cell.t_grid[i]) << ',' << format_double(cell.t_density[i]) << '\n';
        }
      }
    }
    emit(mcd_out, out.str());
  });

  // ---- rate-check ----
  auto* rate = app.add_subcommand("rate-check", "log-log convergence-rate fit of sd vs T");
  std::string rate_dgp = "dgp2", rate_dgp_file, rate_tlist = "100:1600", rate_out;
  double rate_p = 5.2, rate_a0 = 2.0;
  int rate_reps = 2000, rate_workers = 0;
  std::uint64_t rate_seed = 42;
  KernelFlags rate_kernel;
  bool rate_no_floor = false;
  rate->add_option("--dgp", rate_dgp, "dgp1|dgp2")->capture_default_str();
  rate->add_option("--dgp-file", rate_dgp_file, "JSON DgpSpec");
  rate->add_option("--p", rate_p, "MA parameter")->capture_default_str();
  rate->add_option("--T-grid", rate_tlist, "\"lo:hi\" doubling grid or comma list")
      ->capture_default_str();
  rate->add_option("--reps", rate_reps, "replications per T")->capture_default_str();
  rate->add_option("--seed", rate_seed, "seed")->capture_default_str();
  rate->add_option("--A0", rate_a0, "null value")->capture_default_str();
  rate->add_option("--workers", rate_workers, "worker threads");
  rate->add_flag("--no-bandwidth-floor", rate_no_floor, "real-valued bandwidth rule");
  rate_kernel.attach(rate, "1*T^0.25");
  rate->add_option("--out", rate_out, "output JSON (default stdout)");
  rate->callback([&] {
    McConfig config;
    config.dgp = dgp_from_flags(rate_dgp, rate_p, rate_dgp_file);
    config.t_list = parse_t_list(rate_tlist);
    config.reps = rate_reps;
    config.kernel = rate_kernel.spec();
    config.bandwidths = {BandwidthRule::parse(rate_kernel.bandwidth, !rate_no_floor)};
    config.a0 = rate_a0;
    config.seed = rate_seed;
    config.workers = rate_workers;
    const McReport rep = run_experiment(config);

    std::vector<std::pair<double, double>> points;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& cell : rep.cells) {
      points.emplace_back(static_cast<double>(cell.t_len), cell.bias_sd);
      nlohmann::ordered_json jc;
      jc["T"] = cell.t_len;
      jc["K"] = cell.k_bandwidth;
      jc["bias_sd"] = cell.bias_sd;
      cells.push_back(std::move(jc));
    }
    const RateFit fit = rate_exponent(points);
    nlohmann::ordered_json j;
    j["cells"] = std::move(cells);
    j["slope"] = fit.slope;
    j["slope_stderr"] = fit.stderr_slope;
    j["convergence_rate"] = -fit.slope;
    emit(rate_out, j.dump(2) + "\n");
  });

  // ---- fiscal ----
  auto* fis = app.add_subcommand("fiscal", "receipts-on-expenditures sustainability test");
  std::string fis_exp, fis_rec, fis_def, fis_pop, fis_mode = "levels", fis_from, fis_to, fis_out;
  bool fis_intercept = false;
  KernelFlags fis_kernel;
  fis->add_option("--expenditures", fis_exp, "GEXPND-style CSV (DATE,VALUE)")->required();
  fis->add_option("--receipts", fis_rec, "GRECPT-style CSV (DATE,VALUE)")->required();
  fis->add_option("--deflator", fis_def, "price deflator CSV (real mode)");
  fis->add_option("--population", fis_pop, "population CSV (real mode)");
  fis->add_option("--mode", fis_mode, "levels|logs|real")->capture_default_str();
  fis->add_option("--from", fis_from, "window start, e.g. 1947Q1");
  fis->add_option("--to", fis_to, "window end, e.g. 2019Q1");
  fis->add_flag("--intercept", fis_intercept, "demean before the pipeline");
  fis_kernel.attach(fis, "3*T^0.2");
  fis->add_option("--out", fis_out, "output JSON (default stdout)");
  fis->callback([&] {
    std::optional<std::filesystem::path> def, pop;
    if (!fis_def.empty()) def = fis_def;
    if (!fis_pop.empty()) pop = fis_pop;
    const FiscalDataset ds = load_fred_csv(fis_exp, fis_rec, def, pop);
    for (const auto& w : ds.join_warnings) std::cerr << "warning: " << w << '\n';
    QuarterWindow window;
    if (!fis_from.empty()) window.from = Quarter::parse(fis_from);
    if (!fis_to.empty()) window.to = Quarter::parse(fis_to);
    const SystemData data = transform(ds, parse_fiscal_transform(fis_mode), window);
    const SustainabilityReport rep =
        sustainability_report(data, fis_kernel.spec(), fis_kernel.rule(), fis_intercept);
    emit(fis_out, rep.to_json().dump(2) + "\n");
  });

  // ---- backend ----
  auto* info = app.add_subcommand("backend", "print the active SIMD backend");
  info->callback([&] {
    std::cout << simd::backend_name(simd::active()) << '\n';
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
