#include "fmcoint/fiscal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fmcoint/inference.hpp"

namespace fmcoint {

Quarter Quarter::from_iso_date(const std::string& s) {
  if (s.size() < 7) throw std::invalid_argument("bad date: " + s);
  Quarter q;
  q.year = std::stoi(s.substr(0, 4));
  const int month = std::stoi(s.substr(5, 2));
  if (month < 1 || month > 12) throw std::invalid_argument("bad month in date: " + s);
  q.quarter = (month - 1) / 3 + 1;
  return q;
}

Quarter Quarter::parse(const std::string& text) {
  const auto qpos = text.find_first_of("Qq");
  if (qpos == std::string::npos) return from_iso_date(text);
  Quarter q;
  q.year = std::stoi(text.substr(0, qpos));
  q.quarter = std::stoi(text.substr(qpos + 1));
  if (q.quarter < 1 || q.quarter > 4) throw std::invalid_argument("bad quarter: " + text);
  return q;
}

std::string Quarter::str() const {
  return std::to_string(year) + "Q" + std::to_string(quarter);
}

namespace {

struct RawSeries {
  std::vector<Quarter> dates;
  std::vector<double> values;
  std::string name;
};

RawSeries read_fred_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  RawSeries s;
  s.name = path.filename().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(s.name + ":" + std::to_string(line_no) + ": expected DATE,VALUE");
    }
    const std::string date_str = line.substr(0, comma);
    const std::string value_str = line.substr(comma + 1);
    if (line_no == 1 && (date_str == "DATE" || date_str == "date" || date_str == "observation_date")) {
      continue;  // header
    }
    Quarter q;
    try {
      q = Quarter::from_iso_date(date_str);
    } catch (const std::exception&) {
      throw std::runtime_error(s.name + ":" + std::to_string(line_no) +
                               ": unparseable date '" + date_str + "'");
    }
    char* end = nullptr;
    const double v = std::strtod(value_str.c_str(), &end);
    if (end == value_str.c_str()) {
      throw std::runtime_error(s.name + ":" + std::to_string(line_no) +
                               ": unparseable value '" + value_str + "'");
    }
    if (!s.dates.empty()) {
      if (q.index() == s.dates.back().index()) {
        throw std::runtime_error(s.name + ":" + std::to_string(line_no) + ": duplicate date " +
                                 q.str());
      }
      if (q.index() != s.dates.back().index() + 1) {
        throw std::runtime_error(s.name + ":" + std::to_string(line_no) +
                                 ": non-quarterly gap between " + s.dates.back().str() + " and " +
                                 q.str());
      }
    }
    s.dates.push_back(q);
    s.values.push_back(v);
  }
  if (s.dates.empty()) throw std::runtime_error(s.name + ": no observations");
  return s;
}

}  // namespace

FiscalDataset load_fred_csv(const std::filesystem::path& expenditures,
                            const std::filesystem::path& receipts,
                            std::optional<std::filesystem::path> deflator,
                            std::optional<std::filesystem::path> population) {
  std::vector<RawSeries> series;
  series.push_back(read_fred_file(expenditures));
  series.push_back(read_fred_file(receipts));
  if (deflator) series.push_back(read_fred_file(*deflator));
  if (population) series.push_back(read_fred_file(*population));

  // inner join: intersection of the (contiguous) date ranges
  int lo = series[0].dates.front().index();
  int hi = series[0].dates.back().index();
  for (const auto& s : series) {
    lo = std::max(lo, s.dates.front().index());
    hi = std::min(hi, s.dates.back().index());
  }
  if (lo > hi) throw std::runtime_error("load_fred_csv: date ranges do not overlap");

  FiscalDataset ds;
  for (const auto& s : series) {
    std::vector<std::string> dropped;
    for (const auto& d : s.dates) {
      if (d.index() < lo || d.index() > hi) dropped.push_back(d.str());
    }
    if (!dropped.empty()) {
      std::string w = s.name + ": dropped " + std::to_string(dropped.size()) + " date(s):";
      for (const auto& d : dropped) w += " " + d;
      ds.join_warnings.push_back(std::move(w));
    }
  }

  const auto n = static_cast<Eigen::Index>(hi - lo + 1);
  auto slice = [&](const RawSeries& s) {
    const auto offset = static_cast<std::size_t>(lo - s.dates.front().index());
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = s.values[offset + static_cast<std::size_t>(i)];
    return v;
  };
  for (int idx = lo; idx <= hi; ++idx) {
    ds.dates.push_back(Quarter{idx / 4, idx % 4 + 1});
  }
  ds.gexpnd = slice(series[0]);
  ds.grecpt = slice(series[1]);
  std::size_t next = 2;
  if (deflator) ds.deflator = slice(series[next++]);
  if (population) ds.population = slice(series[next++]);
  return ds;
}

FiscalTransform parse_fiscal_transform(const std::string& name) {
  if (name == "levels") return FiscalTransform::Levels;
  if (name == "logs") return FiscalTransform::Logs;
  if (name == "real" || name == "real-percapita") return FiscalTransform::RealPerCapita;
  throw std::invalid_argument("unknown transform mode: " + name);
}

SystemData transform(const FiscalDataset& ds, FiscalTransform mode, const QuarterWindow& window) {
  Eigen::Index begin = 0;
  Eigen::Index end = ds.size();
  if (window.from) {
    while (begin < end && ds.dates[static_cast<std::size_t>(begin)] < *window.from) ++begin;
  }
  if (window.to) {
    while (end > begin && *window.to < ds.dates[static_cast<std::size_t>(end - 1)]) --end;
  }
  const Eigen::Index n = end - begin;
  if (n < 3) throw std::invalid_argument("transform: window leaves fewer than 3 observations");

  Vector y(n), x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(begin + i);
    double recv = ds.grecpt(begin + i);
    double expd = ds.gexpnd(begin + i);
    switch (mode) {
      case FiscalTransform::Levels:
        break;
      case FiscalTransform::Logs:
        if (!(recv > 0.0) || !(expd > 0.0)) {
          throw std::invalid_argument("transform: nonpositive value under logs at " +
                                      ds.dates[row].str());
        }
        recv = std::log(recv);
        expd = std::log(expd);
        break;
      case FiscalTransform::RealPerCapita: {
        if (!ds.deflator || !ds.population) {
          throw std::invalid_argument("transform: real mode needs deflator and population");
        }
        const double scale = (*ds.deflator)(begin + i) * (*ds.population)(begin + i);
        if (!(scale > 0.0)) {
          throw std::invalid_argument("transform: nonpositive deflator*population at " +
                                      ds.dates[row].str());
        }
        recv /= scale;
        expd /= scale;
        break;
      }
    }
    y(i) = recv;
    x(i) = expd;
  }
  return SystemData{TimeSeriesMatrix(y, {"receipts"}), TimeSeriesMatrix(x, {"expenditures"}),
                    std::nullopt};
}

SustainabilityReport sustainability_report(const SystemData& data, const KernelSpec& kernel,
                                           const BandwidthRule& bw, bool intercept) {
  const FmolsFit fit = fm_ols(data, kernel, bw, intercept);
  SustainabilityReport rep;
  rep.a_plus = fit.a_plus(0, 0);
  rep.a_ols = fit.a_ols(0, 0);
  rep.omega_cond = fit.lr.omega_cond(0, 0);
  rep.sample_size = fit.sample_size;
  rep.bandwidth = fit.bandwidth_used;
  rep.kernel = kernel.name();
  rep.intercept = intercept;

  const auto dirs = singular_directions(fit.lr.omega_cond);
  rep.omega_cond_rank = dirs.rank;
  for (Eigen::Index i = 0; i < dirs.eigenvalues.size(); ++i) {
    rep.omega_eigenvalues.push_back(dirs.eigenvalues(i));
  }
  rep.singularity_warning = dirs.rank < fit.lr.omega_cond.rows();

  rep.t_statistic = t_statistic(fit, 1.0);
  rep.std_error = std::sqrt(rep.omega_cond / fit.xtx(0, 0));
  rep.p_value = normal_two_sided_pvalue(rep.t_statistic);
  rep.reject_5pct = std::fabs(rep.t_statistic) > 1.9599639845400545;
  rep.caveat =
      "If receipts and expenditures are multicointegrated (singular conditional "
      "long-run variance), the normal approximation is conservative: true test "
      "size falls below the nominal level, so rejections remain valid.";
  return rep;
}

nlohmann::ordered_json SustainabilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["estimator"] = "fm-ols";
  j["null_hypothesis"] = "A = 1";
  j["a_plus"] = a_plus;
  j["a_ols"] = a_ols;
  j["std_error"] = std_error;
  j["t_statistic"] = t_statistic;
  j["p_value"] = p_value;
  j["reject_5pct"] = reject_5pct;
  j["sample_size"] = sample_size;
  j["kernel"] = kernel;
  j["bandwidth"] = bandwidth;
  j["intercept"] = intercept;
  j["omega_cond"] = omega_cond;
  j["omega_cond_eigenvalues"] = omega_eigenvalues;
  j["omega_cond_rank"] = omega_cond_rank;
  j["singularity_warning"] = singularity_warning;
  j["caveat"] = caveat;
  return j;
}

}  // namespace fmcoint
