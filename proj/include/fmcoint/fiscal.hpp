#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmcoint/fmols.hpp"

namespace fmcoint {

// Calendar quarter; FRED quarterly observations are dated at the first day
// of the quarter (YYYY-01-01, -04-01, -07-01, -10-01).
struct Quarter {
  int year = 0;
  int quarter = 0;  // 1..4

  static Quarter from_iso_date(const std::string& yyyy_mm_dd);  // "1947-01-01"
  static Quarter parse(const std::string& text);                // "1947Q1"
  std::string str() const;
  int index() const { return year * 4 + (quarter - 1); }
  auto operator<=>(const Quarter&) const = default;
};

// Aligned quarterly fiscal series (inner join on dates).
struct FiscalDataset {
  std::vector<Quarter> dates;
  Vector gexpnd;  // government current expenditures
  Vector grecpt;  // government current receipts
  std::optional<Vector> deflator;
  std::optional<Vector> population;
  std::vector<std::string> join_warnings;  // dropped dates, per series

  Eigen::Index size() const { return gexpnd.size(); }
};

// Each file: two-column CSV "DATE,VALUE" with ISO dates. Unparseable rows,
// duplicate dates and non-quarterly gaps raise errors naming the line;
// dates missing from any series are dropped from all, with a warning.
FiscalDataset load_fred_csv(const std::filesystem::path& expenditures,
                            const std::filesystem::path& receipts,
                            std::optional<std::filesystem::path> deflator = {},
                            std::optional<std::filesystem::path> population = {});

enum class FiscalTransform { Levels, Logs, RealPerCapita };

FiscalTransform parse_fiscal_transform(const std::string& name);  // levels|logs|real

struct QuarterWindow {
  std::optional<Quarter> from;
  std::optional<Quarter> to;
};

// y = transformed receipts, x = transformed expenditures, restricted to the
// window. Logs require strictly positive values (error names the quarter);
// real-per-capita divides by deflator * population.
SystemData transform(const FiscalDataset& ds, FiscalTransform mode,
                     const QuarterWindow& window = {});

// FM-OLS sustainability test of H0: A = 1 with normal p-value and
// singularity diagnostics for the conditional long-run variance.
struct SustainabilityReport {
  double a_plus = 0.0;
  double a_ols = 0.0;
  double std_error = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  bool reject_5pct = false;
  Eigen::Index sample_size = 0;
  double bandwidth = 0.0;
  std::string kernel;
  bool intercept = false;
  double omega_cond = 0.0;
  std::vector<double> omega_eigenvalues;
  int omega_cond_rank = 0;
  bool singularity_warning = false;
  std::string caveat;

  nlohmann::ordered_json to_json() const;
};

SustainabilityReport sustainability_report(const SystemData& data, const KernelSpec& kernel,
                                           const BandwidthRule& bw, bool intercept);

}  // namespace fmcoint
