#pragma once

#include <filesystem>

#include "fmcoint/series.hpp"

namespace fmcoint {

// Rectangular CSV of reals, one row per t, optional header row
// (auto-detected on read). Values are written with 17 significant digits,
// so write/read round-trips doubles exactly.
TimeSeriesMatrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const TimeSeriesMatrix& m);

// Formats a double with enough digits to round-trip.
std::string format_double(double v);

}  // namespace fmcoint
