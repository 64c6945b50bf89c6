#pragma once

#include <json.hpp>

#include "fmcoint/fmols.hpp"
#include "fmcoint/inference.hpp"

namespace fmcoint {

nlohmann::ordered_json matrix_to_json(const Matrix& m);
Matrix json_to_matrix(const nlohmann::json& j);

// Fit report, schema_version 1. include_lrcov adds the full omega/delta/
// gamma0 matrices on top of the summary blocks.
nlohmann::ordered_json fit_to_json(const FmolsFit& fit, bool include_lrcov = false);

// The subset a test needs back from a serialized fit.
WaldInputs wald_inputs_from_json(const nlohmann::json& j);

}  // namespace fmcoint
