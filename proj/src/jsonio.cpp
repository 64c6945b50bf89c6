#include "fmcoint/jsonio.hpp"

#include <stdexcept>

#include "fmcoint/lrcov.hpp"

namespace fmcoint {

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix json_to_matrix(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) throw std::invalid_argument("empty matrix in JSON");
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols) {
      throw std::invalid_argument("ragged matrix in JSON");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

nlohmann::ordered_json fit_to_json(const FmolsFit& fit, bool include_lrcov) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["estimator"] = "fm-ols";
  j["T"] = fit.sample_size;
  j["m0"] = fit.a_plus.rows();
  j["mx"] = fit.a_plus.cols();
  j["intercept"] = fit.intercept_used;
  j["kernel"] = fit.kernel.name();
  j["bandwidth"] = fit.bandwidth_used;
  j["a_plus"] = matrix_to_json(fit.a_plus);
  j["a_ols"] = matrix_to_json(fit.a_ols);
  j["delta_plus_0x"] = matrix_to_json(fit.delta_plus_0x);
  j["f_hat"] = matrix_to_json(fit.lr.f_hat);
  j["xtx"] = matrix_to_json(fit.xtx);
  j["omega_cond"] = matrix_to_json(fit.lr.omega_cond);

  const auto dirs = singular_directions(fit.lr.omega_cond);
  nlohmann::ordered_json eig = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < dirs.eigenvalues.size(); ++i) eig.push_back(dirs.eigenvalues(i));
  j["omega_cond_eigenvalues"] = std::move(eig);
  j["omega_cond_rank"] = dirs.rank;

  if (fit.a_plus.rows() == 1 && fit.a_plus.cols() == 1 && fit.lr.omega_cond(0, 0) > 0.0) {
    j["std_error"] = std::sqrt(fit.lr.omega_cond(0, 0) / fit.xtx(0, 0));
  }
  if (include_lrcov) {
    j["omega"] = matrix_to_json(fit.lr.omega);
    j["delta"] = matrix_to_json(fit.lr.delta);
    j["gamma0"] = matrix_to_json(fit.lr.gamma0);
  }
  return j;
}

WaldInputs wald_inputs_from_json(const nlohmann::json& j) {
  WaldInputs in;
  in.a_plus = json_to_matrix(j.at("a_plus"));
  in.omega_cond = json_to_matrix(j.at("omega_cond"));
  in.xtx = json_to_matrix(j.at("xtx"));
  return in;
}

}  // namespace fmcoint
