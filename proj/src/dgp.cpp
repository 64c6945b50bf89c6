#include "fmcoint/dgp.hpp"

#include <stdexcept>

#include "fmcoint/errors.hpp"
#include "fmcoint/jsonio.hpp"
#include "fmcoint/lrcov.hpp"
#include "fmcoint/rng.hpp"

namespace fmcoint {

void DgpSpec::validate() const {
  const Eigen::Index mm = m();
  if (m0() < 1 || mx() < 1) throw std::invalid_argument("DgpSpec: need m0 >= 1 and mx >= 1");
  for (const auto& d : ma_coeffs) {
    if (d.rows() != mm || d.cols() != mm) throw std::invalid_argument("DgpSpec: D_j must be m x m");
  }
  if (sigma.rows() != mm || sigma.cols() != mm) {
    throw std::invalid_argument("DgpSpec: sigma must be m x m");
  }
  if (linalg::asymmetry(sigma) > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("DgpSpec: sigma must be symmetric");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("DgpSpec: sigma must be positive definite");
  }
  if (x0.size() != mx()) throw std::invalid_argument("DgpSpec: x0 must have mx entries");
}

DgpSpec DgpSpec::dgp1(double p) {
  DgpSpec s;
  s.a = Matrix::Constant(1, 1, 2.0);
  Matrix d1 = Matrix::Zero(2, 2);
  d1(0, 0) = p;
  s.ma_coeffs = {d1};
  s.sigma = Matrix::Identity(2, 2);
  s.x0 = Vector::Zero(1);
  return s;
}

DgpSpec DgpSpec::dgp2(double p) {
  DgpSpec s;
  s.a = Matrix::Constant(1, 1, 2.0);
  Matrix d1(2, 2);
  d1 << 0.3, 0.4, p, 0.6;
  s.ma_coeffs = {d1};
  s.sigma = Matrix(2, 2);
  s.sigma << 1.0, 0.5, 0.5, 1.0;
  s.x0 = Vector::Zero(1);
  return s;
}

nlohmann::ordered_json DgpSpec::to_json() const {
  nlohmann::ordered_json j;
  j["a"] = matrix_to_json(a);
  j["ma_coeffs"] = nlohmann::ordered_json::array();
  for (const auto& d : ma_coeffs) j["ma_coeffs"].push_back(matrix_to_json(d));
  j["sigma"] = matrix_to_json(sigma);
  j["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
  return j;
}

DgpSpec DgpSpec::from_json(const nlohmann::json& j) {
  DgpSpec s;
  s.a = json_to_matrix(j.at("a"));
  for (const auto& d : j.at("ma_coeffs")) s.ma_coeffs.push_back(json_to_matrix(d));
  s.sigma = json_to_matrix(j.at("sigma"));
  const auto x0 = j.at("x0").get<std::vector<double>>();
  s.x0 = Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  s.validate();
  return s;
}

namespace {

// eta rows t = 1-q .. T (T+q rows), already correlated with chol(Sigma).
Matrix draw_innovations(const DgpSpec& spec, Eigen::Index t_len, std::uint64_t seed,
                        std::uint64_t stream) {
  const Eigen::Index m = spec.m();
  const Eigen::Index rows = t_len + spec.q();
  PhiloxStream rng(seed, stream);
  Matrix eta(rows, m);
  for (Eigen::Index t = 0; t < rows; ++t) {
    for (Eigen::Index i = 0; i < m; ++i) eta(t, i) = rng.next_gaussian();
  }
  Eigen::LLT<Matrix> llt(spec.sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("simulate: sigma must be positive definite");
  }
  const Matrix chol_l = llt.matrixL();
  return eta * chol_l.transpose();
}

Matrix build_errors(const DgpSpec& spec, const Matrix& eta, Eigen::Index t_len) {
  const Eigen::Index q = spec.q();
  const Eigen::Index m = spec.m();
  Matrix u = eta.bottomRows(t_len);  // D_0 = I term
  for (Eigen::Index j = 1; j <= q; ++j) {
    u += eta.middleRows(q - j, t_len) * spec.ma_coeffs[j - 1].transpose();
  }
  (void)m;
  return u;
}

}  // namespace

TimeSeriesMatrix simulate_errors(const DgpSpec& spec, Eigen::Index t_len, std::uint64_t seed,
                                 std::uint64_t stream) {
  spec.validate();
  if (t_len < 2) throw std::invalid_argument("simulate: T must be >= 2");
  const Matrix eta = draw_innovations(spec, t_len, seed, stream);
  return TimeSeriesMatrix(build_errors(spec, eta, t_len));
}

SystemData simulate(const DgpSpec& spec, Eigen::Index t_len, std::uint64_t seed,
                    std::uint64_t stream) {
  spec.validate();
  if (t_len < 2) throw std::invalid_argument("simulate: T must be >= 2");
  const Matrix eta = draw_innovations(spec, t_len, seed, stream);
  const Matrix u = build_errors(spec, eta, t_len);
  const Eigen::Index m0 = spec.m0();
  const Eigen::Index mx = spec.mx();

  Matrix x(t_len, mx);
  Eigen::RowVectorXd level = spec.x0.transpose();
  for (Eigen::Index t = 0; t < t_len; ++t) {
    level += u.row(t).tail(mx);
    x.row(t) = level;
  }
  Matrix y = x * spec.a.transpose() + u.leftCols(m0);

  std::vector<std::string> ylab(m0), xlab(mx);
  for (Eigen::Index i = 0; i < m0; ++i) ylab[i] = "y" + std::to_string(i + 1);
  for (Eigen::Index i = 0; i < mx; ++i) xlab[i] = "x" + std::to_string(i + 1);
  return SystemData{TimeSeriesMatrix(std::move(y), std::move(ylab)),
                    TimeSeriesMatrix(std::move(x), std::move(xlab)), spec.x0};
}

Matrix population_autocov(const DgpSpec& spec, std::int64_t h) {
  if (h < 0) return population_autocov(spec, -h).transpose();
  const Eigen::Index q = spec.q();
  const Eigen::Index m = spec.m();
  Matrix g = Matrix::Zero(m, m);
  if (h > q) return g;
  // Gamma(h) = sum_k D_{k+h} Sigma D_k'
  auto coeff = [&](Eigen::Index j) -> Matrix {
    return j == 0 ? Matrix::Identity(m, m) : spec.ma_coeffs[j - 1];
  };
  for (Eigen::Index k = 0; k + h <= q; ++k) {
    g += coeff(k + h) * spec.sigma * coeff(k).transpose();
  }
  return g;
}

PopulationQuantities population(const DgpSpec& spec) {
  spec.validate();
  const Eigen::Index m = spec.m();
  const Eigen::Index m0 = spec.m0();
  const Eigen::Index mx = spec.mx();
  const Eigen::Index q = spec.q();

  Matrix d1 = Matrix::Identity(m, m);  // D(1) = sum_j D_j
  for (const auto& d : spec.ma_coeffs) d1 += d;

  PopulationQuantities out;
  out.omega = d1 * spec.sigma * d1.transpose();
  out.gamma0 = population_autocov(spec, 0);
  out.gamma_plus = out.gamma0;
  for (Eigen::Index h = 1; h <= q; ++h) out.gamma_plus += population_autocov(spec, h);

  const Matrix omegaxx = out.omega.bottomRightCorner(mx, mx);
  out.omega_xx_pd =
      linalg::numerical_rank(omegaxx, linalg::kConditionCutoff) == static_cast<int>(mx);
  if (!out.omega_xx_pd) return out;  // partial output, flagged

  const auto cond = conditional_lrcov(out.omega, m0);
  out.omega_cond = cond.omega_cond;
  out.f = cond.f;
  out.mc_rank = multicoint_rank(out.omega, m0);

  const auto dirs = singular_directions(out.omega_cond);
  const Eigen::Index s = m0 - dirs.rank;
  out.r_perp = dirs.r_perp;
  if (s == 0) return out;  // nonsingular: no e-process

  // l = [I, -F];  E_j = R_perp' l sum_{t>j} D_t, j = 0..q-1
  Matrix l(m0, m);
  l << Matrix::Identity(m0, m0), -out.f;
  out.e_coeffs.resize(static_cast<std::size_t>(std::max<Eigen::Index>(q, 0)));
  Matrix tail = Matrix::Zero(m, m);
  for (Eigen::Index j = q - 1; j >= 0; --j) {
    tail += spec.ma_coeffs[j];  // now sum_{t>j} D_t
    out.e_coeffs[j] = dirs.r_perp.transpose() * l * tail;
  }

  Matrix e1 = Matrix::Zero(s, m);  // E(1)
  for (const auto& e : out.e_coeffs) e1 += e;
  out.omega_ee = e1 * spec.sigma * e1.transpose();

  // Gamma_{e,ux}(j) = sum_b E_{j+b} Sigma D_{x,b}',   j in [-q, q-1]
  auto x_block = [&](Eigen::Index b) -> Matrix {
    if (b == 0) {
      Matrix d0x = Matrix::Zero(mx, m);
      d0x.rightCols(mx) = Matrix::Identity(mx, mx);
      return d0x;
    }
    return spec.ma_coeffs[b - 1].bottomRows(mx);
  };
  out.phi0 = Matrix::Zero(s, mx);
  out.phi_minus_inf = Matrix::Zero(s, mx);
  for (std::int64_t j = -q; j <= q - 1; ++j) {
    Matrix g = Matrix::Zero(s, mx);
    for (Eigen::Index b = 0; b <= q; ++b) {
      const std::int64_t idx = j + b;
      if (idx < 0 || idx >= q) continue;
      g += out.e_coeffs[static_cast<std::size_t>(idx)] * spec.sigma * x_block(b).transpose();
    }
    const double weight = static_cast<double>(j) + 0.5;
    out.phi_minus_inf += weight * g;
    if (j >= 0) out.phi0 += weight * g;
  }
  return out;
}

int multicoint_rank(const Matrix& omega, Eigen::Index m0, double tol) {
  const Eigen::Index m = omega.rows();
  const Eigen::Index mx = m - m0;
  if (m0 < 1 || mx < 1) throw std::invalid_argument("multicoint_rank: bad partition");
  const Matrix omegaxx = omega.bottomRightCorner(mx, mx);
  if (linalg::numerical_rank(omegaxx, linalg::kConditionCutoff) != static_cast<int>(mx)) {
    throw SingularDesignError("multicoint_rank: omega_xx must be positive definite");
  }
  const int from_omega = static_cast<int>(m) - linalg::numerical_rank(omega, tol);
  const auto cond = conditional_lrcov(omega, m0);
  const int from_cond = static_cast<int>(m0) - linalg::numerical_rank(cond.omega_cond, tol);
  if (from_omega != from_cond) {
    throw std::runtime_error("multicoint_rank: rank identity failed (" +
                             std::to_string(from_omega) + " vs " + std::to_string(from_cond) +
                             "); matrix may be ill conditioned");
  }
  return from_omega;
}

}  // namespace fmcoint
