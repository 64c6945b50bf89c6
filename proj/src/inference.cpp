#include "fmcoint/inference.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "fmcoint/errors.hpp"

namespace fmcoint {

TensorRestriction full_restriction(const Matrix& a0) {
  return TensorRestriction{Matrix::Identity(a0.rows(), a0.rows()),
                           Matrix::Identity(a0.cols(), a0.cols()), a0};
}

Vector vec_row(const Matrix& a) {
  Vector v(a.size());
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) v(pos++) = a(i, k);
  }
  return v;
}

Matrix unvec_row(const Vector& a, Eigen::Index m0, Eigen::Index mx) {
  if (a.size() != m0 * mx) throw std::invalid_argument("unvec_row: size mismatch");
  Matrix out(m0, mx);
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < m0; ++i) {
    for (Eigen::Index k = 0; k < mx; ++k) out(i, k) = a(pos++);
  }
  return out;
}

double chi_squared_pvalue(double statistic, int df) {
  if (df < 1) return 1.0;
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), statistic));
}

double normal_two_sided_pvalue(double t) { return std::erfc(std::fabs(t) / std::sqrt(2.0)); }

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct EvaluatedRestriction {
  Vector value;     // phi(a+)
  Matrix jacobian;  // q x (m0*mx)
  bool used_fd = false;
};

// With row vectorization, vec(R1 A R2) = (R1 kron R2') vec(A).
Matrix tensor_q(const TensorRestriction& r) { return kron(r.r1, r.r2.transpose()); }

EvaluatedRestriction evaluate(const RestrictionSpec& restriction, const Vector& a_hat) {
  EvaluatedRestriction ev;
  if (const auto* lin = std::get_if<LinearRestriction>(&restriction)) {
    if (lin->q.rows() != lin->r0.size()) {
      throw std::invalid_argument("wald: Q rows must match r0 length");
    }
    if (lin->q.cols() != a_hat.size()) {
      throw std::invalid_argument("wald: Q columns must match m0*mx");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(lin->q.transpose());
    if (qr.rank() < lin->q.rows()) {
      throw std::invalid_argument("wald: Q must have full row rank");
    }
    ev.value = lin->q * a_hat - lin->r0;
    ev.jacobian = lin->q;
  } else if (const auto* ten = std::get_if<TensorRestriction>(&restriction)) {
    ev.jacobian = tensor_q(*ten);
    ev.value = ev.jacobian * a_hat - vec_row(ten->r3);
  } else {
    const auto& gen = std::get<GeneralRestriction>(restriction);
    if (!gen.phi) throw std::invalid_argument("wald: general restriction needs phi");
    ev.value = gen.phi(a_hat);
    if (gen.jacobian) {
      ev.jacobian = gen.jacobian(a_hat);
    } else {
      // central differences, h = 1e-6 * max(1, |a_i|)
      const Eigen::Index n = a_hat.size();
      const Eigen::Index q = ev.value.size();
      ev.jacobian = Matrix(q, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double h = 1e-6 * std::max(1.0, std::fabs(a_hat(i)));
        Vector up = a_hat, dn = a_hat;
        up(i) += h;
        dn(i) -= h;
        ev.jacobian.col(i) = (gen.phi(up) - gen.phi(dn)) / (2.0 * h);
      }
      ev.used_fd = true;
    }
    if (ev.jacobian.rows() != ev.value.size() || ev.jacobian.cols() != a_hat.size()) {
      throw std::invalid_argument("wald: jacobian dimensions inconsistent with phi");
    }
  }
  return ev;
}

}  // namespace

RankDiagnosis rank_condition_check(const RestrictionSpec& restriction, const Matrix& omega_cond,
                                   const Matrix& xtx, double tol) {
  RankDiagnosis diag;
  if (const auto* ten = std::get_if<TensorRestriction>(&restriction)) {
    const auto q1 = static_cast<int>(ten->r1.rows());
    const auto q2 = static_cast<int>(ten->r2.cols());
    diag.q_nominal = q1 * q2;
    // Kronecker factorization: rank(R1 omega_cond R1') * q2
    const Matrix r1or1 = ten->r1 * omega_cond * ten->r1.transpose();
    diag.q_effective = linalg::numerical_rank(r1or1, tol) * q2;
  } else if (const auto* lin = std::get_if<LinearRestriction>(&restriction)) {
    // constant Jacobian: rank of Q (omega_cond kron (X'X)^{-1}) Q'
    const Matrix mid = lin->q * kron(omega_cond, linalg::spd_inverse(xtx, "rank_check: X'X")) *
                       lin->q.transpose();
    diag.q_nominal = static_cast<int>(lin->q.rows());
    diag.q_effective = linalg::numerical_rank(mid, tol);
  } else {
    // a general phi has no estimate-free Jacobian; wald() diagnoses it at
    // the fitted value
    throw std::invalid_argument(
        "rank_condition_check: general restrictions are diagnosed inside wald()");
  }
  diag.satisfied = diag.q_effective == diag.q_nominal;
  return diag;
}

WaldResult wald(const WaldInputs& in, const RestrictionSpec& restriction,
                const WaldOptions& options) {
  const Vector a_hat = vec_row(in.a_plus);
  auto ev = evaluate(restriction, a_hat);
  const auto q = static_cast<int>(ev.value.size());

  const Matrix cov = kron(in.omega_cond, linalg::spd_inverse(in.xtx, "wald: X'X"));
  const Matrix mid = ev.jacobian * cov * ev.jacobian.transpose();

  WaldResult out;
  out.q_nominal = q;
  if (ev.used_fd) out.notes = "jacobian from central finite differences; ";

  // rank diagnosis (tensor restrictions get the Kronecker factorization)
  if (std::holds_alternative<TensorRestriction>(restriction)) {
    const auto diag = rank_condition_check(restriction, in.omega_cond, in.xtx, options.rank_tol);
    out.q_effective = diag.q_effective;
  } else {
    out.q_effective = linalg::numerical_rank(mid, options.rank_tol);
  }
  out.degenerate = out.q_effective < out.q_nominal;

  const auto eig = linalg::sym_eigen(0.5 * (mid + mid.transpose()));
  const double lmax = eig.eigenvalues(0);
  const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
  const bool invertible = lmax > 0.0 && lmin > linalg::kConditionCutoff * lmax;

  if (!invertible && !options.allow_degenerate) {
    throw DegenerateVarianceError(
        "wald: weighting matrix is numerically singular (effective rank " +
            std::to_string(out.q_effective) + " of " + std::to_string(q) +
            "); pass allow_degenerate to pseudo-invert",
        out.q_effective);
  }

  Vector inv_eigs = Vector::Zero(q);
  const double cut = std::max(linalg::kConditionCutoff * std::max(lmax, 0.0),
                              linalg::kRankAbsFloor);
  for (int i = 0; i < q; ++i) {
    if (eig.eigenvalues(i) > cut) inv_eigs(i) = 1.0 / eig.eigenvalues(i);
  }
  if (!invertible) {
    out.notes += "weighting matrix pseudo-inverted at user request; ";
  }
  const Vector rotated = eig.eigenvectors.transpose() * ev.value;
  out.statistic = rotated.dot(inv_eigs.asDiagonal() * rotated);

  out.p_nominal = chi_squared_pvalue(out.statistic, out.q_nominal);
  out.p_effective = chi_squared_pvalue(out.statistic, out.q_effective);
  if (out.degenerate) {
    out.notes += "rank condition fails: restriction touches singular directions "
                 "(nominal-df test is conservative)";
  }
  return out;
}

WaldResult wald(const FmolsFit& fit, const RestrictionSpec& restriction,
                const WaldOptions& options) {
  return wald(WaldInputs::from_fit(fit), restriction, options);
}

double t_statistic(const WaldInputs& in, double a0) {
  if (in.a_plus.rows() != 1 || in.a_plus.cols() != 1) {
    throw std::invalid_argument("t_statistic: requires a scalar system (m0 = mx = 1)");
  }
  const double omega_cond = in.omega_cond(0, 0);
  if (!(omega_cond > 0.0)) {
    throw DegenerateVarianceError(
        "t_statistic: conditional long-run variance is numerically nonpositive (" +
            std::to_string(omega_cond) + "), expected under exact singularity",
        0);
  }
  const double sum_x2 = in.xtx(0, 0);
  return (in.a_plus(0, 0) - a0) / std::sqrt(omega_cond / sum_x2);
}

double t_statistic(const FmolsFit& fit, double a0) {
  return t_statistic(WaldInputs::from_fit(fit), a0);
}

double delta_rate(std::int64_t t_len, double k) {
  if (t_len < 1) throw std::invalid_argument("delta_rate: T must be >= 1");
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("delta_rate: k must lie in (0,1)");
  const auto t = static_cast<double>(t_len);
  if (k < 0.25) return std::pow(t, 1.0 + 2.0 * k);
  if (k <= 0.5) return std::pow(t, 1.5);
  return std::pow(t, 2.0 - k);
}

}  // namespace fmcoint
