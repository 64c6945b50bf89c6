#include "fmcoint/linalg.hpp"

#include <cmath>
#include <string>

#include "fmcoint/errors.hpp"

namespace fmcoint::linalg {

SymEigen sym_eigen(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  const Eigen::Index n = s.rows();
  SymEigen out;
  out.eigenvalues = Vector(n);
  out.eigenvectors = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {  // Eigen sorts ascending; flip
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

int numerical_rank(const Matrix& s, double rel_tol, double abs_floor) {
  const auto eig = sym_eigen(s);
  const double lmax = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  if (!(lmax > abs_floor)) return 0;
  const double cut = std::max(rel_tol * lmax, abs_floor);
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cut) ++rank;
  }
  return rank;
}

Matrix spd_solve(const Matrix& s, const Matrix& b, const char* context) {
  const auto eig = sym_eigen(s);
  const double lmax = eig.eigenvalues(0);
  const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (!(lmax > 0.0) || lmin <= kConditionCutoff * lmax) {
    throw SingularDesignError(std::string(context) +
                              ": matrix is numerically singular (relative condition below 1e-12)");
  }
  return eig.eigenvectors * eig.eigenvalues.cwiseInverse().asDiagonal() *
         (eig.eigenvectors.transpose() * b);
}

Matrix spd_inverse(const Matrix& s, const char* context) {
  return spd_solve(s, Matrix::Identity(s.rows(), s.cols()), context);
}

double asymmetry(const Matrix& s) {
  return (s - s.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace fmcoint::linalg
