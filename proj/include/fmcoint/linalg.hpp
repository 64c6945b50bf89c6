#pragma once

#include <Eigen/Dense>

namespace fmcoint {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

// Relative condition cutoff shared by all symmetric solves; below it we
// raise SingularDesignError instead of regularizing.
inline constexpr double kConditionCutoff = 1e-12;

// Rank tolerances: eigenvalues above rel_tol * lambda_max count, with an
// absolute floor so an (almost) zero matrix has rank 0.
inline constexpr double kRankRelTol = 1e-8;
inline constexpr double kRankAbsFloor = 1e-12;

struct SymEigen {
  Vector eigenvalues;  // descending
  Matrix eigenvectors; // columns aligned with eigenvalues
};

// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
SymEigen sym_eigen(const Matrix& s);

// Count of eigenvalues above max(rel_tol * lambda_max, abs_floor); 0 when
// lambda_max itself is at or below the floor.
int numerical_rank(const Matrix& s, double rel_tol = kRankRelTol,
                   double abs_floor = kRankAbsFloor);

// Solve S * X = B for symmetric positive definite S. Throws
// SingularDesignError(context) if the smallest eigenvalue falls below
// kConditionCutoff times the largest.
Matrix spd_solve(const Matrix& s, const Matrix& b, const char* context);

Matrix spd_inverse(const Matrix& s, const char* context);

// Largest absolute asymmetry |S - S'|, for symmetry validation.
double asymmetry(const Matrix& s);

}  // namespace linalg
}  // namespace fmcoint
