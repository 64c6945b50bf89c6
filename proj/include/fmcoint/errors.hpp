#pragma once

#include <stdexcept>
#include <string>

namespace fmcoint {

// X'X (or another design-side Gram matrix) fell below the relative
// condition cutoff. We refuse to regularize: silent ridging would bias
// rate-of-convergence experiments.
class SingularDesignError : public std::runtime_error {
 public:
  explicit SingularDesignError(const std::string& what) : std::runtime_error(what) {}
};

// A variance needed for studentization is numerically nonpositive or the
// Wald weighting matrix is rank deficient. Carries the effective rank
// diagnosis so callers can report it.
class DegenerateVarianceError : public std::runtime_error {
 public:
  DegenerateVarianceError(const std::string& what, int effective_rank)
      : std::runtime_error(what), effective_rank_(effective_rank) {}
  int effective_rank() const { return effective_rank_; }

 private:
  int effective_rank_;
};

}  // namespace fmcoint
