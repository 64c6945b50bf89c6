#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace fmcoint {

enum class KernelFamily { Parzen, TukeyHanning, Bartlett, QuadraticSpectral };

// Lag-window kernel. Parzen and Tukey-Hanning are twice continuously
// differentiable with w(0)=1, w'(0)=0, w''(0)!=0 and compact support;
// Bartlett (kinked at 0) and quadratic spectral (unbounded support, O(x^-2)
// tails) are provided but flagged, since the singular-system theory here is
// proved only for the former class.
class KernelSpec {
 public:
  explicit KernelSpec(KernelFamily family) : family_(family) {}

  KernelFamily family() const { return family_; }
  const char* name() const;
  static KernelSpec parse(std::string_view name);  // parzen|th|bartlett|qs

  double weight(double x) const;  // w(x), even, |w| <= 1, w(0) = 1
  bool satisfies_assumption_k() const;
  bool compact_support() const;   // true -> w(x) = 0 for |x| >= 1

  // w''(0): Parzen -12, Tukey-Hanning -pi^2/2, QS -36 pi^2/125.
  // Throws std::domain_error for Bartlett (no finite curvature at 0).
  double curvature_at_zero() const;

  // Guarantees positive semidefinite long-run estimates.
  bool positive_semidefinite() const;

 private:
  KernelFamily family_;
};

double kernel_weight(const KernelSpec& spec, double x);
double curvature_at_zero(const KernelSpec& spec);

// Bandwidth rule: either K = c * T^k with c > 0, 0 < k < 1 (optionally
// floored to an integer, the convention used by the simulation tables), or
// a fixed constant K.
class BandwidthRule {
 public:
  static BandwidthRule power(double c, double k, bool floor_to_integer = false);
  static BandwidthRule constant(double value);

  // Accepts "c*T^k", "T^k" or a bare number (treated as a constant).
  static BandwidthRule parse(std::string_view text, bool floor_to_integer = false);

  double evaluate(Eigen::Index t_len) const;
  bool is_constant() const { return constant_; }
  std::string describe() const;

 private:
  BandwidthRule() = default;
  bool constant_ = false;
  double value_ = 0.0;  // constant K
  double c_ = 1.0;
  double k_ = 0.25;
  bool floor_ = false;
};

double bandwidth(const BandwidthRule& rule, Eigen::Index t_len);

}  // namespace fmcoint
