#include "fmcoint/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fmcoint {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* KernelSpec::name() const {
  switch (family_) {
    case KernelFamily::Parzen: return "parzen";
    case KernelFamily::TukeyHanning: return "tukey-hanning";
    case KernelFamily::Bartlett: return "bartlett";
    case KernelFamily::QuadraticSpectral: return "quadratic-spectral";
  }
  return "?";
}

KernelSpec KernelSpec::parse(std::string_view name) {
  if (name == "parzen") return KernelSpec(KernelFamily::Parzen);
  if (name == "th" || name == "tukey-hanning") return KernelSpec(KernelFamily::TukeyHanning);
  if (name == "bartlett") return KernelSpec(KernelFamily::Bartlett);
  if (name == "qs" || name == "quadratic-spectral")
    return KernelSpec(KernelFamily::QuadraticSpectral);
  throw std::invalid_argument("unknown kernel: " + std::string(name));
}

double KernelSpec::weight(double x) const {
  const double ax = std::fabs(x);
  switch (family_) {
    case KernelFamily::Parzen:
      if (ax <= 0.5) return 1.0 - 6.0 * ax * ax + 6.0 * ax * ax * ax;
      if (ax <= 1.0) {
        const double d = 1.0 - ax;
        return 2.0 * d * d * d;
      }
      return 0.0;
    case KernelFamily::TukeyHanning:
      return ax <= 1.0 ? 0.5 * (1.0 + std::cos(kPi * ax)) : 0.0;
    case KernelFamily::Bartlett:
      return ax <= 1.0 ? 1.0 - ax : 0.0;
    case KernelFamily::QuadraticSpectral: {
      if (ax == 0.0) return 1.0;
      const double xi = 6.0 * kPi * ax / 5.0;
      return 3.0 / (xi * xi) * (std::sin(xi) / xi - std::cos(xi));
    }
  }
  return 0.0;
}

bool KernelSpec::satisfies_assumption_k() const {
  return family_ == KernelFamily::Parzen || family_ == KernelFamily::TukeyHanning;
}

bool KernelSpec::compact_support() const {
  return family_ != KernelFamily::QuadraticSpectral;
}

double KernelSpec::curvature_at_zero() const {
  switch (family_) {
    case KernelFamily::Parzen:
      return -12.0;  // d^2/dx^2 (1 - 6x^2 + 6x^3) at 0
    case KernelFamily::TukeyHanning:
      return -kPi * kPi / 2.0;
    case KernelFamily::QuadraticSpectral:
      // w = 1 - xi^2/10 + O(xi^4) with xi = 6 pi x / 5
      return -36.0 * kPi * kPi / 125.0;
    case KernelFamily::Bartlett:
      throw std::domain_error("bartlett kernel has no finite second derivative at 0");
  }
  return 0.0;
}

bool KernelSpec::positive_semidefinite() const {
  return family_ == KernelFamily::Parzen || family_ == KernelFamily::Bartlett ||
         family_ == KernelFamily::QuadraticSpectral;
}

double kernel_weight(const KernelSpec& spec, double x) { return spec.weight(x); }
double curvature_at_zero(const KernelSpec& spec) { return spec.curvature_at_zero(); }

BandwidthRule BandwidthRule::power(double c, double k, bool floor_to_integer) {
  if (!(c > 0.0)) throw std::invalid_argument("bandwidth: c must be positive");
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("bandwidth: k must lie in (0,1)");
  BandwidthRule r;
  r.c_ = c;
  r.k_ = k;
  r.floor_ = floor_to_integer;
  return r;
}

BandwidthRule BandwidthRule::constant(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("bandwidth: constant K must be positive");
  BandwidthRule r;
  r.constant_ = true;
  r.value_ = value;
  return r;
}

BandwidthRule BandwidthRule::parse(std::string_view text, bool floor_to_integer) {
  const std::string s(text);
  const auto caret = s.find("T^");
  if (caret == std::string::npos) {
    return constant(std::stod(s));
  }
  double c = 1.0;
  const auto star = s.find('*');
  if (star != std::string::npos && star < caret) {
    c = std::stod(s.substr(0, star));
  } else if (caret != 0) {
    throw std::invalid_argument("bandwidth rule must look like \"c*T^k\" or \"T^k\": " + s);
  }
  const double k = std::stod(s.substr(caret + 2));
  return power(c, k, floor_to_integer);
}

double BandwidthRule::evaluate(Eigen::Index t_len) const {
  if (t_len < 2) throw std::invalid_argument("bandwidth: T must be >= 2");
  if (constant_) return value_;
  const double k_eval = c_ * std::pow(static_cast<double>(t_len), k_);
  return floor_ ? std::max(1.0, std::floor(k_eval)) : k_eval;
}

std::string BandwidthRule::describe() const {
  if (constant_) return "K=" + std::to_string(value_);
  std::string s = std::to_string(c_) + "*T^" + std::to_string(k_);
  if (floor_) s = "floor(" + s + ")";
  return s;
}

double bandwidth(const BandwidthRule& rule, Eigen::Index t_len) { return rule.evaluate(t_len); }

}  // namespace fmcoint
