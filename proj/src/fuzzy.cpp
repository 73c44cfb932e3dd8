#include "avopt/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avopt {

void TriangularFuzzyNumber::validate(bool require_nonnegative) const {
  if (!std::isfinite(modal) || !std::isfinite(lower_width) || !std::isfinite(upper_width))
    throw std::invalid_argument("fuzzy number: components must be finite");
  if (lower_width < 0.0 || upper_width < 0.0)
    throw std::invalid_argument("fuzzy number: half-widths must be non-negative");
  if (require_nonnegative && support_min() < 0.0)
    throw std::invalid_argument("fuzzy number: support of a time quantity extends below zero");
}

void DefuzzSpec::validate() const {
  if (mode == DefuzzMode::AlphaCutPessimistic || mode == DefuzzMode::AlphaCutOptimistic) {
    if (!(alpha > 0.0) || alpha > 1.0)
      throw std::invalid_argument("defuzz: alpha must lie in (0, 1]");
  }
}

const char* to_string(DefuzzMode mode) {
  switch (mode) {
    case DefuzzMode::Modal: return "modal";
    case DefuzzMode::Centroid: return "centroid";
    case DefuzzMode::AlphaCutPessimistic: return "alpha-pess";
    case DefuzzMode::AlphaCutOptimistic: return "alpha-opt";
  }
  return "?";
}

double membership(const TriangularFuzzyNumber& t, double z) {
  const double d = z - t.modal;
  if (d == 0.0) return 1.0;
  if (d < 0.0) {
    if (t.lower_width == 0.0 || d < -t.lower_width) return 0.0;
    return 1.0 + d / t.lower_width;
  }
  if (t.upper_width == 0.0 || d > t.upper_width) return 0.0;
  return 1.0 - d / t.upper_width;
}

double defuzzify(const TriangularFuzzyNumber& t, const DefuzzSpec& spec) {
  spec.validate();
  switch (spec.mode) {
    case DefuzzMode::Modal:
      return t.modal;
    case DefuzzMode::Centroid:
      // Centroid of the triangle; collapses to the modal value when crisp.
      return (t.support_min() + t.modal + t.support_max()) / 3.0;
    case DefuzzMode::AlphaCutPessimistic:
      return t.modal - (1.0 - spec.alpha) * t.lower_width;
    case DefuzzMode::AlphaCutOptimistic:
      return t.modal + (1.0 - spec.alpha) * t.upper_width;
  }
  throw std::logic_error("defuzzify: unknown mode");
}

double membership_ramp(double a, double peak, double x) {
  if (peak == a) return x == a ? 1.0 : 0.0;
  if (x < std::min(a, peak) || x > std::max(a, peak)) return 0.0;
  return (x - a) / (peak - a);
}

}  // namespace avopt
