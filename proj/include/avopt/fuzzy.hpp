#pragma once

namespace avopt {

// Triangular fuzzy quantity: modal value with lower/upper half-widths.
// A crisp value v is represented as (v, 0, 0).
struct TriangularFuzzyNumber {
  double modal = 0.0;
  double lower_width = 0.0;
  double upper_width = 0.0;

  static TriangularFuzzyNumber crisp(double v) { return {v, 0.0, 0.0}; }

  bool is_crisp() const { return lower_width == 0.0 && upper_width == 0.0; }
  double support_min() const { return modal - lower_width; }
  double support_max() const { return modal + upper_width; }

  // Throws std::invalid_argument on non-finite values or negative widths;
  // with require_nonnegative set, also when the support extends below zero.
  void validate(bool require_nonnegative = false) const;
};

enum class DefuzzMode { Modal, Centroid, AlphaCutPessimistic, AlphaCutOptimistic };

// Defuzzification policy. alpha is meaningful for the alpha-cut modes only
// and must lie in (0, 1].
struct DefuzzSpec {
  DefuzzMode mode = DefuzzMode::Modal;
  double alpha = 1.0;

  void validate() const;
};

const char* to_string(DefuzzMode mode);

// Degree of membership of z. Total function: 1 at the modal value, linear
// ramps to 0 at the support edges, 0 outside. A zero half-width turns the
// corresponding side into a step.
double membership(const TriangularFuzzyNumber& t, double z);

// Crisp representative of t under the given policy. Result always lies
// within [support_min, support_max].
double defuzzify(const TriangularFuzzyNumber& t, const DefuzzSpec& spec);

// One-sided ramp: 0 at a, rising linearly to 1 at peak, 0 outside the
// segment between them.
double membership_ramp(double a, double peak, double x);

}  // namespace avopt
