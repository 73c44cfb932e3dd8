#pragma once

#include "avopt/fuzzy.hpp"
#include "avopt/json_io.hpp"
#include "avopt/model.hpp"
#include "avopt/scenario.hpp"
#include "avopt/solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace avopt::testing {

inline std::string data_path(const std::string& name) {
#ifdef AVOPT_DATA_DIR
  return std::string(AVOPT_DATA_DIR) + "/" + name;
#else
  return "data/" + name;
#endif
}

// The three hand-checked single-target instances, built in code so the unit
// tests do not depend on the data files (the CLI tests cover those).
//
// Common frame: one target, three vehicles, epsilon 0.1, endurance 100,
// task weights 0.1. Legs: strike self-arc at the target, plus one leg from
// each source to the target.
inline Scenario golden_scenario(double strike_leg, double src1, double src2, double src3,
                                double epsilon = 0.1, double endurance = 100.0) {
  Scenario s(1, 3, epsilon, {}, std::vector<double>(3, endurance),
             {{{0.1, 0.1, 0.1}}});
  for (int v = 1; v <= 3; ++v) {
    for (int k = 1; k <= kNumTasks; ++k)
      s.set_flight_time(v, k, 1 + v, 1, TriangularFuzzyNumber::crisp(v == 1   ? src1
                                                                     : v == 2 ? src2
                                                                              : src3));
    s.set_flight_time(v, kAttack, 1, 1, TriangularFuzzyNumber::crisp(strike_leg));
  }
  s.finalize();
  return s;
}

inline Scenario golden_baseline() { return golden_scenario(0.11, 3.7, 4.24, 5.38); }
inline Scenario golden_slow_attack() { return golden_scenario(1.1, 3.7, 4.24, 5.38); }
inline Scenario golden_near_third() { return golden_scenario(1.1, 3.7, 4.24, 4.5); }

// Routes of the baseline optimum: v1 strikes (classify + self-arc attack),
// v2 verifies, v3 goes straight to the sink.
inline std::vector<VehicleRoute> baseline_routes() {
  std::vector<VehicleRoute> r(3);
  r[0].visits = {{1, true, true, false}};
  r[1].visits = {{1, false, false, true}};
  return r;
}

// Routes of the near-third optimum: one vehicle per task.
inline std::vector<VehicleRoute> split_routes() {
  std::vector<VehicleRoute> r(3);
  r[0].visits = {{1, true, false, false}};
  r[1].visits = {{1, false, true, false}};
  r[2].visits = {{1, false, false, true}};
  return r;
}

// Two targets, three vehicles: v1 and v2 strike one target each, v3 roves
// and verifies both. Exercises target-to-target legs (absent from n = 1).
inline std::vector<VehicleRoute> roving_verifier_routes() {
  std::vector<VehicleRoute> r(3);
  r[0].visits = {{1, true, true, false}};
  r[1].visits = {{2, true, true, false}};
  r[2].visits = {{1, false, false, true}, {2, false, false, true}};
  return r;
}

// Simpson's rule on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 4096) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// Centroid of a triangular membership function by numerical integration,
// independent of the closed form used by the library.
inline double numeric_centroid(const TriangularFuzzyNumber& t) {
  const double a = t.support_min(), b = t.support_max();
  if (a == b) return t.modal;
  const auto mu = [&](double z) { return membership(t, z); };
  const double mass = integrate(mu, a, b);
  const double moment = integrate([&](double z) { return z * mu(z); }, a, b);
  return moment / mass;
}

}  // namespace avopt::testing
