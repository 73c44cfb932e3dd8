#pragma once

#include "avopt/fuzzy.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace avopt {

inline constexpr int kNumTasks = 3;
enum Task : int { kClassify = 1, kAttack = 2, kVerify = 3 };

// Mission instance for n targets and w vehicles (w > n).
//
// Node numbering is 1-based: nodes 1..n are targets, node n+v is the source
// of vehicle v, node n+w+1 is the shared sink. An assignment arc (v,k,i,j)
// means vehicle v flies from node i to target j and performs task k there.
// Admissible arcs: j in 1..n, i a target or vehicle v's own source, and
// i == j only for the attack task (the strike self-arc after classifying).
//
// Instances are immutable once finalize() has run; all accessors are
// read-only and safe to share across threads.
class Scenario {
 public:
  Scenario(int n, int w, double epsilon, DefuzzSpec defuzz,
           std::vector<double> endurance,
           std::vector<std::array<double, 3>> task_weights);

  int targets() const { return n_; }
  int vehicles() const { return w_; }
  int nodes() const { return n_ + w_ + 1; }
  int sink_index() const { return n_ + w_ + 1; }
  int source_of(int v) const;

  double epsilon() const { return epsilon_; }
  const DefuzzSpec& defuzz() const { return defuzz_; }
  double endurance_of(int v) const;
  double max_endurance() const;
  // Big-M constant for the timing constraints: w * max endurance.
  double big_m() const;
  double task_weight(int j, int k) const;

  bool arc_admissible(int v, int k, int i, int j) const;

  // Table construction. Entries may only be set before finalize(); setting
  // an inadmissible arc or setting the same arc twice throws.
  void set_flight_time(int v, int k, int i, int j, const TriangularFuzzyNumber& t);
  bool has_flight_time(int v, int k, int i, int j) const;

  // Throws unless every admissible arc has exactly one entry. Computes the
  // crisp cache under the configured defuzz policy.
  void finalize();
  bool finalized() const { return finalized_; }

  const TriangularFuzzyNumber& fuzzy_flight_time(int v, int k, int i, int j) const;
  // Defuzzified flight time; requires a finalized scenario.
  double flight_time(int v, int k, int i, int j) const;

 private:
  int table_index(int v, int k, int i, int j) const;  // -1 when inadmissible
  int checked_index(int v, int k, int i, int j, const char* op) const;

  int n_ = 0;
  int w_ = 0;
  double epsilon_ = 0.0;
  DefuzzSpec defuzz_;
  std::vector<double> endurance_;
  std::vector<std::array<double, 3>> task_weights_;
  std::vector<TriangularFuzzyNumber> table_;
  std::vector<char> present_;
  std::vector<double> crisp_;
  bool finalized_ = false;
};

// Deterministic instance generator: crisp flight times uniform in
// [0.1, 10], endurance 100, epsilon 0.1, uniform task weights 0.1.
Scenario make_random_scenario(std::uint64_t seed, int n, int w);

}  // namespace avopt
