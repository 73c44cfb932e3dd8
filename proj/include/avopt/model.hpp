#pragma once

#include "avopt/scenario.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace avopt {

enum class VarKind { Assign, SinkArc, Departure, TaskTime, Makespan };

// Structured identity of a decision variable. Unused index fields are 0.
struct VariableId {
  VarKind kind = VarKind::Assign;
  int v = 0, k = 0, i = 0, j = 0;

  bool operator==(const VariableId&) const = default;
};

// Deterministic ordinal map for an (n, w) instance. Ordering: assignment
// arcs by (v, k, i, j) ascending, sink arcs by (v, i), departures by v,
// task times by (j, k), makespan last. Shared by the model builder, the
// schedule decoder and the plan reader so that plans round-trip.
class VariableIndex {
 public:
  VariableIndex(int n, int w);

  int targets() const { return n_; }
  int vehicles() const { return w_; }
  int count() const { return static_cast<int>(ids_.size()); }
  int binary_count() const { return binary_count_; }
  int continuous_count() const { return count() - binary_count_; }

  // -1 when the requested variable does not exist.
  int assign(int v, int k, int i, int j) const;
  int sink_arc(int v, int i) const;
  int departure(int v) const;
  int task_time(int j, int k) const;
  int makespan() const { return makespan_; }

  const VariableId& id(int ordinal) const { return ids_.at(ordinal); }
  bool is_binary(int ordinal) const { return ordinal < binary_count_; }
  std::string name(int ordinal) const;

 private:
  int n_, w_;
  int binary_count_ = 0;
  int makespan_ = -1;
  std::vector<VariableId> ids_;
  std::vector<int> assign_ord_;  // dense over (v,k,i,j), -1 when absent
  std::vector<int> sink_ord_;    // dense over (v,i), -1 when absent
  std::vector<int> dep_ord_;
  std::vector<int> tt_ord_;
};

enum class ConstraintFamily {
  MC,   // mission completion: each (j,k) done exactly once
  SA,   // single assignee per (j,k)
  VO,   // visit-once per (v,j) and sink-once per v
  LO,   // leave-once per (v,j)
  PM,   // perishable munition: at most one attack per v
  VA,   // verifier must not be the attacker of the same target
  CT,   // flow continuity (enter/exit coupling)
  SD,   // source departure: each v leaves its source exactly once
  CA,   // strike self-arc only after own classification
  T13,  // timing chain, tasks 1/3 following a target-to-target leg
  T2,   // timing chain, attack following classification
  TS,   // timing of legs leaving the source
  TO,   // per-target task ordering with epsilon gaps
  TF,   // makespan dominates every verification time
};

const char* to_string(ConstraintFamily family);

enum class RowSense { LessEq, Equal, GreaterEq };

struct ModelRow {
  ConstraintFamily family;
  std::vector<std::pair<int, double>> coefficients;  // (ordinal, value)
  RowSense sense = RowSense::LessEq;
  double rhs = 0.0;
};

enum class ObjectiveKind { TotalFlightTime, WeightedMakespan, Survivors };
enum class ObjectiveSense { Minimize, Maximize };

const char* to_string(ObjectiveKind kind);
ObjectiveKind objective_from_string(const std::string& name);

struct MilpModel {
  int n = 0, w = 0;
  double big_m = 0.0;
  VariableIndex vars;
  std::vector<ModelRow> rows;
  ObjectiveKind objective_kind = ObjectiveKind::WeightedMakespan;
  ObjectiveSense objective_sense = ObjectiveSense::Minimize;
  std::vector<std::pair<int, double>> objective;  // (ordinal, coefficient)
};

MilpModel build_model(const Scenario& s, ObjectiveKind objective);

struct VariableCensus {
  long binary = 0;
  long continuous = 0;
};

// Closed-form counts for an (n, w) instance; does not build the model.
VariableCensus variable_census(int n, int w);

struct ConstraintCensus {
  std::map<ConstraintFamily, int> by_family;
  int equalities = 0;
  int inequalities = 0;

  int total() const { return equalities + inequalities; }
};

ConstraintCensus constraint_census(const MilpModel& model);

// Deterministic LP-format text: objective, constraint, bounds and binary
// sections; rows named <FAMILY>_<index>.
void export_lp(const MilpModel& model, std::ostream& out);

}  // namespace avopt
