#pragma once

#include "avopt/model.hpp"
#include "avopt/scenario.hpp"

#include <array>
#include <vector>

namespace avopt {

enum class SolveStatus { Optimal, Infeasible, NodeLimit };

const char* to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  // One value per variable ordinal; binaries are snapped to exact 0/1.
  // Populated for Optimal, and for NodeLimit when an incumbent was found.
  std::vector<double> values;
  double objective = 0.0;  // in the model's stated sense
  long node_count = 0;
};

enum class BranchRule { MostFractional, LowestIndex };
enum class SearchOrder { DepthFirst, BestBound };

struct SolverParams {
  BranchRule branching = BranchRule::MostFractional;
  SearchOrder search = SearchOrder::DepthFirst;
  double integrality_tol = 1e-6;
  long node_limit = 1000000;
  // 1 = serial reference path (bit-identical reruns). More threads evaluate
  // node relaxations in parallel batches; the optimum is unchanged.
  int threads = 1;
};

// Exact branch and bound over the LP relaxation. Branches on a fractional
// binary (x = 1 explored first), prunes by bound and infeasibility.
Solution solve(const MilpModel& model, const SolverParams& params = {});

// --- fixed-route timing ----------------------------------------------------

// One stop of a vehicle: the target and the task(s) performed there. A
// classify+attack pair is the strike self-arc stop; any attack ends the
// route. Vehicles without an attack stop proceed to the sink.
struct RouteVisit {
  int target = 0;
  bool classify = false;
  bool attack = false;
  bool verify = false;
};

struct VehicleRoute {
  std::vector<RouteVisit> visits;  // in flight order
};

struct TimingResult {
  bool feasible = false;
  std::vector<double> departures;                 // per vehicle, >= 0
  std::vector<std::array<double, 3>> task_times;  // per target: classify, attack, verify
  double makespan = 0.0;                          // latest verification
};

// Earliest-feasible task times for fixed routes. Event times chain rigidly
// from each vehicle's departure (no mid-route loitering); only departures
// may be delayed to honor the epsilon-separated task order per target.
// Infeasible when the separation constraints admit no departure vector.
// Routes must cover every (target, task) pair exactly once.
TimingResult timing_propagation(const Scenario& s, const std::vector<VehicleRoute>& routes);

// Assignment vector + propagated times for fixed routes; throws when the
// routes admit no feasible timing.
Solution solution_from_routes(const Scenario& s, ObjectiveKind objective,
                              const std::vector<VehicleRoute>& routes);

// Exhaustive reference solver for desk-scale instances (n <= 2, w <= 4):
// enumerates every task-to-vehicle duty map and every stop order, times each
// candidate by propagation, and keeps the best objective. Independent of the
// LP machinery. threads > 1 splits the enumeration; results are identical.
Solution oracle_solve(const Scenario& s, ObjectiveKind objective, int threads = 1);

}  // namespace avopt
