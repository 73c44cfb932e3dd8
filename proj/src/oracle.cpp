#include "avopt/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <stdexcept>

namespace avopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-(target, task) placement extracted from routes: owning vehicle and
// the rigid time offset from that vehicle's departure.
struct Placement {
  int vehicle = 0;
  double offset = 0.0;
  bool set = false;
};

struct Offsets {
  std::vector<Placement> slots;  // (j-1)*3 + (k-1)
  bool valid = false;
};

Offsets route_offsets(const Scenario& s, const std::vector<VehicleRoute>& routes) {
  Offsets out;
  out.slots.assign(static_cast<std::size_t>(s.targets()) * kNumTasks, {});
  if (static_cast<int>(routes.size()) != s.vehicles())
    throw std::invalid_argument("timing: need one route per vehicle");
  for (int v = 1; v <= s.vehicles(); ++v) {
    int prev = s.source_of(v);
    double off = 0.0;
    bool ended = false;
    for (const RouteVisit& visit : routes[v - 1].visits) {
      if (ended) throw std::invalid_argument("timing: visit after an attack stop");
      const int j = visit.target;
      if (j < 1 || j > s.targets()) throw std::invalid_argument("timing: bad target in route");
      if (visit.verify && (visit.classify || visit.attack))
        throw std::invalid_argument("timing: verify cannot share a stop");
      if (!visit.classify && !visit.attack && !visit.verify)
        throw std::invalid_argument("timing: empty stop");
      auto record = [&](int k, double at) {
        Placement& p = out.slots[(j - 1) * kNumTasks + (k - 1)];
        if (p.set) throw std::invalid_argument("timing: duplicate task in routes");
        p = {v, at, true};
      };
      if (visit.classify) {
        off += s.flight_time(v, kClassify, prev, j);
        record(kClassify, off);
        prev = j;
      }
      if (visit.attack) {
        off += s.flight_time(v, kAttack, prev, j);
        record(kAttack, off);
        prev = j;
        ended = true;
      }
      if (visit.verify) {
        off += s.flight_time(v, kVerify, prev, j);
        record(kVerify, off);
        prev = j;
      }
    }
  }
  for (const Placement& p : out.slots)
    if (!p.set) throw std::invalid_argument("timing: routes leave a task unassigned");
  out.valid = true;
  return out;
}

}  // namespace

TimingResult timing_propagation(const Scenario& s, const std::vector<VehicleRoute>& routes) {
  const Offsets offs = route_offsets(s, routes);
  TimingResult res;
  res.departures.assign(s.vehicles(), 0.0);

  // Difference constraints on departures: for consecutive tasks k, k+1 on a
  // target, dep[b] >= dep[a] + off_a + eps - off_b. Within one vehicle the
  // offsets are rigid, so the gap must already hold.
  struct Edge {
    int from, to;
    double weight;
  };
  std::vector<Edge> edges;
  for (int j = 1; j <= s.targets(); ++j)
    for (int k = 1; k < kNumTasks; ++k) {
      const Placement& a = offs.slots[(j - 1) * kNumTasks + (k - 1)];
      const Placement& b = offs.slots[(j - 1) * kNumTasks + k];
      const double need = a.offset + s.epsilon() - b.offset;
      if (a.vehicle == b.vehicle) {
        if (need > 1e-9) return res;  // rigid chain violates the gap
      } else {
        edges.push_back({a.vehicle - 1, b.vehicle - 1, need});
      }
    }

  // Bellman-Ford from the all-zero departure vector (departures >= 0).
  for (int pass = 0; pass < s.vehicles(); ++pass) {
    bool changed = false;
    for (const Edge& e : edges) {
      const double need = res.departures[e.from] + e.weight;
      if (need > res.departures[e.to] + 1e-12) {
        res.departures[e.to] = need;
        changed = true;
      }
    }
    if (!changed) break;
    if (pass == s.vehicles() - 1) return res;  // positive cycle: no timing exists
  }

  res.task_times.assign(s.targets(), {0.0, 0.0, 0.0});
  res.makespan = 0.0;
  for (int j = 1; j <= s.targets(); ++j)
    for (int k = 1; k <= kNumTasks; ++k) {
      const Placement& p = offs.slots[(j - 1) * kNumTasks + (k - 1)];
      const double t = res.departures[p.vehicle - 1] + p.offset;
      res.task_times[j - 1][k - 1] = t;
      if (k == kVerify) res.makespan = std::max(res.makespan, t);
    }
  res.feasible = true;
  return res;
}

namespace {

double objective_of(const Scenario& s, ObjectiveKind objective,
                    const std::vector<VehicleRoute>& routes, const TimingResult& timing) {
  switch (objective) {
    case ObjectiveKind::TotalFlightTime: {
      double total = 0.0;
      for (int v = 1; v <= s.vehicles(); ++v) {
        int prev = s.source_of(v);
        for (const RouteVisit& visit : routes[v - 1].visits) {
          if (visit.classify) {
            total += s.flight_time(v, kClassify, prev, visit.target);
            prev = visit.target;
          }
          if (visit.attack) {
            total += s.flight_time(v, kAttack, prev, visit.target);
            prev = visit.target;
          }
          if (visit.verify) {
            total += s.flight_time(v, kVerify, prev, visit.target);
            prev = visit.target;
          }
        }
      }
      return total;
    }
    case ObjectiveKind::WeightedMakespan: {
      double j_val = timing.makespan;
      for (int j = 1; j <= s.targets(); ++j)
        for (int k = 1; k <= kNumTasks; ++k)
          j_val += s.task_weight(j, k) * timing.task_times[j - 1][k - 1];
      return j_val;
    }
    case ObjectiveKind::Survivors: {
      int attackers = 0;
      for (const VehicleRoute& r : routes)
        for (const RouteVisit& visit : r.visits)
          if (visit.attack) ++attackers;
      return s.vehicles() - attackers;
    }
  }
  throw std::logic_error("objective_of: unknown objective");
}

}  // namespace

Solution solution_from_routes(const Scenario& s, ObjectiveKind objective,
                              const std::vector<VehicleRoute>& routes) {
  const TimingResult timing = timing_propagation(s, routes);
  if (!timing.feasible)
    throw std::invalid_argument("solution_from_routes: routes admit no feasible timing");

  const VariableIndex vars(s.targets(), s.vehicles());
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.values.assign(vars.count(), 0.0);
  for (int v = 1; v <= s.vehicles(); ++v) {
    int prev = s.source_of(v);
    bool destroyed = false;
    for (const RouteVisit& visit : routes[v - 1].visits) {
      if (visit.classify) {
        sol.values[vars.assign(v, kClassify, prev, visit.target)] = 1.0;
        prev = visit.target;
      }
      if (visit.attack) {
        sol.values[vars.assign(v, kAttack, prev, visit.target)] = 1.0;
        prev = visit.target;
        destroyed = true;
      }
      if (visit.verify) {
        sol.values[vars.assign(v, kVerify, prev, visit.target)] = 1.0;
        prev = visit.target;
      }
    }
    if (!destroyed) sol.values[vars.sink_arc(v, prev)] = 1.0;
    sol.values[vars.departure(v)] = timing.departures[v - 1];
  }
  for (int j = 1; j <= s.targets(); ++j)
    for (int k = 1; k <= kNumTasks; ++k)
      sol.values[vars.task_time(j, k)] = timing.task_times[j - 1][k - 1];
  sol.values[vars.makespan()] = timing.makespan;
  sol.objective = objective_of(s, objective, routes, timing);
  return sol;
}

namespace {

// Duty layout per vehicle for one duty map: which targets it classifies,
// verifies and (at most once) attacks. The attack stop is terminal; a
// classify of the attacked target folds into the strike self-arc stop.
struct VehicleDuties {
  std::vector<int> loose;   // classify-only / verify-only stops, target asc
  std::vector<char> kind;   // parallel to loose: 1 classify, 3 verify
  int attack_target = 0;    // 0 = none
  bool attack_paired = false;
};

bool duties_of(const Scenario& s, const std::vector<int>& duty, int v, VehicleDuties& out) {
  out = {};
  const int n = s.targets();
  for (int j = 1; j <= n; ++j) {
    const bool c = duty[(j - 1) * kNumTasks + 0] == v;
    const bool a = duty[(j - 1) * kNumTasks + 1] == v;
    const bool vr = duty[(j - 1) * kNumTasks + 2] == v;
    if (vr && (c || a)) return false;  // verifier is a third party
    if (a) {
      if (out.attack_target != 0) return false;  // one munition per vehicle
      out.attack_target = j;
      out.attack_paired = c;
    } else if (c) {
      out.loose.push_back(j);
      out.kind.push_back(1);
    }
    if (vr) {
      out.loose.push_back(j);
      out.kind.push_back(3);
    }
  }
  return true;
}

struct Candidate {
  double objective = kInf;  // min sense
  std::uint64_t map_code = 0;
  std::uint64_t order_code = 0;
  bool found = false;

  bool better_than(const Candidate& o) const {
    if (!o.found) return found;
    if (!found) return false;
    if (objective != o.objective) return objective < o.objective;
    if (map_code != o.map_code) return map_code < o.map_code;
    return order_code < o.order_code;
  }
};

// Stop orders per vehicle: permutations of loose stops (lexicographic over
// (target, task) pairs), attack stop last when present.
struct OrderEnum {
  std::vector<std::vector<RouteVisit>> orders;
};

OrderEnum vehicle_orders(const VehicleDuties& d) {
  OrderEnum e;
  std::vector<int> perm(d.loose.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end());
  do {
    std::vector<RouteVisit> visits;
    for (int idx : perm) {
      RouteVisit visit;
      visit.target = d.loose[idx];
      (d.kind[idx] == 1 ? visit.classify : visit.verify) = true;
      visits.push_back(visit);
    }
    if (d.attack_target != 0) {
      RouteVisit strike;
      strike.target = d.attack_target;
      strike.attack = true;
      strike.classify = d.attack_paired;
      visits.push_back(strike);
    }
    e.orders.push_back(std::move(visits));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return e;
}

}  // namespace

Solution oracle_solve(const Scenario& s, ObjectiveKind objective, int threads) {
  const int n = s.targets();
  const int w = s.vehicles();
  if (n > 2 || w > 4)
    throw std::invalid_argument("oracle: exhaustive enumeration is limited to n <= 2, w <= 4");
  if (threads < 1) throw std::invalid_argument("oracle: thread count must be positive");

  std::uint64_t total_maps = 1;
  for (int slot = 0; slot < 3 * n; ++slot) total_maps *= static_cast<std::uint64_t>(w);

  const auto evaluate_map = [&](std::uint64_t code, Candidate& best) {
    std::vector<int> duty(3 * n);
    std::uint64_t rem = code;
    for (int slot = 0; slot < 3 * n; ++slot) {
      duty[slot] = static_cast<int>(rem % w) + 1;
      rem /= w;
    }
    std::vector<VehicleDuties> duties(w);
    for (int v = 1; v <= w; ++v)
      if (!duties_of(s, duty, v, duties[v - 1])) return;

    std::vector<OrderEnum> orders(w);
    std::uint64_t combos = 1;
    for (int v = 0; v < w; ++v) {
      orders[v] = vehicle_orders(duties[v]);
      combos *= orders[v].orders.size();
    }
    std::vector<VehicleRoute> routes(w);
    for (std::uint64_t oc = 0; oc < combos; ++oc) {
      std::uint64_t rem_o = oc;
      for (int v = 0; v < w; ++v) {
        const auto& list = orders[v].orders;
        routes[v].visits = list[rem_o % list.size()];
        rem_o /= list.size();
      }
      const TimingResult timing = timing_propagation(s, routes);
      if (!timing.feasible) continue;
      double obj = objective_of(s, objective, routes, timing);
      if (objective == ObjectiveKind::Survivors) obj = -obj;
      Candidate cand{obj, code, oc, true};
      if (cand.better_than(best)) best = cand;
    }
  };

  Candidate best;
#ifdef _OPENMP
  if (threads > 1) {
    std::vector<Candidate> partial(threads);
    std::exception_ptr region_error;
#pragma omp parallel num_threads(threads)
    {
      const int tid = omp_get_thread_num();
#pragma omp for schedule(static)
      for (std::int64_t code = 0; code < static_cast<std::int64_t>(total_maps); ++code) {
        try {
          evaluate_map(static_cast<std::uint64_t>(code), partial[tid]);
        } catch (...) {
#pragma omp critical(avopt_oracle_error)
          if (!region_error) region_error = std::current_exception();
        }
      }
    }
    if (region_error) std::rethrow_exception(region_error);
    for (const Candidate& c : partial)
      if (c.better_than(best)) best = c;
  } else
#endif
  {
    (void)threads;
    for (std::uint64_t code = 0; code < total_maps; ++code) evaluate_map(code, best);
  }

  if (!best.found) {
    Solution sol;
    sol.status = SolveStatus::Infeasible;
    return sol;
  }

  // Rebuild the winning routes from the recorded codes.
  std::vector<int> duty(3 * n);
  std::uint64_t rem = best.map_code;
  for (int slot = 0; slot < 3 * n; ++slot) {
    duty[slot] = static_cast<int>(rem % w) + 1;
    rem /= w;
  }
  std::vector<VehicleRoute> routes(w);
  std::uint64_t rem_o = best.order_code;
  for (int v = 1; v <= w; ++v) {
    VehicleDuties d;
    duties_of(s, duty, v, d);
    const OrderEnum e = vehicle_orders(d);
    routes[v - 1].visits = e.orders[rem_o % e.orders.size()];
    rem_o /= e.orders.size();
  }
  return solution_from_routes(s, objective, routes);
}

}  // namespace avopt
