// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails. Each criterion is self-contained and carries its own
// timing budget where the contract specifies one.

#include "avopt/fuzzy.hpp"
#include "avopt/json_io.hpp"
#include "avopt/lp.hpp"
#include "avopt/model.hpp"
#include "avopt/scenario.hpp"
#include "avopt/schedule.hpp"
#include "avopt/solver.hpp"

#include "helpers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace avopt;
using namespace avopt::testing;

namespace {

int failures = 0;

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Criterion {
  std::string name;
  std::vector<std::string> problems;
  double started_ms = 0.0;

  explicit Criterion(std::string n) : name(std::move(n)), started_ms(now_ms()) {}

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
      std::ostringstream o;
      o << what << " (got " << got << ", want " << want << ")";
      problems.push_back(o.str());
    }
  }
  void finish(double budget_ms = 0.0) {
    const double elapsed = now_ms() - started_ms;
    if (budget_ms > 0.0 && elapsed > budget_ms) {
      std::ostringstream o;
      o << "exceeded the " << budget_ms << " ms budget (" << elapsed << " ms)";
      problems.push_back(o.str());
    }
    if (problems.empty()) {
      std::printf("PASS: %s (%.1f ms)\n", name.c_str(), elapsed);
    } else {
      ++failures;
      std::printf("FAIL: %s -- %s\n", name.c_str(), problems.front().c_str());
      for (std::size_t i = 1; i < problems.size(); ++i)
        std::printf("      also: %s\n", problems[i].c_str());
    }
  }
};

Schedule solved_schedule(const Scenario& s, ObjectiveKind kind, Solution* out_sol = nullptr) {
  const Solution sol = solve(build_model(s, kind));
  if (out_sol) *out_sol = sol;
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("expected an optimal solve");
  return extract_schedule(s, sol);
}

std::string role_signature(const Schedule& sched) {
  std::string sig;
  for (const VehicleSchedule& vs : sched.vehicles) {
    for (const ScheduleEvent& e : vs.events) sig += to_string(e.action)[0];
    sig += '|';
  }
  return sig;
}

Scenario scaled_copy(const Scenario& s, double lambda) {
  std::vector<double> endurance;
  for (int v = 1; v <= s.vehicles(); ++v) endurance.push_back(lambda * s.endurance_of(v));
  std::vector<std::array<double, 3>> weights;
  for (int j = 1; j <= s.targets(); ++j)
    weights.push_back({s.task_weight(j, kClassify), s.task_weight(j, kAttack),
                       s.task_weight(j, kVerify)});
  Scenario out(s.targets(), s.vehicles(), lambda * s.epsilon(), s.defuzz(), std::move(endurance),
               std::move(weights));
  for (int v = 1; v <= s.vehicles(); ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= s.nodes() - 1; ++i)
        for (int j = 1; j <= s.targets(); ++j)
          if (s.arc_admissible(v, k, i, j)) {
            TriangularFuzzyNumber t = s.fuzzy_flight_time(v, k, i, j);
            t.modal *= lambda;
            t.lower_width *= lambda;
            t.upper_width *= lambda;
            out.set_flight_time(v, k, i, j, t);
          }
  out.finalize();
  return out;
}

// ---- criteria -------------------------------------------------------------

void criterion_census() {
  Criterion c("1. variable and equality census at the documented shapes");
  struct Point {
    int n, w;
    long binary, continuous, equalities;
  };
  const Point points[] = {
      {2, 3, 51, 10, 9}, {2, 4, 68, 11, 10}, {2, 5, 85, 12, 11}, {3, 4, 136, 14, 13}};
  for (const Point& p : points) {
    const double t0 = now_ms();
    const VariableCensus vc = variable_census(p.n, p.w);
    const double census_ms = now_ms() - t0;
    std::ostringstream tag;
    tag << "(" << p.n << "," << p.w << ")";
    c.expect(vc.binary == p.binary, tag.str() + " binary count");
    c.expect(vc.continuous == p.continuous, tag.str() + " continuous count");
    c.expect(census_ms < 1.0, tag.str() + " census exceeded 1 ms");

    const MilpModel m =
        build_model(make_random_scenario(1, p.n, p.w), ObjectiveKind::WeightedMakespan);
    const ConstraintCensus cc = constraint_census(m);
    c.expect(cc.equalities == p.equalities, tag.str() + " equality count");
    // Inequality totals are informational: the generated families are
    // internally consistent and cross-validated semantically by the
    // enumeration suite, so totals are printed, not asserted.
    std::printf("  info: shape %s -> %d inequalities, %d rows total\n", tag.str().c_str(),
                cc.inequalities, cc.total());
  }
  c.finish();
}

void criterion_small_shape() {
  Criterion c("2. one-target, three-vehicle model shape");
  const VariableCensus vc = variable_census(1, 3);
  c.expect(vc.binary == 18, "binary count");
  c.expect(vc.continuous == 7, "continuous count");
  const MilpModel m = build_model(golden_baseline(), ObjectiveKind::WeightedMakespan);
  c.expect(constraint_census(m).equalities == 6, "equality count");
  c.finish();
}

void criterion_baseline() {
  Criterion c("3. baseline golden instance (strike pair plus verifier)");
  const Scenario s = golden_baseline();
  Solution sol;
  const Schedule sched = solved_schedule(s, ObjectiveKind::WeightedMakespan, &sol);
  c.expect_near(sched.task_times[0][0], 3.7, 1e-6, "classification time");
  c.expect_near(sched.task_times[0][1], 3.81, 1e-6, "attack time");
  c.expect_near(sched.task_times[0][2], 4.24, 1e-6, "verification time");
  c.expect(sched.vehicles[0].destroyed, "vehicle 1 should strike");
  c.expect(sched.vehicles[1].events.size() == 3 &&
               sched.vehicles[1].events[1].action == EventAction::Verify,
           "vehicle 2 should verify");
  c.expect(sched.vehicles[2].events.size() == 2 &&
               sched.vehicles[2].events[1].action == EventAction::Sink,
           "vehicle 3 should continue to the sink");
  const Solution reference = oracle_solve(s, ObjectiveKind::WeightedMakespan);
  c.expect_near(sol.objective, reference.objective, 1e-6, "objective vs enumeration");
  c.finish(1000.0);
}

void criterion_split_roles() {
  Criterion c("4. split-role golden instance (three distinct vehicles)");
  const Scenario s = golden_near_third();
  const Schedule sched = solved_schedule(s, ObjectiveKind::WeightedMakespan);
  c.expect_near(sched.task_times[0][0], 3.7, 1e-6, "classification time");
  c.expect_near(sched.task_times[0][1], 4.24, 1e-6, "attack time");
  c.expect_near(sched.task_times[0][2], 4.50, 1e-6, "verification time");
  c.expect_near(sched.makespan, 4.50, 1e-6, "makespan");
  c.expect(sched.survivors.size() == 2 && sched.survivors[0] == 1 && sched.survivors[1] == 3,
           "survivors should be vehicles 1 and 3");
  int destroyed = 0;
  for (const VehicleSchedule& vs : sched.vehicles) destroyed += vs.destroyed ? 1 : 0;
  c.expect(destroyed == 1, "exactly one vehicle expends itself");
  c.finish(1000.0);
}

void criterion_delayed_verifier() {
  Criterion c("5. slow strike loop delays the verifier, not the route");
  const Scenario base = golden_baseline();
  const Scenario slow = golden_slow_attack();
  Solution sol;
  const Schedule sb = solved_schedule(base, ObjectiveKind::WeightedMakespan);
  const Schedule ss = solved_schedule(slow, ObjectiveKind::WeightedMakespan, &sol);
  c.expect(role_signature(sb) == role_signature(ss), "role structure should match the baseline");
  const double classify = ss.task_times[0][0];
  const double attack = ss.task_times[0][1];
  const double verify = ss.task_times[0][2];
  c.expect_near(attack - classify, 1.1, 1e-6, "attack should trail classification by the loop");
  c.expect_near(verify - attack, slow.epsilon(), 1e-6, "verification should trail by epsilon");
  const VariableIndex vars(1, 3);
  c.expect(sol.values[vars.departure(2)] > 0.1, "the verifier must delay its departure");
  c.expect_near(sol.values[vars.departure(2)], 0.66, 1e-6, "delay magnitude");
  c.finish(1000.0);
}

void criterion_equivalence() {
  Criterion c("6. twenty-instance equivalence against exhaustive enumeration");
  const std::pair<int, int> shapes[] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}};
  int compared = 0;
  for (int i = 0; i < 20; ++i) {
    const auto [n, w] = shapes[i % 5];
    const Scenario s = make_random_scenario(7000 + static_cast<std::uint64_t>(i), n, w);
    for (ObjectiveKind kind : {ObjectiveKind::TotalFlightTime, ObjectiveKind::WeightedMakespan,
                               ObjectiveKind::Survivors}) {
      const Solution exact = solve(build_model(s, kind));
      const Solution reference = oracle_solve(s, kind);
      std::ostringstream tag;
      tag << "instance " << i << " (" << n << "," << w << ") " << to_string(kind);
      c.expect(exact.status == reference.status, tag.str() + ": status mismatch");
      if (exact.status == SolveStatus::Optimal)
        c.expect_near(exact.objective, reference.objective, 1e-6, tag.str() + ": objective");
      ++compared;
    }
  }
  c.expect(compared == 60, "sixty comparisons should run");
  c.finish(60000.0);
}

void criterion_validator() {
  Criterion c("7. validator double-entry and per-family mutation tags");
  // Solver outputs across objectives validate cleanly.
  for (const Scenario& s : {golden_baseline(), golden_slow_attack(), golden_near_third()})
    for (ObjectiveKind kind : {ObjectiveKind::TotalFlightTime, ObjectiveKind::WeightedMakespan,
                               ObjectiveKind::Survivors}) {
      const Solution sol = solve(build_model(s, kind));
      if (sol.status != SolveStatus::Optimal) {
        c.expect(false, "golden solve unexpectedly not optimal");
        continue;
      }
      const ValidationReport rep = validate(s, sol);
      c.expect(rep.ok, std::string("clean solve flagged under ") + to_string(kind));
    }

  // One targeted corruption per family.
  const Scenario s1 = golden_baseline();
  const Scenario s1n = golden_near_third();
  const Scenario s2 = make_random_scenario(31, 2, 3);
  const VariableIndex v1(1, 3);
  const VariableIndex v2(2, 3);
  const Solution base1 =
      solution_from_routes(s1, ObjectiveKind::WeightedMakespan, baseline_routes());
  const Solution split = solution_from_routes(s1n, ObjectiveKind::WeightedMakespan, split_routes());
  const Solution roving =
      solution_from_routes(s2, ObjectiveKind::WeightedMakespan, roving_verifier_routes());

  struct Mutation {
    ConstraintFamily family;
    const Scenario* scenario;
    const Solution* start;
    std::function<void(Solution&)> apply;
  };
  const std::vector<Mutation> mutations = {
      {ConstraintFamily::MC, &s1, &base1,
       [&](Solution& m) { m.values[v1.assign(1, kClassify, 2, 1)] = 0.0; }},
      {ConstraintFamily::SA, &s1, &base1,
       [&](Solution& m) { m.values[v1.assign(2, kAttack, 3, 1)] = 1.0; }},
      {ConstraintFamily::VO, &s1, &base1,
       [&](Solution& m) { m.values[v1.assign(2, kClassify, 3, 1)] = 1.0; }},
      {ConstraintFamily::LO, &s2, &roving,
       [&](Solution& m) { m.values[v2.assign(3, kClassify, 1, 2)] = 1.0; }},
      {ConstraintFamily::PM, &s1, &base1,
       [&](Solution& m) { m.values[v1.assign(1, kAttack, 2, 1)] = 1.0; }},
      {ConstraintFamily::VA, &s1, &base1,
       [&](Solution& m) { m.values[v1.assign(2, kAttack, 3, 1)] = 1.0; }},
      {ConstraintFamily::CT, &s1, &base1,
       [&](Solution& m) { m.values[v1.sink_arc(3, 1)] = 1.0; }},
      {ConstraintFamily::SD, &s1, &base1,
       [&](Solution& m) { m.values[v1.sink_arc(3, 4)] = 0.0; }},
      {ConstraintFamily::CA, &s1n, &split,
       [&](Solution& m) {
         m.values[v1.assign(2, kAttack, 3, 1)] = 0.0;
         m.values[v1.assign(2, kAttack, 1, 1)] = 1.0;
       }},
      {ConstraintFamily::T13, &s2, &roving,
       [&](Solution& m) { m.values[v2.task_time(2, kVerify)] += 0.05; }},
      {ConstraintFamily::T2, &s1, &base1,
       [&](Solution& m) { m.values[v1.task_time(1, kAttack)] += 0.05; }},
      {ConstraintFamily::TS, &s1, &base1,
       [&](Solution& m) { m.values[v1.departure(2)] += 0.05; }},
      {ConstraintFamily::TO, &s1, &base1,
       [&](Solution& m) {
         m.values[v1.task_time(1, kVerify)] = m.values[v1.task_time(1, kClassify)];
       }},
      {ConstraintFamily::TF, &s1, &base1,
       [&](Solution& m) { m.values[v1.makespan()] = 4.0; }},
  };
  for (const Mutation& mu : mutations) {
    Solution mutated = *mu.start;
    mu.apply(mutated);
    const ValidationReport rep = validate(*mu.scenario, mutated);
    c.expect(!rep.ok && rep.has_family(mu.family),
             std::string("mutation for ") + to_string(mu.family) + " missed its tag");
  }
  c.finish();
}

void criterion_fuzzy() {
  Criterion c("8. fuzzy membership and centroid defuzzification");
  const TriangularFuzzyNumber t{3.0, 1.0, 2.0};
  c.expect(std::fabs(membership(t, 3.0) - 1.0) <= 1e-12, "membership at the modal point");
  c.expect(std::fabs(membership(t, 2.0)) <= 1e-12, "membership at the lower edge");
  c.expect(std::fabs(membership(t, 5.0)) <= 1e-12, "membership at the upper edge");
  c.expect(std::fabs(membership(t, 2.5) - 0.5) <= 1e-12, "ramp midpoint, rising side");
  c.expect(std::fabs(membership(t, 4.0) - 0.5) <= 1e-12, "ramp midpoint, falling side");
  const TriangularFuzzyNumber cases[] = {
      {3.0, 1.0, 2.0}, {0.5, 0.4, 0.0}, {10.0, 0.0, 3.0}, {6.5, 2.0, 2.0}};
  for (const TriangularFuzzyNumber& x : cases)
    c.expect_near(defuzzify(x, {DefuzzMode::Centroid, 1.0}), numeric_centroid(x), 1e-9,
                  "centroid vs numerical integration");
  c.finish();
}

void criterion_invariants() {
  Criterion c("9. formulation invariants (soft equality, scaling, survivors, gaps)");
  std::vector<Scenario> pool = {golden_baseline(), golden_slow_attack(), golden_near_third()};
  pool.push_back(make_random_scenario(501, 1, 3));
  pool.push_back(make_random_scenario(502, 2, 3));
  pool.push_back(make_random_scenario(503, 2, 4));

  for (std::size_t idx = 0; idx < pool.size(); ++idx) {
    const Scenario& s = pool[idx];
    Solution sol;
    const Schedule sched = solved_schedule(s, ObjectiveKind::WeightedMakespan, &sol);
    std::ostringstream tag;
    tag << "instance " << idx;

    // Active arcs are soft equalities: consecutive event times differ by
    // exactly the leg time (no mid-route loitering).
    for (const VehicleSchedule& vs : sched.vehicles) {
      int prev_node = 0;
      double prev_t = 0.0;
      for (const ScheduleEvent& e : vs.events) {
        if (e.action == EventAction::Depart) {
          prev_node = e.node;
          prev_t = e.t;
          continue;
        }
        if (e.action == EventAction::Sink) break;  // the sink leg is untimed
        const int k = e.action == EventAction::Classify  ? kClassify
                      : e.action == EventAction::Attack ? kAttack
                                                        : kVerify;
        const double leg = s.flight_time(vs.vehicle, k, prev_node, e.node);
        c.expect(std::fabs(e.t - prev_t - leg) <= 1e-6,
                 tag.str() + ": an active leg is not pinned to its flight time");
        prev_node = e.node;
        prev_t = e.t;
      }
    }

    // Epsilon-separated task order per target.
    for (int j = 1; j <= s.targets(); ++j) {
      const auto& tt = sched.task_times[j - 1];
      c.expect(tt[1] >= tt[0] + s.epsilon() - 1e-9, tag.str() + ": attack gap violated");
      c.expect(tt[2] >= tt[1] + s.epsilon() - 1e-9, tag.str() + ": verification gap violated");
    }

    // Survivors: exactly w - n vehicles outlive the mission.
    c.expect(static_cast<int>(sched.survivors.size()) == s.vehicles() - s.targets(),
             tag.str() + ": survivor count from the makespan solve");
    const Solution best_survivors = solve(build_model(s, ObjectiveKind::Survivors));
    c.expect(best_survivors.status == SolveStatus::Optimal &&
                 std::fabs(best_survivors.objective - (s.vehicles() - s.targets())) <= 1e-9,
             tag.str() + ": survivor objective optimum");
  }

  // Scaling covariance: scaling every time quantity by lambda scales the
  // optimal task times and objective by lambda.
  const Scenario base = golden_slow_attack();
  const double ref = solve(build_model(base, ObjectiveKind::WeightedMakespan)).objective;
  const double ref_total = solve(build_model(base, ObjectiveKind::TotalFlightTime)).objective;
  for (double lambda : {0.5, 2.0, 10.0}) {
    const Scenario scaled = scaled_copy(base, lambda);
    std::ostringstream tag;
    tag << "lambda " << lambda;
    const Solution mk = solve(build_model(scaled, ObjectiveKind::WeightedMakespan));
    c.expect(mk.status == SolveStatus::Optimal, tag.str() + ": scaled solve failed");
    c.expect_near(mk.objective, lambda * ref, 1e-6 * lambda, tag.str() + ": weighted makespan");
    const Solution tt = solve(build_model(scaled, ObjectiveKind::TotalFlightTime));
    c.expect_near(tt.objective, lambda * ref_total, 1e-6 * lambda, tag.str() + ": total time");
    const Solution sv = solve(build_model(scaled, ObjectiveKind::Survivors));
    c.expect_near(sv.objective, 2.0, 1e-9, tag.str() + ": survivors should not scale");
  }
  c.finish();
}

}  // namespace

void run_guarded(const char* label, void (*criterion)()) {
  try {
    criterion();
  } catch (const std::exception& e) {
    ++failures;
    std::printf("FAIL: %s -- unexpected exception: %s\n", label, e.what());
  }
}

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  run_guarded("1. variable and equality census at the documented shapes", criterion_census);
  run_guarded("2. one-target, three-vehicle model shape", criterion_small_shape);
  run_guarded("3. baseline golden instance (strike pair plus verifier)", criterion_baseline);
  run_guarded("4. split-role golden instance (three distinct vehicles)", criterion_split_roles);
  run_guarded("5. slow strike loop delays the verifier, not the route",
              criterion_delayed_verifier);
  run_guarded("6. twenty-instance equivalence against exhaustive enumeration",
              criterion_equivalence);
  run_guarded("7. validator double-entry and per-family mutation tags", criterion_validator);
  run_guarded("8. fuzzy membership and centroid defuzzification", criterion_fuzzy);
  run_guarded("9. formulation invariants (soft equality, scaling, survivors, gaps)",
              criterion_invariants);
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criterion(s) failed\n", failures);
  return 1;
}
