#include "avopt/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avopt {

const char* to_string(EventAction action) {
  switch (action) {
    case EventAction::Depart: return "depart";
    case EventAction::Classify: return "classify";
    case EventAction::Attack: return "attack";
    case EventAction::Verify: return "verify";
    case EventAction::Sink: return "sink";
  }
  return "?";
}

Schedule extract_schedule(const Scenario& s, const Solution& sol) {
  const int n = s.targets();
  const int w = s.vehicles();
  const VariableIndex vars(n, w);
  if (static_cast<int>(sol.values.size()) != vars.count())
    throw std::invalid_argument("extract_schedule: value vector size mismatch");
  // Arcs are consumed as the walk traverses them so a self-loop (the strike
  // arc) is not re-seen as a second departure, and any malformed cyclic flow
  // surfaces as a dangling route instead of an endless walk.
  std::vector<char> used(vars.count(), 0);
  const auto active = [&](int ord) { return ord >= 0 && !used[ord] && sol.values[ord] > 0.5; };

  Schedule sched;
  sched.task_times.assign(n, {0.0, 0.0, 0.0});
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= kNumTasks; ++k)
      sched.task_times[j - 1][k - 1] = sol.values[vars.task_time(j, k)];

  for (int v = 1; v <= w; ++v) {
    VehicleSchedule vs;
    vs.vehicle = v;
    int prev = s.source_of(v);
    double last_t = sol.values[vars.departure(v)];
    vs.events.push_back({last_t, prev, EventAction::Depart});
    for (;;) {
      // Exactly one active arc may leave the current node.
      int next_j = 0, next_k = 0, next_ord = -1;
      bool to_sink = active(vars.sink_arc(v, prev));
      int outgoing = to_sink ? 1 : 0;
      if (to_sink) next_ord = vars.sink_arc(v, prev);
      for (int k = 1; k <= kNumTasks; ++k)
        for (int j = 1; j <= n; ++j)
          if (active(vars.assign(v, k, prev, j))) {
            ++outgoing;
            next_j = j;
            next_k = k;
            next_ord = vars.assign(v, k, prev, j);
          }
      if (outgoing > 1)
        throw std::logic_error("extract_schedule: branching flow at node " +
                               std::to_string(prev) + " for vehicle " + std::to_string(v));
      if (outgoing == 0) {
        if (vs.destroyed) break;  // attack ends the route without a sink arc
        throw std::logic_error("extract_schedule: dangling flow at node " +
                               std::to_string(prev) + " for vehicle " + std::to_string(v));
      }
      if (vs.destroyed)
        throw std::logic_error("extract_schedule: arc leaving a destroyed vehicle " +
                               std::to_string(v));
      used[next_ord] = 1;
      if (to_sink) {
        vs.events.push_back({last_t, s.sink_index(), EventAction::Sink});
        break;
      }
      sched.total_flight_time += s.flight_time(v, next_k, prev, next_j);
      last_t = sched.task_times[next_j - 1][next_k - 1];
      const EventAction action = next_k == kClassify  ? EventAction::Classify
                                 : next_k == kAttack ? EventAction::Attack
                                                     : EventAction::Verify;
      vs.events.push_back({last_t, next_j, action});
      if (next_k == kAttack) vs.destroyed = true;
      prev = next_j;
    }
    if (!vs.destroyed) sched.survivors.push_back(v);
    sched.vehicles.push_back(std::move(vs));
  }

  sched.makespan = 0.0;
  for (int j = 1; j <= n; ++j)
    sched.makespan = std::max(sched.makespan, sched.task_times[j - 1][kVerify - 1]);
  return sched;
}

bool ValidationReport::has_family(ConstraintFamily f) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return !v.domain && v.family == f; });
}

namespace {

// Independent evaluation state over one candidate solution.
class Checker {
 public:
  Checker(const Scenario& s, const Solution& sol, ValidationReport& report)
      : s_(s), vars_(s.targets(), s.vehicles()), sol_(sol), report_(report) {}

  static constexpr double kTol = 1e-6;

  double val(int ord) const {
    if (ord < 0) throw std::logic_error("validate: unknown variable");
    return sol_.values[ord];
  }
  double x(int v, int k, int i, int j) const { return val(vars_.assign(v, k, i, j)); }
  double xs(int v, int i) const { return val(vars_.sink_arc(v, i)); }
  double tt(int j, int k) const { return val(vars_.task_time(j, k)); }
  double tv(int v) const { return val(vars_.departure(v)); }
  double tf() const { return val(vars_.makespan()); }

  // Sum of arrivals at j from outside for task k (targets != j, own source).
  double in_sum(int v, int k, int j) const {
    double sum = 0.0;
    for (int i = 1; i <= s_.targets(); ++i)
      if (i != j) sum += x(v, k, i, j);
    return sum + x(v, k, s_.source_of(v), j);
  }
  // Sum of onward target-to-target legs out of j, any task.
  double out_sum(int v, int j) const {
    double sum = 0.0;
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= s_.targets(); ++i)
        if (i != j) sum += x(v, k, j, i);
    return sum;
  }

  void flag(ConstraintFamily family, std::string instance, double residual) {
    if (residual > kTol) report_.violations.push_back({family, false, std::move(instance), residual});
  }
  void flag_domain(std::string instance, double residual) {
    if (residual > kTol)
      report_.violations.push_back({ConstraintFamily::MC, true, std::move(instance), residual});
  }

  const Scenario& s_;
  VariableIndex vars_;
  const Solution& sol_;
  ValidationReport& report_;
};

std::string inst(const char* fmt, int a, int b = 0, int c = 0) {
  std::string out = fmt;
  auto sub = [&](const char* key, int value) {
    const auto pos = out.find(key);
    if (pos != std::string::npos) out.replace(pos, 2, std::to_string(value));
  };
  sub("%a", a);
  sub("%b", b);
  sub("%c", c);
  return out;
}

}  // namespace

ValidationReport validate(const Scenario& s, const Solution& sol) {
  const int n = s.targets();
  const int w = s.vehicles();
  ValidationReport report;
  Checker ck(s, sol, report);
  if (static_cast<int>(sol.values.size()) != ck.vars_.count())
    throw std::invalid_argument("validate: value vector size mismatch");

  // Domain: binaries near 0/1, times nonnegative.
  for (int ord = 0; ord < ck.vars_.binary_count(); ++ord) {
    const double v = sol.values[ord];
    ck.flag_domain("binary " + ck.vars_.name(ord) + " not in {0,1}",
                   std::min(std::fabs(v), std::fabs(v - 1.0)));
  }
  for (int ord = ck.vars_.binary_count(); ord < ck.vars_.count(); ++ord)
    ck.flag_domain("continuous " + ck.vars_.name(ord) + " negative", -sol.values[ord]);

  const double M = s.big_m();
  const double eps = s.epsilon();

  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= kNumTasks; ++k) {
      double done = 0.0;
      for (int v = 1; v <= w; ++v) {
        done += ck.in_sum(v, k, j);
        if (k == kAttack) done += ck.x(v, k, j, j);
      }
      ck.flag(ConstraintFamily::MC, inst("MC j=%a k=%b", j, k), std::fabs(done - 1.0));
      ck.flag(ConstraintFamily::SA, inst("SA j=%a k=%b", j, k), done - 1.0);
    }

  for (int v = 1; v <= w; ++v) {
    for (int j = 1; j <= n; ++j) {
      double visits = 0.0;
      for (int k = 1; k <= kNumTasks; ++k) visits += ck.in_sum(v, k, j);
      ck.flag(ConstraintFamily::VO, inst("VO v=%a j=%b", v, j), visits - 1.0);
      ck.flag(ConstraintFamily::LO, inst("LO v=%a j=%b", v, j),
              ck.out_sum(v, j) + ck.xs(v, j) - 1.0);
    }
    double sink_entries = ck.xs(v, s.source_of(v));
    for (int i = 1; i <= n; ++i) sink_entries += ck.xs(v, i);
    ck.flag(ConstraintFamily::VO, inst("VO sink v=%a", v), sink_entries - 1.0);

    double attacks = 0.0;
    for (int j = 1; j <= n; ++j) attacks += ck.in_sum(v, kAttack, j) + ck.x(v, kAttack, j, j);
    ck.flag(ConstraintFamily::PM, inst("PM v=%a", v), attacks - 1.0);

    double source_exits = ck.xs(v, s.source_of(v));
    for (int k = 1; k <= kNumTasks; ++k)
      for (int j = 1; j <= n; ++j) source_exits += ck.x(v, k, s.source_of(v), j);
    ck.flag(ConstraintFamily::SD, inst("SD v=%a", v), std::fabs(source_exits - 1.0));
  }

  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j) {
      ck.flag(ConstraintFamily::VA, inst("VA v=%a j=%b", v, j),
              ck.in_sum(v, kAttack, j) + ck.in_sum(v, kVerify, j) - 1.0);
      const double leave = ck.out_sum(v, j) + ck.xs(v, j);
      ck.flag(ConstraintFamily::CT, inst("CT verify-continue v=%a j=%b", v, j),
              ck.in_sum(v, kVerify, j) - leave);
      ck.flag(ConstraintFamily::CT, inst("CT classify-continue v=%a j=%b", v, j),
              ck.in_sum(v, kClassify, j) - leave - ck.x(v, kAttack, j, j));
      ck.flag(ConstraintFamily::CT, inst("CT attacker-destroyed v=%a j=%b", v, j),
              leave + ck.x(v, kAttack, j, j) + ck.in_sum(v, kAttack, j) - 1.0);
      double arrivals = 0.0;
      for (int k = 1; k <= kNumTasks; ++k) arrivals += ck.in_sum(v, k, j);
      ck.flag(ConstraintFamily::CT, inst("CT no-spawn v=%a j=%b", v, j), leave - arrivals);
      ck.flag(ConstraintFamily::CA, inst("CA v=%a i=%b", v, j),
              ck.x(v, kAttack, j, j) - ck.in_sum(v, kClassify, j));
    }

  // Timing families: an active arc with its predecessor guard active pins
  // the two task times together; otherwise the pair is released through M.
  const auto timing_pair = [&](ConstraintFamily family, const std::string& where, double t_head,
                               double t_tail, double arc, double guard, double leg,
                               double slack_m) {
    const double release = (slack_m * M) - arc * M - guard * M;
    ck.flag(family, where + " (upper)", t_head - t_tail - leg - release);
    ck.flag(family, where + " (lower)", (t_tail + leg - release) - t_head);
  };

  for (int v = 1; v <= w; ++v)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i != j)
          for (int k : {kClassify, kVerify}) {
            const double arc = ck.x(v, k, i, j);
            const double leg = s.flight_time(v, k, i, j);
            timing_pair(ConstraintFamily::T13, inst("T13 v=%a %b->%c", v, i, j) + " k=" +
                            std::to_string(k) + " after-classify",
                        ck.tt(j, k), ck.tt(i, kClassify), arc, ck.in_sum(v, kClassify, i), leg, 2.0);
            timing_pair(ConstraintFamily::T13, inst("T13 v=%a %b->%c", v, i, j) + " k=" +
                            std::to_string(k) + " after-verify",
                        ck.tt(j, k), ck.tt(i, kVerify), arc, ck.in_sum(v, kVerify, i), leg, 2.0);
          }
        const double attack_arc = ck.x(v, kAttack, i, j);
        const double leg2 = s.flight_time(v, kAttack, i, j);
        timing_pair(ConstraintFamily::T2,
                    inst("T2 v=%a %b->%c", v, i, j) + " after-classify", ck.tt(j, kAttack),
                    ck.tt(i, kClassify), attack_arc, ck.in_sum(v, kClassify, i), leg2, 2.0);
        if (i != j)
          timing_pair(ConstraintFamily::T2,
                      inst("T2 v=%a %b->%c", v, i, j) + " after-verify", ck.tt(j, kAttack),
                      ck.tt(i, kVerify), attack_arc, ck.in_sum(v, kVerify, i), leg2, 2.0);
      }

  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= kNumTasks; ++k)
        timing_pair(ConstraintFamily::TS, inst("TS v=%a j=%b k=%c", v, j, k), ck.tt(j, k),
                    ck.tv(v), ck.x(v, k, s.source_of(v), j), 0.0,
                    s.flight_time(v, k, s.source_of(v), j), 1.0);

  for (int j = 1; j <= n; ++j) {
    ck.flag(ConstraintFamily::TO, inst("TO classify-before-attack j=%a", j),
            ck.tt(j, kClassify) + eps - ck.tt(j, kAttack));
    ck.flag(ConstraintFamily::TO, inst("TO attack-before-verify j=%a", j),
            ck.tt(j, kAttack) + eps - ck.tt(j, kVerify));
    ck.flag(ConstraintFamily::TF, inst("TF j=%a", j), ck.tt(j, kVerify) - ck.tf());
  }

  // Endurance advisory: per-vehicle flown time against T_v.
  for (int v = 1; v <= w; ++v) {
    double flown = 0.0;
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= n + w; ++i)
        for (int j = 1; j <= n; ++j)
          if (s.arc_admissible(v, k, i, j) && sol.values[ck.vars_.assign(v, k, i, j)] > 0.5)
            flown += s.flight_time(v, k, i, j);
    if (flown > s.endurance_of(v) + Checker::kTol) report.endurance_flags.push_back(v);
  }

  report.ok = report.violations.empty();
  return report;
}

}  // namespace avopt
