#include "avopt/model.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace avopt {

VariableIndex::VariableIndex(int n, int w) : n_(n), w_(w) {
  if (n < 1 || w <= n) throw std::invalid_argument("variable index: need n >= 1 and w > n");
  assign_ord_.assign(static_cast<std::size_t>(w) * kNumTasks * (n + w) * n, -1);
  sink_ord_.assign(static_cast<std::size_t>(w) * (n + w), -1);
  dep_ord_.assign(w, -1);
  tt_ord_.assign(static_cast<std::size_t>(n) * kNumTasks, -1);

  auto admissible = [&](int v, int k, int i, int j) {
    if (i > n && i != n + v) return false;
    if (i == j && k != kAttack) return false;
    return true;
  };
  for (int v = 1; v <= w; ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= n + w; ++i)
        for (int j = 1; j <= n; ++j) {
          if (!admissible(v, k, i, j)) continue;
          const std::size_t cell =
              ((((v - 1) * kNumTasks + (k - 1)) * (n + w)) + (i - 1)) * n + (j - 1);
          assign_ord_[cell] = count();
          ids_.push_back({VarKind::Assign, v, k, i, j});
        }
  for (int v = 1; v <= w; ++v)
    for (int i = 1; i <= n + w; ++i) {
      if (i > n && i != n + v) continue;  // sink reachable from targets and own source
      sink_ord_[(v - 1) * (n + w) + (i - 1)] = count();
      ids_.push_back({VarKind::SinkArc, v, 0, i, 0});
    }
  binary_count_ = count();
  for (int v = 1; v <= w; ++v) {
    dep_ord_[v - 1] = count();
    ids_.push_back({VarKind::Departure, v, 0, 0, 0});
  }
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= kNumTasks; ++k) {
      tt_ord_[(j - 1) * kNumTasks + (k - 1)] = count();
      ids_.push_back({VarKind::TaskTime, 0, k, 0, j});
    }
  makespan_ = count();
  ids_.push_back({VarKind::Makespan, 0, 0, 0, 0});
}

int VariableIndex::assign(int v, int k, int i, int j) const {
  if (v < 1 || v > w_ || k < 1 || k > kNumTasks || i < 1 || i > n_ + w_ || j < 1 || j > n_)
    return -1;
  const std::size_t cell =
      ((((v - 1) * kNumTasks + (k - 1)) * (n_ + w_)) + (i - 1)) * n_ + (j - 1);
  return assign_ord_[cell];
}

int VariableIndex::sink_arc(int v, int i) const {
  if (v < 1 || v > w_ || i < 1 || i > n_ + w_) return -1;
  return sink_ord_[(v - 1) * (n_ + w_) + (i - 1)];
}

int VariableIndex::departure(int v) const {
  if (v < 1 || v > w_) return -1;
  return dep_ord_[v - 1];
}

int VariableIndex::task_time(int j, int k) const {
  if (j < 1 || j > n_ || k < 1 || k > kNumTasks) return -1;
  return tt_ord_[(j - 1) * kNumTasks + (k - 1)];
}

std::string VariableIndex::name(int ordinal) const {
  const VariableId& d = id(ordinal);
  switch (d.kind) {
    case VarKind::Assign:
      return "x_v" + std::to_string(d.v) + "_k" + std::to_string(d.k) +
             "_i" + std::to_string(d.i) + "_j" + std::to_string(d.j);
    case VarKind::SinkArc:
      return "xs_v" + std::to_string(d.v) + "_i" + std::to_string(d.i);
    case VarKind::Departure:
      return "tv" + std::to_string(d.v);
    case VarKind::TaskTime:
      return "tt" + std::to_string(d.j) + "_" + std::to_string(d.k);
    case VarKind::Makespan:
      return "tf";
  }
  return "?";
}

const char* to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::MC: return "MC";
    case ConstraintFamily::SA: return "SA";
    case ConstraintFamily::VO: return "VO";
    case ConstraintFamily::LO: return "LO";
    case ConstraintFamily::PM: return "PM";
    case ConstraintFamily::VA: return "VA";
    case ConstraintFamily::CT: return "CT";
    case ConstraintFamily::SD: return "SD";
    case ConstraintFamily::CA: return "CA";
    case ConstraintFamily::T13: return "T13";
    case ConstraintFamily::T2: return "T2";
    case ConstraintFamily::TS: return "TS";
    case ConstraintFamily::TO: return "TO";
    case ConstraintFamily::TF: return "TF";
  }
  return "?";
}

const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::TotalFlightTime: return "total-time";
    case ObjectiveKind::WeightedMakespan: return "makespan";
    case ObjectiveKind::Survivors: return "survivors";
  }
  return "?";
}

ObjectiveKind objective_from_string(const std::string& name) {
  if (name == "total-time") return ObjectiveKind::TotalFlightTime;
  if (name == "makespan") return ObjectiveKind::WeightedMakespan;
  if (name == "survivors") return ObjectiveKind::Survivors;
  throw std::invalid_argument("objective: unknown kind '" + name +
                              "' (expected total-time, makespan, or survivors)");
}

namespace {

// Row assembly helper bound to one model under construction.
class Builder {
 public:
  Builder(const Scenario& s, MilpModel& m) : s_(s), m_(m), vars_(m.vars) {}

  // Arcs into target j with task k, i != j (targets plus v's own source).
  std::vector<int> incoming(int v, int k, int j) const {
    std::vector<int> out;
    for (int i = 1; i <= s_.targets(); ++i)
      if (i != j) out.push_back(vars_.assign(v, k, i, j));
    out.push_back(vars_.assign(v, k, s_.source_of(v), j));
    return out;
  }

  // Arcs from target j onward to other targets, any task.
  std::vector<int> target_exits(int v, int j) const {
    std::vector<int> out;
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= s_.targets(); ++i)
        if (i != j) out.push_back(vars_.assign(v, k, j, i));
    return out;
  }

  void row(ConstraintFamily family, std::vector<std::pair<int, double>> coefficients,
           RowSense sense, double rhs) {
    for (const auto& [ord, c] : coefficients)
      if (ord < 0) throw std::logic_error("model builder: unknown variable in row");
    m_.rows.push_back({family, std::move(coefficients), sense, rhs});
  }

  const Scenario& s_;
  MilpModel& m_;
  const VariableIndex& vars_;
};

}  // namespace

MilpModel build_model(const Scenario& s, ObjectiveKind objective) {
  if (!s.finalized()) throw std::logic_error("build_model: scenario not finalized");
  const int n = s.targets();
  const int w = s.vehicles();
  const double M = s.big_m();
  const double eps = s.epsilon();

  MilpModel m{n, w, M, VariableIndex(n, w), {}, objective,
              objective == ObjectiveKind::Survivors ? ObjectiveSense::Maximize
                                                    : ObjectiveSense::Minimize,
              {}};
  Builder b(s, m);
  const VariableIndex& vars = m.vars;

  // MC: each task on each target happens exactly once, over all vehicles.
  // The attack row counts strike self-arcs as well.
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= kNumTasks; ++k) {
      std::vector<std::pair<int, double>> c;
      for (int v = 1; v <= w; ++v) {
        if (k == kAttack) c.emplace_back(vars.assign(v, k, j, j), 1.0);
        for (int i : b.incoming(v, k, j)) c.emplace_back(i, 1.0);
      }
      b.row(ConstraintFamily::MC, std::move(c), RowSense::Equal, 1.0);
    }

  // SA: at most one vehicle is assigned task k on target j. Redundant given
  // MC but kept as stated; same left-hand sides with <=.
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= kNumTasks; ++k) {
      std::vector<std::pair<int, double>> c;
      for (int v = 1; v <= w; ++v) {
        if (k == kAttack) c.emplace_back(vars.assign(v, k, j, j), 1.0);
        for (int i : b.incoming(v, k, j)) c.emplace_back(i, 1.0);
      }
      b.row(ConstraintFamily::SA, std::move(c), RowSense::LessEq, 1.0);
    }

  // VO: vehicle v arrives at target j from outside at most once...
  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j) {
      std::vector<std::pair<int, double>> c;
      for (int k = 1; k <= kNumTasks; ++k)
        for (int i : b.incoming(v, k, j)) c.emplace_back(i, 1.0);
      b.row(ConstraintFamily::VO, std::move(c), RowSense::LessEq, 1.0);
    }
  // ...and enters the sink at most once.
  for (int v = 1; v <= w; ++v) {
    std::vector<std::pair<int, double>> c;
    for (int i = 1; i <= n; ++i) c.emplace_back(vars.sink_arc(v, i), 1.0);
    c.emplace_back(vars.sink_arc(v, s.source_of(v)), 1.0);
    b.row(ConstraintFamily::VO, std::move(c), RowSense::LessEq, 1.0);
  }

  // LO: vehicle v leaves target j at most once (onward leg or sink).
  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j) {
      std::vector<std::pair<int, double>> c;
      for (int e : b.target_exits(v, j)) c.emplace_back(e, 1.0);
      c.emplace_back(vars.sink_arc(v, j), 1.0);
      b.row(ConstraintFamily::LO, std::move(c), RowSense::LessEq, 1.0);
    }

  // PM: the munition is spent on attack, so at most one attack per vehicle.
  for (int v = 1; v <= w; ++v) {
    std::vector<std::pair<int, double>> c;
    for (int j = 1; j <= n; ++j) {
      c.emplace_back(vars.assign(v, kAttack, j, j), 1.0);
      for (int i : b.incoming(v, kAttack, j)) c.emplace_back(i, 1.0);
    }
    b.row(ConstraintFamily::PM, std::move(c), RowSense::LessEq, 1.0);
  }

  // VA: the verifier of target j must not fly the attack on j.
  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j) {
      std::vector<std::pair<int, double>> c;
      for (int i : b.incoming(v, kAttack, j)) c.emplace_back(i, 1.0);
      for (int i : b.incoming(v, kVerify, j)) c.emplace_back(i, 1.0);
      b.row(ConstraintFamily::VA, std::move(c), RowSense::LessEq, 1.0);
    }

  // CT: flow continuity at target j for vehicle v, four coupled rows.
  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j) {
      const int sink = vars.sink_arc(v, j);
      const int self2 = vars.assign(v, kAttack, j, j);
      // (i) a verify arrival must be followed by a departure
      std::vector<std::pair<int, double>> c1;
      for (int i : b.incoming(v, kVerify, j)) c1.emplace_back(i, 1.0);
      for (int e : b.target_exits(v, j)) c1.emplace_back(e, -1.0);
      c1.emplace_back(sink, -1.0);
      b.row(ConstraintFamily::CT, std::move(c1), RowSense::LessEq, 0.0);
      // (ii) a classify arrival continues onward or into the strike self-arc
      std::vector<std::pair<int, double>> c2;
      for (int i : b.incoming(v, kClassify, j)) c2.emplace_back(i, 1.0);
      for (int e : b.target_exits(v, j)) c2.emplace_back(e, -1.0);
      c2.emplace_back(self2, -1.0);
      c2.emplace_back(sink, -1.0);
      b.row(ConstraintFamily::CT, std::move(c2), RowSense::LessEq, 0.0);
      // (iii) an attacking vehicle is destroyed at j and cannot depart
      std::vector<std::pair<int, double>> c3;
      for (int e : b.target_exits(v, j)) c3.emplace_back(e, 1.0);
      c3.emplace_back(sink, 1.0);
      c3.emplace_back(self2, 1.0);
      for (int i : b.incoming(v, kAttack, j)) c3.emplace_back(i, 1.0);
      b.row(ConstraintFamily::CT, std::move(c3), RowSense::LessEq, 1.0);
      // (iv) departures from j require an arrival at j
      std::vector<std::pair<int, double>> c4;
      for (int e : b.target_exits(v, j)) c4.emplace_back(e, 1.0);
      c4.emplace_back(sink, 1.0);
      for (int k = 1; k <= kNumTasks; ++k)
        for (int i : b.incoming(v, k, j)) c4.emplace_back(i, -1.0);
      b.row(ConstraintFamily::CT, std::move(c4), RowSense::LessEq, 0.0);
    }

  // SD: each vehicle leaves its source exactly once (to a target or sink).
  for (int v = 1; v <= w; ++v) {
    std::vector<std::pair<int, double>> c;
    for (int k = 1; k <= kNumTasks; ++k)
      for (int j = 1; j <= n; ++j) c.emplace_back(vars.assign(v, k, s.source_of(v), j), 1.0);
    c.emplace_back(vars.sink_arc(v, s.source_of(v)), 1.0);
    b.row(ConstraintFamily::SD, std::move(c), RowSense::Equal, 1.0);
  }

  // CA: the strike self-arc at i requires v's own classification of i.
  for (int v = 1; v <= w; ++v)
    for (int i = 1; i <= n; ++i) {
      std::vector<std::pair<int, double>> c;
      c.emplace_back(vars.assign(v, kAttack, i, i), 1.0);
      for (int l : b.incoming(v, kClassify, i)) c.emplace_back(l, -1.0);
      b.row(ConstraintFamily::CA, std::move(c), RowSense::LessEq, 0.0);
    }

  // Timing rows. Each active arc pins the task time at its head to the
  // task time at its tail plus the leg's flight time; with the arc or its
  // predecessor guard inactive the pair is released by multiples of M.
  auto timing_pair = [&](ConstraintFamily family, int t_head, int t_tail, int arc,
                         const std::vector<int>& guard, double leg, double slack_m) {
    std::vector<std::pair<int, double>> up, lo;
    up.emplace_back(t_head, 1.0);
    up.emplace_back(t_tail, -1.0);
    up.emplace_back(arc, M);
    lo.emplace_back(t_head, 1.0);
    lo.emplace_back(t_tail, -1.0);
    lo.emplace_back(arc, -M);
    for (int g : guard) {
      up.emplace_back(g, M);
      lo.emplace_back(g, -M);
    }
    b.row(family, std::move(up), RowSense::LessEq, leg + slack_m * M);
    b.row(family, std::move(lo), RowSense::GreaterEq, leg - slack_m * M);
  };

  // T13: task k in {1,3} at j reached by a target-to-target leg from i,
  // where v previously classified (rows vs t_i1) or verified (vs t_i3) i.
  for (int v = 1; v <= w; ++v)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        for (int k : {kClassify, kVerify}) {
          const int arc = vars.assign(v, k, i, j);
          const double leg = s.flight_time(v, k, i, j);
          timing_pair(ConstraintFamily::T13, vars.task_time(j, k), vars.task_time(i, kClassify),
                      arc, b.incoming(v, kClassify, i), leg, 2.0);
          timing_pair(ConstraintFamily::T13, vars.task_time(j, k), vars.task_time(i, kVerify),
                      arc, b.incoming(v, kVerify, i), leg, 2.0);
        }
      }

  // T2: an attack leg from i (including the strike self-arc i == j) chains
  // off v's classification time at i; a target-to-target attack leg also
  // chains off a prior verification at i.
  for (int v = 1; v <= w; ++v)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        const int arc = vars.assign(v, kAttack, i, j);
        const double leg = s.flight_time(v, kAttack, i, j);
        timing_pair(ConstraintFamily::T2, vars.task_time(j, kAttack), vars.task_time(i, kClassify),
                    arc, b.incoming(v, kClassify, i), leg, 2.0);
        if (i != j)
          timing_pair(ConstraintFamily::T2, vars.task_time(j, kAttack), vars.task_time(i, kVerify),
                      arc, b.incoming(v, kVerify, i), leg, 2.0);
      }

  // TS: a leg straight from v's source pins the task time to the departure.
  for (int v = 1; v <= w; ++v)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= kNumTasks; ++k) {
        const int src = s.source_of(v);
        timing_pair(ConstraintFamily::TS, vars.task_time(j, k), vars.departure(v),
                    vars.assign(v, k, src, j), {}, s.flight_time(v, k, src, j), 1.0);
      }

  // TO: classify, attack, verify are strictly ordered with an epsilon gap.
  for (int j = 1; j <= n; ++j) {
    b.row(ConstraintFamily::TO,
          {{vars.task_time(j, kClassify), 1.0}, {vars.task_time(j, kAttack), -1.0}},
          RowSense::LessEq, -eps);
    b.row(ConstraintFamily::TO,
          {{vars.task_time(j, kAttack), 1.0}, {vars.task_time(j, kVerify), -1.0}},
          RowSense::LessEq, -eps);
  }

  // TF: only the weighted-makespan objective prices t_f, so only then is it
  // tied to the verification times.
  if (objective == ObjectiveKind::WeightedMakespan)
    for (int j = 1; j <= n; ++j)
      b.row(ConstraintFamily::TF,
            {{vars.task_time(j, kVerify), 1.0}, {vars.makespan(), -1.0}},
            RowSense::LessEq, 0.0);

  switch (objective) {
    case ObjectiveKind::TotalFlightTime:
      for (int v = 1; v <= w; ++v)
        for (int k = 1; k <= kNumTasks; ++k)
          for (int i = 1; i <= n + w; ++i)
            for (int j = 1; j <= n; ++j) {
              const int ord = vars.assign(v, k, i, j);
              if (ord >= 0) m.objective.emplace_back(ord, s.flight_time(v, k, i, j));
            }
      break;
    case ObjectiveKind::WeightedMakespan:
      m.objective.emplace_back(vars.makespan(), 1.0);
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= kNumTasks; ++k)
          m.objective.emplace_back(vars.task_time(j, k), s.task_weight(j, k));
      break;
    case ObjectiveKind::Survivors:
      for (int v = 1; v <= w; ++v) {
        for (int i = 1; i <= n; ++i) m.objective.emplace_back(vars.sink_arc(v, i), 1.0);
        m.objective.emplace_back(vars.sink_arc(v, s.source_of(v)), 1.0);
      }
      break;
  }
  return m;
}

VariableCensus variable_census(int n, int w) {
  if (n < 1 || w <= n) throw std::invalid_argument("variable census: need n >= 1 and w > n");
  VariableCensus c;
  c.binary = static_cast<long>(w) * (n * (3 * n + 2) + 1);
  c.continuous = 3L * n + w + 1;
  return c;
}

ConstraintCensus constraint_census(const MilpModel& model) {
  ConstraintCensus c;
  for (const ModelRow& r : model.rows) {
    ++c.by_family[r.family];
    if (r.sense == RowSense::Equal)
      ++c.equalities;
    else
      ++c.inequalities;
  }
  return c;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, p);
}

void write_terms(std::ostream& out, const MilpModel& m,
                 const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (const auto& [ord, c] : terms) {
    if (c == 0.0) continue;
    const double a = std::fabs(c);
    if (first)
      out << (c < 0.0 ? "- " : "");
    else
      out << (c < 0.0 ? " - " : " + ");
    if (a != 1.0) out << fmt(a) << " ";
    out << m.vars.name(ord);
    first = false;
  }
  if (first) out << "0 tf";  // degenerate, never produced by build_model
}

}  // namespace

void export_lp(const MilpModel& m, std::ostream& out) {
  out << (m.objective_sense == ObjectiveSense::Maximize ? "Maximize" : "Minimize") << "\n obj: ";
  write_terms(out, m, m.objective);
  out << "\nSubject To\n";
  std::map<ConstraintFamily, int> counter;
  for (const ModelRow& r : m.rows) {
    out << " " << to_string(r.family) << "_" << ++counter[r.family] << ": ";
    write_terms(out, m, r.coefficients);
    switch (r.sense) {
      case RowSense::LessEq: out << " <= "; break;
      case RowSense::Equal: out << " = "; break;
      case RowSense::GreaterEq: out << " >= "; break;
    }
    out << fmt(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int ord = m.vars.binary_count(); ord < m.vars.count(); ++ord)
    out << " " << m.vars.name(ord) << " >= 0\n";
  out << "Binary\n";
  for (int ord = 0; ord < m.vars.binary_count(); ++ord)
    out << " " << m.vars.name(ord) << "\n";
  out << "End\n";
}

}  // namespace avopt
