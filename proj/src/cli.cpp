#include "avopt/cli.hpp"

#include "avopt/json_io.hpp"
#include "avopt/lp.hpp"
#include "avopt/schedule.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace avopt {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNoSolution = 3;
constexpr int kExitValidation = 4;

struct CommonOpts {
  std::string objective = "makespan";
  std::optional<std::string> defuzz;
  std::optional<double> alpha;
  std::optional<double> epsilon;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--objective", o.objective, "total-time|makespan|survivors")
      ->check(CLI::IsMember({"total-time", "makespan", "survivors"}));
  cmd->add_option("--defuzz", o.defuzz, "modal|centroid|alpha-pess|alpha-opt")
      ->check(CLI::IsMember({"modal", "centroid", "alpha-pess", "alpha-opt"}));
  cmd->add_option("--alpha", o.alpha, "alpha for the alpha-cut defuzz modes");
  cmd->add_option("--epsilon", o.epsilon, "override the task separation gap");
}

ObjectiveKind objective_of(const std::string& name) { return objective_from_string(name); }

// Overrides are applied to the parsed document so that Scenario stays
// immutable after load.
Scenario load_with_overrides(const std::string& path, const CommonOpts& o) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string(e.what()));
  }
  if (o.epsilon) doc["epsilon"] = *o.epsilon;
  if (o.defuzz) {
    nlohmann::json d;
    d["mode"] = *o.defuzz;
    if (o.alpha)
      d["alpha"] = *o.alpha;
    else if (doc.contains("defuzz") && doc["defuzz"].is_object() && doc["defuzz"].contains("alpha"))
      d["alpha"] = doc["defuzz"]["alpha"];
    doc["defuzz"] = std::move(d);
  } else if (o.alpha) {
    if (!doc.contains("defuzz") || !doc["defuzz"].is_object())
      throw std::invalid_argument("--alpha given but no defuzz mode is configured");
    doc["defuzz"]["alpha"] = *o.alpha;
  }
  return load_scenario(doc);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << doc.dump(2) << "\n";
}

void print_schedule(const Scenario& s, const Solution& sol) {
  const Schedule sched = extract_schedule(s, sol);
  for (const VehicleSchedule& vs : sched.vehicles) {
    std::ostringstream line;
    line << "vehicle " << vs.vehicle << ":";
    for (const ScheduleEvent& e : vs.events) {
      line << " ";
      switch (e.action) {
        case EventAction::Depart: line << "depart@" << e.t; break;
        case EventAction::Classify: line << "-> classify " << e.node << "@" << e.t; break;
        case EventAction::Attack: line << "-> attack " << e.node << "@" << e.t; break;
        case EventAction::Verify: line << "-> verify " << e.node << "@" << e.t; break;
        case EventAction::Sink: line << "-> sink"; break;
      }
    }
    if (vs.destroyed) line << " (expended)";
    std::cout << line.str() << "\n";
  }
  std::cout << "survivors:";
  for (int v : sched.survivors) std::cout << " " << v;
  std::cout << "\nmakespan: " << sched.makespan << "\n";
  std::cout << "total flight time: " << sched.total_flight_time << "\n";
}

int cmd_validate(const std::string& path, const CommonOpts& o) {
  const Scenario s = load_with_overrides(path, o);
  std::cout << "scenario ok: n=" << s.targets() << " w=" << s.vehicles()
            << " nodes=" << s.nodes() << " epsilon=" << s.epsilon()
            << " defuzz=" << to_string(s.defuzz().mode) << "\n";
  int arcs = 0;
  double tmin = 0.0, tmax = 0.0;
  bool first = true;
  for (int v = 1; v <= s.vehicles(); ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= s.targets() + s.vehicles(); ++i)
        for (int j = 1; j <= s.targets(); ++j)
          if (s.arc_admissible(v, k, i, j)) {
            ++arcs;
            const double t = s.flight_time(v, k, i, j);
            tmin = first ? t : std::min(tmin, t);
            tmax = first ? t : std::max(tmax, t);
            first = false;
          }
  std::cout << "flight table: " << arcs << " arcs, crisp range [" << tmin << ", " << tmax
            << "]\n";
  std::cout << "endurance:";
  for (int v = 1; v <= s.vehicles(); ++v) std::cout << " " << s.endurance_of(v);
  std::cout << "\nbig-M: " << s.big_m() << "\n";
  return kExitOk;
}

int cmd_stats(const std::string& path, const CommonOpts& o, const std::string& out_path) {
  const Scenario s = load_with_overrides(path, o);
  const MilpModel m = build_model(s, objective_of(o.objective));
  const ConstraintCensus cc = constraint_census(m);
  const VariableCensus vc = variable_census(s.targets(), s.vehicles());
  std::cout << "binary=" << vc.binary << " continuous=" << vc.continuous
            << " equality=" << cc.equalities << "\n";
  std::cout << "inequality=" << cc.inequalities << " rows=" << cc.total() << "\n";
  for (const auto& [family, count] : cc.by_family)
    std::cout << "  " << to_string(family) << ": " << count << "\n";
  if (!out_path.empty()) {
    nlohmann::json doc;
    doc["binary"] = vc.binary;
    doc["continuous"] = vc.continuous;
    doc["equality"] = cc.equalities;
    doc["inequality"] = cc.inequalities;
    nlohmann::json fam;
    for (const auto& [family, count] : cc.by_family) fam[to_string(family)] = count;
    doc["families"] = std::move(fam);
    write_json(out_path, doc);
  }
  return kExitOk;
}

int cmd_solve(const std::string& path, const CommonOpts& o, const SolverParams& params,
              const std::string& out_path, bool dump_model) {
  const Scenario s = load_with_overrides(path, o);
  const ObjectiveKind kind = objective_of(o.objective);
  const MilpModel m = build_model(s, kind);
  const auto started = std::chrono::steady_clock::now();
  const Solution sol = solve(m, params);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  std::cout << "status: " << to_string(sol.status) << "\n";
  std::cout << "nodes: " << sol.node_count << " (" << ms << " ms)\n";
  if (sol.status == SolveStatus::Infeasible) return kExitNoSolution;
  if (sol.status == SolveStatus::NodeLimit && sol.values.empty()) {
    std::cout << "no incumbent found within the node limit\n";
    return kExitNoSolution;
  }
  std::cout << "objective (" << to_string(kind) << "): " << sol.objective << "\n";
  print_schedule(s, sol);
  if (!out_path.empty()) write_json(out_path, plan_to_json(s, sol));
  if (dump_model) std::cerr << model_to_json(m).dump(2) << "\n";
  return sol.status == SolveStatus::Optimal ? kExitOk : kExitNoSolution;
}

int cmd_check(const std::string& scenario_path, const std::string& plan_path,
              const CommonOpts& o) {
  const Scenario s = load_with_overrides(scenario_path, o);
  std::ifstream in(plan_path);
  if (!in) throw std::invalid_argument("cannot open " + plan_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string(e.what()));
  }
  const Solution sol = plan_from_json(s, doc);
  const ValidationReport report = validate(s, sol);
  if (report.ok) {
    std::cout << "plan ok: all constraint families satisfied\n";
  } else {
    std::cout << "plan violates " << report.violations.size() << " constraint(s):\n";
    for (const Violation& v : report.violations)
      std::cout << "  [" << (v.domain ? "domain" : to_string(v.family)) << "] " << v.instance
                << " residual=" << v.residual << "\n";
  }
  for (int v : report.endurance_flags)
    std::cout << "note: vehicle " << v << " exceeds its endurance\n";
  return report.ok ? kExitOk : kExitValidation;
}

int cmd_export_lp(const std::string& path, const CommonOpts& o, const std::string& out_path) {
  const Scenario s = load_with_overrides(path, o);
  const MilpModel m = build_model(s, objective_of(o.objective));
  if (out_path.empty()) {
    export_lp(m, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    export_lp(m, out);
  }
  return kExitOk;
}

struct AgreementStats {
  int checked = 0;
  int disagreements = 0;
  bool any_unproven = false;
};

void compare_one(const Scenario& s, ObjectiveKind kind, const SolverParams& params,
                 const std::string& label, AgreementStats& stats) {
  const MilpModel m = build_model(s, kind);
  const Solution exact = solve(m, params);
  const Solution reference = oracle_solve(s, kind, params.threads);
  ++stats.checked;
  if (exact.status != reference.status) {
    ++stats.disagreements;
    std::cout << label << " " << to_string(kind) << ": status mismatch (" << to_string(exact.status)
              << " vs " << to_string(reference.status) << ")\n";
    if (exact.status == SolveStatus::NodeLimit) stats.any_unproven = true;
    return;
  }
  if (exact.status != SolveStatus::Optimal) {
    std::cout << label << " " << to_string(kind) << ": both " << to_string(exact.status) << "\n";
    if (exact.status == SolveStatus::NodeLimit) stats.any_unproven = true;
    return;
  }
  const double diff = std::fabs(exact.objective - reference.objective);
  const bool agree = diff <= 1e-6;
  if (!agree) ++stats.disagreements;
  std::cout << label << " " << to_string(kind) << ": solver=" << exact.objective
            << " enumeration=" << reference.objective << " diff=" << diff
            << (agree ? "" : "  <-- MISMATCH") << "\n";
}

int cmd_oracle(const std::string& path, const CommonOpts& o, const SolverParams& params,
               bool gen, int count, std::uint64_t seed) {
  AgreementStats stats;
  if (gen) {
    // Cycle through the feasible (n, w) shapes the enumeration can afford.
    static const std::pair<int, int> shapes[] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}};
    for (int idx = 0; idx < count; ++idx) {
      const auto [n, w] = shapes[idx % 5];
      const Scenario s = make_random_scenario(seed + idx, n, w);
      const std::string label =
          "instance " + std::to_string(idx) + " (n=" + std::to_string(n) + ", w=" +
          std::to_string(w) + ", seed=" + std::to_string(seed + idx) + ")";
      for (ObjectiveKind kind : {ObjectiveKind::TotalFlightTime, ObjectiveKind::WeightedMakespan,
                                 ObjectiveKind::Survivors})
        compare_one(s, kind, params, label, stats);
    }
  } else {
    const Scenario s = load_with_overrides(path, o);
    compare_one(s, objective_of(o.objective), params, "scenario", stats);
  }
  std::cout << stats.checked << " comparisons, " << stats.disagreements << " disagreements\n";
  if (stats.disagreements > 0) return kExitValidation;
  if (stats.any_unproven) return kExitNoSolution;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Cooperative mission assignment optimizer"};
  app.require_subcommand(1);

  CommonOpts common;
  SolverParams params;
  std::string scenario_path, plan_path, out_path;
  std::string branch = "most-fractional", search = "dfs";
  bool gen = false, dump_model = false;
  int count = 20;
  std::uint64_t seed = 1;

  CLI::App* validate_cmd = app.add_subcommand("validate", "load a scenario and report diagnostics");
  validate_cmd->add_option("scenario", scenario_path)->required();
  add_common(validate_cmd, common);

  CLI::App* stats_cmd = app.add_subcommand("stats", "print model size by constraint family");
  stats_cmd->add_option("scenario", scenario_path)->required();
  stats_cmd->add_option("--out", out_path, "write the census as JSON");
  add_common(stats_cmd, common);

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a scenario to proven optimality");
  solve_cmd->add_option("scenario", scenario_path)->required();
  solve_cmd->add_option("--out", out_path, "write the plan as JSON");
  solve_cmd->add_option("--node-limit", params.node_limit);
  solve_cmd->add_option("--threads", params.threads, "parallel node evaluation width");
  solve_cmd->add_option("--branch", branch)->check(CLI::IsMember({"most-fractional", "lowest-index"}));
  solve_cmd->add_option("--search", search)->check(CLI::IsMember({"dfs", "best-bound"}));
  solve_cmd->add_flag("--dump-model", dump_model, "write the row dump to stderr");
  add_common(solve_cmd, common);

  CLI::App* check_cmd = app.add_subcommand("check", "validate a plan against a scenario");
  check_cmd->add_option("scenario", scenario_path)->required();
  check_cmd->add_option("plan", plan_path)->required();
  add_common(check_cmd, common);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "cross-check the solver against exhaustive enumeration");
  oracle_cmd->add_option("scenario", scenario_path);
  oracle_cmd->add_flag("--gen", gen, "generate random desk-scale instances instead");
  oracle_cmd->add_option("--count", count, "number of generated instances");
  oracle_cmd->add_option("--seed", seed, "seed for generated instances");
  oracle_cmd->add_option("--threads", params.threads);
  oracle_cmd->add_option("--node-limit", params.node_limit);
  add_common(oracle_cmd, common);

  CLI::App* export_cmd = app.add_subcommand("export-lp", "write the model in LP text format");
  export_cmd->add_option("scenario", scenario_path)->required();
  export_cmd->add_option("--out", out_path, "target file (default: stdout)");
  add_common(export_cmd, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  params.branching =
      branch == "lowest-index" ? BranchRule::LowestIndex : BranchRule::MostFractional;
  params.search = search == "best-bound" ? SearchOrder::BestBound : SearchOrder::DepthFirst;

  try {
    if (validate_cmd->parsed()) return cmd_validate(scenario_path, common);
    if (stats_cmd->parsed()) return cmd_stats(scenario_path, common, out_path);
    if (solve_cmd->parsed()) return cmd_solve(scenario_path, common, params, out_path, dump_model);
    if (check_cmd->parsed()) return cmd_check(scenario_path, plan_path, common);
    if (oracle_cmd->parsed()) {
      if (!gen && scenario_path.empty()) {
        std::cerr << "error: oracle needs a scenario or --gen\n";
        return kExitUsage;
      }
      return cmd_oracle(scenario_path, common, params, gen, count, seed);
    }
    if (export_cmd->parsed()) return cmd_export_lp(scenario_path, common, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace avopt
