#include "avopt/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <utility>

namespace avopt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

// A time-like value: bare number (crisp) or [modal, lower_width, upper_width].
TriangularFuzzyNumber get_fuzzy(const json& v, const std::string& path) {
  if (v.is_number()) return TriangularFuzzyNumber::crisp(v.get<double>());
  if (v.is_array() && v.size() == 3) {
    TriangularFuzzyNumber t{get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]"),
                            get_number(v[2], path + "[2]")};
    return t;
  }
  fail(path, "expected a number or [modal, lower_width, upper_width]");
}

DefuzzSpec parse_defuzz(const json& doc) {
  DefuzzSpec spec;
  if (!doc.contains("defuzz")) return spec;
  const json& d = doc["defuzz"];
  if (!d.is_object()) fail("defuzz", "expected an object");
  if (!d.contains("mode")) fail("defuzz.mode", "missing field");
  const std::string mode = d["mode"].is_string() ? d["mode"].get<std::string>() : "";
  if (mode == "modal")
    spec.mode = DefuzzMode::Modal;
  else if (mode == "centroid")
    spec.mode = DefuzzMode::Centroid;
  else if (mode == "alpha-pess")
    spec.mode = DefuzzMode::AlphaCutPessimistic;
  else if (mode == "alpha-opt")
    spec.mode = DefuzzMode::AlphaCutOptimistic;
  else
    fail("defuzz.mode", "expected modal|centroid|alpha-pess|alpha-opt");
  if (d.contains("alpha")) spec.alpha = get_number(d["alpha"], "defuzz.alpha");
  for (const auto& [key, value] : d.items())
    if (key != "mode" && key != "alpha") fail("defuzz." + key, "unknown field");
  spec.validate();
  return spec;
}

}  // namespace

Scenario load_scenario(const json& doc) {
  if (!doc.is_object()) fail("$", "expected an object");
  static const char* known[] = {"n", "w", "epsilon", "defuzz", "endurance",
                                "task_weight", "flight_times"};
  for (const auto& [key, value] : doc.items()) {
    if (!key.empty() && key[0] == '_') continue;  // comment fields
    if (key == "description" || key == "name") continue;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(key, "unknown field");
  }
  if (!doc.contains("n")) fail("n", "missing field");
  if (!doc.contains("w")) fail("w", "missing field");
  const int n = get_int(doc["n"], "n");
  const int w = get_int(doc["w"], "w");
  if (n < 1) fail("n", "must be at least 1");
  if (w <= n) fail("w", "w must exceed n");

  double epsilon = 0.1;
  if (doc.contains("epsilon")) epsilon = get_number(doc["epsilon"], "epsilon");
  if (!(epsilon > 0.0)) fail("epsilon", "must be positive");

  const DefuzzSpec defuzz = parse_defuzz(doc);

  std::vector<double> endurance(w, 100.0);
  if (doc.contains("endurance")) {
    const json& e = doc["endurance"];
    if (e.is_number()) {
      endurance.assign(w, e.get<double>());
    } else if (e.is_array()) {
      if (static_cast<int>(e.size()) != w) fail("endurance", "expected one value per vehicle");
      for (int v = 0; v < w; ++v) endurance[v] = get_number(e[v], "endurance[" + std::to_string(v) + "]");
    } else {
      fail("endurance", "expected a number or an array");
    }
  }

  std::array<double, 3> weight_row{0.1, 0.1, 0.1};
  if (doc.contains("task_weight")) {
    const json& tw = doc["task_weight"];
    if (tw.is_number()) {
      weight_row.fill(tw.get<double>());
    } else if (tw.is_object()) {
      static const std::pair<const char*, int> keys[] = {
          {"classify", 0}, {"attack", 1}, {"verify", 2}};
      for (const auto& [key, value] : tw.items()) {
        bool ok = false;
        for (const auto& [name, slot] : keys)
          if (key == name) {
            weight_row[slot] = get_number(value, std::string("task_weight.") + name);
            ok = true;
          }
        if (!ok) fail("task_weight." + key, "unknown field");
      }
    } else {
      fail("task_weight", "expected a number or a per-task object");
    }
  }

  Scenario s(n, w, epsilon, defuzz, std::move(endurance),
             std::vector<std::array<double, 3>>(n, weight_row));

  if (!doc.contains("flight_times")) fail("flight_times", "missing field");
  const json& ft = doc["flight_times"];
  if (!ft.is_object()) fail("flight_times", "expected an object");
  for (const auto& [key, value] : ft.items())
    if (key != "explicit" && key != "t_default" && key != "geometric")
      fail("flight_times." + key, "unknown field");

  // Per-(i,j) defaults and per-arc explicit entries; explicit wins.
  std::map<std::pair<int, int>, TriangularFuzzyNumber> defaults;
  if (ft.contains("t_default")) {
    const json& td = ft["t_default"];
    if (!td.is_array()) fail("flight_times.t_default", "expected an array");
    for (std::size_t idx = 0; idx < td.size(); ++idx) {
      const std::string path = "flight_times.t_default[" + std::to_string(idx) + "]";
      const json& e = td[idx];
      if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("t"))
        fail(path, "expected {i, j, t}");
      const int i = get_int(e["i"], path + ".i");
      const int j = get_int(e["j"], path + ".j");
      if (j < 1 || j > n || i < 1 || i > n + w) fail(path, "node index out of range");
      if (!defaults.emplace(std::make_pair(i, j), get_fuzzy(e["t"], path + ".t")).second)
        fail(path, "duplicate default for this (i, j)");
    }
  }

  std::map<std::tuple<int, int, int, int>, TriangularFuzzyNumber> explicit_entries;
  if (ft.contains("explicit")) {
    const json& ex = ft["explicit"];
    if (!ex.is_array()) fail("flight_times.explicit", "expected an array");
    for (std::size_t idx = 0; idx < ex.size(); ++idx) {
      const std::string path = "flight_times.explicit[" + std::to_string(idx) + "]";
      const json& e = ex[idx];
      if (!e.is_object() || !e.contains("v") || !e.contains("k") || !e.contains("i") ||
          !e.contains("j") || !e.contains("t"))
        fail(path, "expected {v, k, i, j, t}");
      const int v = get_int(e["v"], path + ".v");
      const int k = get_int(e["k"], path + ".k");
      const int i = get_int(e["i"], path + ".i");
      const int j = get_int(e["j"], path + ".j");
      if (!s.arc_admissible(v, k, i, j)) fail(path, "inadmissible arc");
      if (!explicit_entries.emplace(std::make_tuple(v, k, i, j), get_fuzzy(e["t"], path + ".t"))
               .second)
        fail(path, "duplicate entry for this arc");
    }
  }

  // Geometric expansion: node coordinates and vehicle speeds, defuzzified
  // up front, produce crisp times distance / speed for all remaining arcs.
  bool have_geo = false;
  std::vector<std::array<double, 2>> coords;
  std::vector<double> speeds;
  if (ft.contains("geometric")) {
    const json& g = ft["geometric"];
    if (!g.is_object() || !g.contains("coords") || !g.contains("speed"))
      fail("flight_times.geometric", "expected {coords, speed}");
    for (const auto& [key, value] : g.items())
      if (key != "coords" && key != "speed") fail("flight_times.geometric." + key, "unknown field");
    const json& cj = g["coords"];
    if (!cj.is_array() || static_cast<int>(cj.size()) != n + w)
      fail("flight_times.geometric.coords", "expected one [x, y] per non-sink node");
    for (int node = 0; node < n + w; ++node) {
      const std::string path = "flight_times.geometric.coords[" + std::to_string(node) + "]";
      const json& c = cj[node];
      if (!c.is_array() || c.size() != 2) fail(path, "expected [x, y]");
      coords.push_back({defuzzify(get_fuzzy(c[0], path + "[0]"), defuzz),
                        defuzzify(get_fuzzy(c[1], path + "[1]"), defuzz)});
    }
    const json& sj = g["speed"];
    if (sj.is_array()) {
      if (static_cast<int>(sj.size()) != w)
        fail("flight_times.geometric.speed", "expected one value per vehicle");
      for (int v = 0; v < w; ++v)
        speeds.push_back(defuzzify(
            get_fuzzy(sj[v], "flight_times.geometric.speed[" + std::to_string(v) + "]"), defuzz));
    } else {
      speeds.assign(w, defuzzify(get_fuzzy(sj, "flight_times.geometric.speed"), defuzz));
    }
    for (double sp : speeds)
      if (!(sp > 0.0)) fail("flight_times.geometric.speed", "speeds must be positive");
    have_geo = true;
  }

  for (int v = 1; v <= w; ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= n + w; ++i)
        for (int j = 1; j <= n; ++j) {
          if (!s.arc_admissible(v, k, i, j)) continue;
          if (const auto it = explicit_entries.find(std::make_tuple(v, k, i, j));
              it != explicit_entries.end()) {
            s.set_flight_time(v, k, i, j, it->second);
            continue;
          }
          if (const auto it = defaults.find(std::make_pair(i, j)); it != defaults.end()) {
            s.set_flight_time(v, k, i, j, it->second);
            continue;
          }
          if (have_geo) {
            const double dx = coords[i - 1][0] - coords[j - 1][0];
            const double dy = coords[i - 1][1] - coords[j - 1][1];
            s.set_flight_time(
                v, k, i, j,
                TriangularFuzzyNumber::crisp(std::hypot(dx, dy) / speeds[v - 1]));
            continue;
          }
          fail("flight_times", "no entry covers arc (v=" + std::to_string(v) + ", k=" +
                                   std::to_string(k) + ", i=" + std::to_string(i) + ", j=" +
                                   std::to_string(j) + ")");
        }
  s.finalize();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scenario: " + path + ": " + e.what());
  }
  return load_scenario(doc);
}

namespace {

json fuzzy_to_json(const TriangularFuzzyNumber& t) {
  if (t.is_crisp()) return t.modal;
  return json::array({t.modal, t.lower_width, t.upper_width});
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["n"] = s.targets();
  doc["w"] = s.vehicles();
  doc["epsilon"] = s.epsilon();
  json defuzz;
  defuzz["mode"] = to_string(s.defuzz().mode);
  if (s.defuzz().mode == DefuzzMode::AlphaCutPessimistic ||
      s.defuzz().mode == DefuzzMode::AlphaCutOptimistic)
    defuzz["alpha"] = s.defuzz().alpha;
  doc["defuzz"] = std::move(defuzz);
  json endurance = json::array();
  for (int v = 1; v <= s.vehicles(); ++v) endurance.push_back(s.endurance_of(v));
  doc["endurance"] = std::move(endurance);
  // The document form carries one weight triple for all targets; emitting
  // target 1's row is lossless for documents this loader produced.
  json tw;
  tw["classify"] = s.task_weight(1, kClassify);
  tw["attack"] = s.task_weight(1, kAttack);
  tw["verify"] = s.task_weight(1, kVerify);
  doc["task_weight"] = std::move(tw);
  json entries = json::array();
  for (int v = 1; v <= s.vehicles(); ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= s.targets() + s.vehicles(); ++i)
        for (int j = 1; j <= s.targets(); ++j)
          if (s.arc_admissible(v, k, i, j)) {
            json e;
            e["v"] = v;
            e["k"] = k;
            e["i"] = i;
            e["j"] = j;
            e["t"] = fuzzy_to_json(s.fuzzy_flight_time(v, k, i, j));
            entries.push_back(std::move(e));
          }
  doc["flight_times"] = json{{"explicit", std::move(entries)}};
  return doc;
}

json plan_to_json(const Scenario& s, const Solution& sol) {
  const Schedule sched = extract_schedule(s, sol);
  json doc;
  doc["objective"] = sol.objective;
  doc["status"] = to_string(sol.status);
  json vehicles = json::array();
  for (const VehicleSchedule& vs : sched.vehicles) {
    json vj;
    vj["vehicle"] = vs.vehicle;
    json events = json::array();
    for (const ScheduleEvent& e : vs.events) {
      json ej;
      ej["action"] = to_string(e.action);
      ej["node"] = e.node;
      ej["t"] = e.t;
      events.push_back(std::move(ej));
    }
    vj["events"] = std::move(events);
    vehicles.push_back(std::move(vj));
  }
  doc["vehicles"] = std::move(vehicles);
  json times;
  for (int j = 1; j <= s.targets(); ++j) {
    json row;
    row["classify"] = sched.task_times[j - 1][0];
    row["attack"] = sched.task_times[j - 1][1];
    row["verify"] = sched.task_times[j - 1][2];
    times[std::to_string(j)] = std::move(row);
  }
  doc["times"] = std::move(times);
  doc["makespan"] = sched.makespan;
  return doc;
}

Solution plan_from_json(const Scenario& s, const json& doc) {
  const auto bad = [](const std::string& what) {
    throw std::invalid_argument("plan: " + what);
  };
  if (!doc.is_object()) bad("expected an object");
  for (const char* field : {"objective", "status", "vehicles", "times", "makespan"})
    if (!doc.contains(field)) bad(std::string("missing field ") + field);

  const VariableIndex vars(s.targets(), s.vehicles());
  Solution sol;
  sol.values.assign(vars.count(), 0.0);
  sol.objective = get_number(doc["objective"], "objective");
  const std::string status = doc["status"].is_string() ? doc["status"].get<std::string>() : "";
  if (status == "optimal")
    sol.status = SolveStatus::Optimal;
  else if (status == "infeasible")
    sol.status = SolveStatus::Infeasible;
  else if (status == "node-limit")
    sol.status = SolveStatus::NodeLimit;
  else
    bad("status must be optimal|infeasible|node-limit");

  if (!doc["vehicles"].is_array() || static_cast<int>(doc["vehicles"].size()) != s.vehicles())
    bad("vehicles must list every vehicle");
  for (const json& vj : doc["vehicles"]) {
    if (!vj.is_object() || !vj.contains("vehicle") || !vj.contains("events"))
      bad("vehicle entries need {vehicle, events}");
    const int v = get_int(vj["vehicle"], "vehicles.vehicle");
    if (v < 1 || v > s.vehicles()) bad("vehicle id out of range");
    int prev = s.source_of(v);
    bool departed = false;
    for (const json& ej : vj["events"]) {
      if (!ej.is_object() || !ej.contains("action") || !ej.contains("node") || !ej.contains("t"))
        bad("events need {action, node, t}");
      const std::string action = ej["action"].is_string() ? ej["action"].get<std::string>() : "";
      const int node = get_int(ej["node"], "events.node");
      const double t = get_number(ej["t"], "events.t");
      if (action == "depart") {
        if (node != s.source_of(v)) bad("depart node must be the vehicle's source");
        sol.values[vars.departure(v)] = t;
        departed = true;
      } else if (action == "sink") {
        if (node != s.sink_index()) bad("sink event at a non-sink node");
        const int ord = vars.sink_arc(v, prev);
        if (ord < 0) bad("no sink arc from the current node");
        sol.values[ord] = 1.0;
        prev = -1;  // nothing may follow
      } else if (action == "classify" || action == "attack" || action == "verify") {
        const int k = action == "classify" ? kClassify : action == "attack" ? kAttack : kVerify;
        if (prev < 0) bad("event after the route ended");
        if (!departed) bad("task event before departure");
        const int ord = vars.assign(v, k, prev, node);
        if (ord < 0) bad("inadmissible leg in events");
        sol.values[ord] = 1.0;
        prev = node;
      } else {
        bad("unknown action " + action);
      }
    }
  }

  if (!doc["times"].is_object()) bad("times must be an object");
  for (int j = 1; j <= s.targets(); ++j) {
    const std::string key = std::to_string(j);
    if (!doc["times"].contains(key)) bad("times missing target " + key);
    const json& row = doc["times"][key];
    static const std::pair<const char*, int> tasks[] = {
        {"classify", kClassify}, {"attack", kAttack}, {"verify", kVerify}};
    for (const auto& [name, k] : tasks) {
      if (!row.contains(name)) bad("times." + key + " missing " + name);
      sol.values[vars.task_time(j, k)] = get_number(row[name], "times." + key);
    }
  }
  sol.values[vars.makespan()] = get_number(doc["makespan"], "makespan");
  return sol;
}

json model_to_json(const MilpModel& m) {
  json doc;
  doc["n"] = m.n;
  doc["w"] = m.w;
  doc["big_m"] = m.big_m;
  doc["objective_kind"] = to_string(m.objective_kind);
  doc["objective_sense"] =
      m.objective_sense == ObjectiveSense::Maximize ? "maximize" : "minimize";
  json vars = json::array();
  for (int ord = 0; ord < m.vars.count(); ++ord) {
    json vj;
    vj["ordinal"] = ord;
    vj["name"] = m.vars.name(ord);
    vj["binary"] = m.vars.is_binary(ord);
    vars.push_back(std::move(vj));
  }
  doc["variables"] = std::move(vars);
  json obj = json::array();
  for (const auto& [ord, c] : m.objective)
    obj.push_back(json{{"var", m.vars.name(ord)}, {"coef", c}});
  doc["objective"] = std::move(obj);
  json rows = json::array();
  for (const ModelRow& r : m.rows) {
    json rj;
    rj["family"] = to_string(r.family);
    rj["sense"] = r.sense == RowSense::LessEq ? "<=" : r.sense == RowSense::Equal ? "=" : ">=";
    rj["rhs"] = r.rhs;
    json terms = json::array();
    for (const auto& [ord, c] : r.coefficients)
      terms.push_back(json{{"var", m.vars.name(ord)}, {"coef", c}});
    rj["terms"] = std::move(terms);
    rows.push_back(std::move(rj));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace avopt
