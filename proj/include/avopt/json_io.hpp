#pragma once

#include "avopt/model.hpp"
#include "avopt/scenario.hpp"
#include "avopt/schedule.hpp"
#include "avopt/solver.hpp"

#include <json.hpp>

#include <string>

namespace avopt {

// Builds a finalized scenario from a parsed document. Geometric tables and
// defaults are expanded to per-arc entries at load time. Throws
// std::invalid_argument naming the offending field on schema or invariant
// violations.
Scenario load_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

// Inverse of load_scenario up to representation: reloading the result
// yields the same crisp flight-time table.
nlohmann::json scenario_to_json(const Scenario& s);

// Plan document: objective, status, per-vehicle event timelines, task
// times, makespan.
nlohmann::json plan_to_json(const Scenario& s, const Solution& sol);

// Rebuilds a solution vector from a plan document so it can be validated
// against the scenario. Throws std::invalid_argument on malformed plans.
Solution plan_from_json(const Scenario& s, const nlohmann::json& doc);

// Model debug dump: variables, rows, objective, all by name.
nlohmann::json model_to_json(const MilpModel& m);

}  // namespace avopt
