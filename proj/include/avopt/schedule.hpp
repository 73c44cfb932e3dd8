#pragma once

#include "avopt/model.hpp"
#include "avopt/scenario.hpp"
#include "avopt/solver.hpp"

#include <string>
#include <vector>

namespace avopt {

enum class EventAction { Depart, Classify, Attack, Verify, Sink };

const char* to_string(EventAction action);

struct ScheduleEvent {
  double t = 0.0;
  int node = 0;
  EventAction action = EventAction::Depart;
};

struct VehicleSchedule {
  int vehicle = 0;
  std::vector<ScheduleEvent> events;
  bool destroyed = false;
};

struct Schedule {
  std::vector<VehicleSchedule> vehicles;
  std::vector<int> survivors;                     // ascending vehicle ids
  std::vector<std::array<double, 3>> task_times;  // per target
  double makespan = 0.0;           // latest verification time
  double total_flight_time = 0.0;  // sum of flown leg times, sink legs free
};

// Decodes a solution's arc values into per-vehicle timelines. Throws
// std::logic_error on broken flow (dangling or branching arcs), which
// indicates a solver or validator defect, not user error.
Schedule extract_schedule(const Scenario& s, const Solution& sol);

// Domain is validator-only: integrality/nonnegativity findings, not a
// generated constraint family.
struct Violation {
  ConstraintFamily family = ConstraintFamily::MC;
  bool domain = false;
  std::string instance;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<int> endurance_flags;  // vehicles whose route exceeds endurance
  bool ok = false;

  bool has_family(ConstraintFamily f) const;
};

// Re-evaluates every constraint family directly from the scenario, on a
// code path separate from the model builder. Tolerance 1e-6. Endurance is
// reported as a flag, not a violation: the formulation does not constrain it.
ValidationReport validate(const Scenario& s, const Solution& sol);

}  // namespace avopt
