#include "avopt/model.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

using namespace avopt;
using avopt::testing::golden_baseline;

namespace {

// Rows of one family, in emission order.
std::vector<const ModelRow*> rows_of(const MilpModel& m, ConstraintFamily f) {
  std::vector<const ModelRow*> out;
  for (const ModelRow& r : m.rows)
    if (r.family == f) out.push_back(&r);
  return out;
}

std::map<int, double> as_map(const ModelRow& r) {
  return {r.coefficients.begin(), r.coefficients.end()};
}

}  // namespace

TEST_CASE("census: closed forms for the documented shapes") {
  struct Point {
    int n, w;
    long binary, continuous, equalities;
  };
  const Point points[] = {
      {1, 3, 18, 7, 6}, {2, 3, 51, 10, 9}, {2, 4, 68, 11, 10}, {2, 5, 85, 12, 11},
      {3, 4, 136, 14, 13},
  };
  for (const Point& p : points) {
    CAPTURE(p.n);
    CAPTURE(p.w);
    const VariableCensus c = variable_census(p.n, p.w);
    CHECK(c.binary == p.binary);
    CHECK(c.continuous == p.continuous);

    const VariableIndex vars(p.n, p.w);
    CHECK(vars.binary_count() == p.binary);
    CHECK(vars.continuous_count() == p.continuous);

    const MilpModel m = build_model(make_random_scenario(1, p.n, p.w),
                                    ObjectiveKind::WeightedMakespan);
    CHECK(constraint_census(m).equalities == p.equalities);
  }
}

TEST_CASE("variable order: full layout of the one-target three-vehicle case") {
  const VariableIndex vars(1, 3);
  const char* expected[] = {
      "x_v1_k1_i2_j1", "x_v1_k2_i1_j1", "x_v1_k2_i2_j1", "x_v1_k3_i2_j1",
      "x_v2_k1_i3_j1", "x_v2_k2_i1_j1", "x_v2_k2_i3_j1", "x_v2_k3_i3_j1",
      "x_v3_k1_i4_j1", "x_v3_k2_i1_j1", "x_v3_k2_i4_j1", "x_v3_k3_i4_j1",
      "xs_v1_i1",      "xs_v1_i2",      "xs_v2_i1",      "xs_v2_i3",
      "xs_v3_i1",      "xs_v3_i4",      "tv1",           "tv2",
      "tv3",           "tt1_1",         "tt1_2",         "tt1_3",
      "tf",
  };
  REQUIRE(vars.count() == 25);
  for (int c = 0; c < 25; ++c) {
    CAPTURE(c);
    CHECK(vars.name(c) == expected[c]);
    CHECK(vars.is_binary(c) == (c < 18));
  }
  CHECK(vars.assign(1, kAttack, 1, 1) == 1);
  CHECK(vars.assign(1, kAttack, 3, 1) == -1);  // wrong source
  CHECK(vars.assign(2, kClassify, 1, 1) == -1);  // self-arc is attack-only
  CHECK(vars.sink_arc(3, 4) == 17);
  CHECK(vars.sink_arc(3, 3) == -1);
  CHECK(vars.departure(2) == 19);
  CHECK(vars.task_time(1, kVerify) == 23);
  CHECK(vars.makespan() == 24);
}

TEST_CASE("builder: family row counts for both tested shapes") {
  const std::map<ConstraintFamily, int> expect13 = {
      {ConstraintFamily::MC, 3},  {ConstraintFamily::SA, 3},  {ConstraintFamily::VO, 6},
      {ConstraintFamily::LO, 3},  {ConstraintFamily::PM, 3},  {ConstraintFamily::VA, 3},
      {ConstraintFamily::CT, 12}, {ConstraintFamily::SD, 3},  {ConstraintFamily::CA, 3},
      {ConstraintFamily::T13, 0}, {ConstraintFamily::T2, 6},  {ConstraintFamily::TS, 18},
      {ConstraintFamily::TO, 2},  {ConstraintFamily::TF, 1},
  };
  const std::map<ConstraintFamily, int> expect23 = {
      {ConstraintFamily::MC, 6},   {ConstraintFamily::SA, 6},  {ConstraintFamily::VO, 9},
      {ConstraintFamily::LO, 6},   {ConstraintFamily::PM, 3},  {ConstraintFamily::VA, 6},
      {ConstraintFamily::CT, 24},  {ConstraintFamily::SD, 3},  {ConstraintFamily::CA, 6},
      {ConstraintFamily::T13, 48}, {ConstraintFamily::T2, 36}, {ConstraintFamily::TS, 36},
      {ConstraintFamily::TO, 4},   {ConstraintFamily::TF, 2},
  };
  const MilpModel m13 = build_model(golden_baseline(), ObjectiveKind::WeightedMakespan);
  const MilpModel m23 =
      build_model(make_random_scenario(5, 2, 3), ObjectiveKind::WeightedMakespan);
  const ConstraintCensus c13 = constraint_census(m13);
  const ConstraintCensus c23 = constraint_census(m23);
  for (const auto& [f, count] : expect13) {
    CAPTURE(to_string(f));
    CHECK((c13.by_family.count(f) ? c13.by_family.at(f) : 0) == count);
  }
  for (const auto& [f, count] : expect23) {
    CAPTURE(to_string(f));
    CHECK((c23.by_family.count(f) ? c23.by_family.at(f) : 0) == count);
  }
  CHECK(c13.equalities == 6);
  CHECK(c13.total() == 66);
  CHECK(c23.equalities == 9);
}

TEST_CASE("builder: completion and assignment rows over the attack arcs") {
  const MilpModel m = build_model(golden_baseline(), ObjectiveKind::WeightedMakespan);
  const VariableIndex& v = m.vars;
  const std::map<int, double> attack_arcs = {
      {v.assign(1, kAttack, 1, 1), 1.0}, {v.assign(1, kAttack, 2, 1), 1.0},
      {v.assign(2, kAttack, 1, 1), 1.0}, {v.assign(2, kAttack, 3, 1), 1.0},
      {v.assign(3, kAttack, 1, 1), 1.0}, {v.assign(3, kAttack, 4, 1), 1.0},
  };

  const auto mc = rows_of(m, ConstraintFamily::MC);
  REQUIRE(mc.size() == 3);
  CHECK(mc[1]->sense == RowSense::Equal);
  CHECK(mc[1]->rhs == 1.0);
  CHECK(as_map(*mc[1]) == attack_arcs);  // strike self-arcs count as completion

  // The assignee cap is summed over vehicles, one row per (target, task).
  const auto sa = rows_of(m, ConstraintFamily::SA);
  REQUIRE(sa.size() == 3);
  CHECK(sa[1]->sense == RowSense::LessEq);
  CHECK(as_map(*sa[1]) == attack_arcs);
}

TEST_CASE("builder: flow coupling rows of the first vehicle") {
  const MilpModel m = build_model(golden_baseline(), ObjectiveKind::WeightedMakespan);
  const VariableIndex& v = m.vars;

  const auto sd = rows_of(m, ConstraintFamily::SD);
  REQUIRE(sd.size() == 3);
  CHECK(sd[0]->sense == RowSense::Equal);
  CHECK(as_map(*sd[0]) ==
        std::map<int, double>{{v.assign(1, kClassify, 2, 1), 1.0},
                              {v.assign(1, kAttack, 2, 1), 1.0},
                              {v.assign(1, kVerify, 2, 1), 1.0},
                              {v.sink_arc(1, 2), 1.0}});

  const auto ca = rows_of(m, ConstraintFamily::CA);
  REQUIRE(ca.size() == 3);
  CHECK(ca[0]->sense == RowSense::LessEq);
  CHECK(ca[0]->rhs == 0.0);
  CHECK(as_map(*ca[0]) == std::map<int, double>{{v.assign(1, kAttack, 1, 1), 1.0},
                                                {v.assign(1, kClassify, 2, 1), -1.0}});

  const auto va = rows_of(m, ConstraintFamily::VA);
  REQUIRE(va.size() == 3);
  CHECK(as_map(*va[0]) == std::map<int, double>{{v.assign(1, kAttack, 2, 1), 1.0},
                                                {v.assign(1, kVerify, 2, 1), 1.0}});

  const auto ct = rows_of(m, ConstraintFamily::CT);
  REQUIRE(ct.size() == 12);
  // Verifier must exit to the sink.
  CHECK(as_map(*ct[0]) == std::map<int, double>{{v.assign(1, kVerify, 2, 1), 1.0},
                                                {v.sink_arc(1, 1), -1.0}});
  // A vehicle that attacked anywhere cannot also leave the target for the sink.
  CHECK(as_map(*ct[2]) == std::map<int, double>{{v.sink_arc(1, 1), 1.0},
                                                {v.assign(1, kAttack, 1, 1), 1.0},
                                                {v.assign(1, kAttack, 2, 1), 1.0}});
  CHECK(ct[2]->rhs == 1.0);
}

TEST_CASE("builder: timing rows pin active legs with big-M pairs") {
  const Scenario s = golden_baseline();
  const MilpModel m = build_model(s, ObjectiveKind::WeightedMakespan);
  const VariableIndex& v = m.vars;
  const double M = s.big_m();
  REQUIRE(M == doctest::Approx(300.0));

  const auto t2 = rows_of(m, ConstraintFamily::T2);
  REQUIRE(t2.size() == 6);
  CHECK(t2[0]->sense == RowSense::LessEq);
  CHECK(t2[0]->rhs == doctest::Approx(2 * M + 0.11));
  CHECK(as_map(*t2[0]) == std::map<int, double>{{v.task_time(1, kAttack), 1.0},
                                                {v.task_time(1, kClassify), -1.0},
                                                {v.assign(1, kAttack, 1, 1), M},
                                                {v.assign(1, kClassify, 2, 1), M}});
  CHECK(t2[1]->sense == RowSense::GreaterEq);
  CHECK(t2[1]->rhs == doctest::Approx(0.11 - 2 * M));

  const auto ts = rows_of(m, ConstraintFamily::TS);
  REQUIRE(ts.size() == 18);
  CHECK(ts[0]->rhs == doctest::Approx(M + 3.7));
  CHECK(as_map(*ts[0]) == std::map<int, double>{{v.task_time(1, kClassify), 1.0},
                                                {v.departure(1), -1.0},
                                                {v.assign(1, kClassify, 2, 1), M}});
  CHECK(ts[1]->rhs == doctest::Approx(3.7 - M));

  const auto to = rows_of(m, ConstraintFamily::TO);
  REQUIRE(to.size() == 2);
  CHECK(to[0]->sense == RowSense::LessEq);
  CHECK(to[0]->rhs == doctest::Approx(-0.1));
  CHECK(as_map(*to[0]) == std::map<int, double>{{v.task_time(1, kClassify), 1.0},
                                                {v.task_time(1, kAttack), -1.0}});

  const auto tf = rows_of(m, ConstraintFamily::TF);
  REQUIRE(tf.size() == 1);
  CHECK(as_map(*tf[0]) == std::map<int, double>{{v.task_time(1, kVerify), 1.0},
                                                {v.makespan(), -1.0}});
}

TEST_CASE("builder: target-to-target timing rows appear from two targets up") {
  const Scenario s = make_random_scenario(5, 2, 3);
  const MilpModel m = build_model(s, ObjectiveKind::WeightedMakespan);
  const auto t13 = rows_of(m, ConstraintFamily::T13);
  REQUIRE(t13.size() == 48);
  // Each row: two task times, the leg arc, and the arcs by which the vehicle
  // could have reached the predecessor target with the predecessor task.
  const double M = s.big_m();
  for (const ModelRow* r : t13) {
    int times = 0, guards = 0;
    for (const auto& [ord, c] : r->coefficients) {
      if (m.vars.is_binary(ord)) {
        CHECK(std::abs(c) == doctest::Approx(M));
        ++guards;
      } else {
        ++times;
      }
    }
    CHECK(times == 2);
    CHECK(guards >= 2);
  }
}

TEST_CASE("objectives: the three documented kinds") {
  const Scenario s = golden_baseline();

  const MilpModel total = build_model(s, ObjectiveKind::TotalFlightTime);
  CHECK(total.objective_sense == ObjectiveSense::Minimize);
  CHECK(total.objective.size() == 12);  // every assignment arc, nothing else
  double coef_strike = 0.0;
  for (const auto& [ord, c] : total.objective) {
    CHECK(total.vars.is_binary(ord));
    if (ord == total.vars.assign(1, kAttack, 1, 1)) coef_strike = c;
  }
  CHECK(coef_strike == doctest::Approx(0.11));
  CHECK(rows_of(total, ConstraintFamily::TF).empty());  // makespan unpriced

  const MilpModel mk = build_model(s, ObjectiveKind::WeightedMakespan);
  CHECK(mk.objective.size() == 4);  // tf + three task times
  std::map<int, double> mko = {mk.objective.begin(), mk.objective.end()};
  CHECK(mko.at(mk.vars.makespan()) == 1.0);
  CHECK(mko.at(mk.vars.task_time(1, kAttack)) == doctest::Approx(0.1));

  const MilpModel sv = build_model(s, ObjectiveKind::Survivors);
  CHECK(sv.objective_sense == ObjectiveSense::Maximize);
  CHECK(sv.objective.size() == 6);  // the sink arcs
  for (const auto& [ord, c] : sv.objective) {
    CHECK(c == 1.0);
    CHECK(sv.vars.id(ord).kind == VarKind::SinkArc);
  }
}

TEST_CASE("builder and export are deterministic") {
  const Scenario s = make_random_scenario(11, 2, 4);
  const MilpModel a = build_model(s, ObjectiveKind::WeightedMakespan);
  const MilpModel b = build_model(s, ObjectiveKind::WeightedMakespan);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    CHECK(a.rows[r].family == b.rows[r].family);
    CHECK(a.rows[r].sense == b.rows[r].sense);
    CHECK(a.rows[r].rhs == b.rows[r].rhs);
    CHECK(a.rows[r].coefficients == b.rows[r].coefficients);
  }
  std::ostringstream da, db;
  export_lp(a, da);
  export_lp(b, db);
  CHECK(da.str() == db.str());
}

TEST_CASE("export: section structure") {
  std::ostringstream out;
  export_lp(build_model(golden_baseline(), ObjectiveKind::WeightedMakespan), out);
  const std::string text = out.str();
  CHECK(text.rfind("Minimize", 0) == 0);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("Binary") != std::string::npos);
  CHECK(text.find(" MC_1:") != std::string::npos);
  CHECK(text.find(" TS_18:") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);

  std::ostringstream sv;
  export_lp(build_model(golden_baseline(), ObjectiveKind::Survivors), sv);
  CHECK(sv.str().rfind("Maximize", 0) == 0);
}
