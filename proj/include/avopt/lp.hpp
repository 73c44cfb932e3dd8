#pragma once

#include "avopt/model.hpp"

#include <vector>

namespace avopt {

struct LpRow {
  std::vector<std::pair<int, double>> coefficients;  // (column, value)
  RowSense sense = RowSense::LessEq;
  double rhs = 0.0;
};

// Continuous program over bounded variables, always minimization.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> lower;      // size num_vars
  std::vector<double> upper;      // +infinity when unbounded above
  std::vector<LpRow> rows;
  std::vector<double> objective;  // dense, size num_vars

  void check_consistent() const;  // throws std::invalid_argument
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // primal point, present when Optimal
  double objective = 0.0;
  long iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double reduced_cost_tol = 1e-9;
  int bland_threshold = 500;  // degenerate pivots before switching to Bland's rule
  long iteration_limit = 500000;
  bool warn_on_conditioning = true;  // stderr note when |coef| ratio > 1e10
};

// Two-phase primal simplex on a dense tableau. Variable bounds are handled
// implicitly (bound shifts and upper-bound complementing), so binary
// relaxations need no explicit x <= 1 rows. Deterministic: fixed pricing
// (most negative reduced cost, lowest column on ties) and fixed leaving-row
// tie-breaks.
LpOutcome solve_lp(const LinearProgram& program, const LpOptions& options = {});

// LP relaxation: binaries become [0, 1] columns, continuous variables keep
// [0, +inf). A maximization objective is negated so the program minimizes;
// callers translate the optimum back.
LinearProgram relaxation_of(const MilpModel& model);

}  // namespace avopt
