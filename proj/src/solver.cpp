#include "avopt/solver.hpp"

#include "avopt/lp.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace avopt {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NodeLimit: return "node-limit";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  std::vector<std::pair<int, double>> fixes;  // (binary ordinal, 0 or 1)
  double bound = -kInf;                       // parent relaxation value (min sense)
  long seq = 0;                               // creation order, deterministic
};

struct NodeResult {
  LpOutcome lp;
};

int pick_branch_var(const MilpModel& model, const std::vector<double>& x, BranchRule rule,
                    double tol) {
  const int nb = model.vars.binary_count();
  int pick = -1;
  double best_frac = 0.0;
  for (int c = 0; c < nb; ++c) {
    const double f = std::min(x[c] - std::floor(x[c]), std::ceil(x[c]) - x[c]);
    if (f <= tol) continue;
    if (rule == BranchRule::LowestIndex) return c;
    if (f > best_frac + 1e-15) {  // strict improvement: lowest ordinal wins ties
      best_frac = f;
      pick = c;
    }
  }
  return pick;
}

}  // namespace

Solution solve(const MilpModel& model, const SolverParams& params) {
  if (params.node_limit < 1) throw std::invalid_argument("solver: node limit must be positive");
  if (params.threads < 1) throw std::invalid_argument("solver: thread count must be positive");

  const LinearProgram base = relaxation_of(model);
  const double sense_sign = model.objective_sense == ObjectiveSense::Maximize ? -1.0 : 1.0;

  Solution best;
  best.status = SolveStatus::Infeasible;
  double incumbent = kInf;  // min sense

  // DFS keeps open nodes on a stack (x = 1 child pushed last, explored
  // first); best-bound keeps a heap ordered by parent relaxation value.
  std::vector<Node> open;
  auto heap_before = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // older node wins ties
  };
  long next_seq = 0;
  open.push_back({{}, -kInf, next_seq++});
  long expanded = 0;
  bool hit_limit = false;

  const int batch_width = params.search == SearchOrder::DepthFirst ? params.threads : 1;

  std::vector<Node> batch;
  std::vector<NodeResult> results;
  while (!open.empty()) {
    if (expanded >= params.node_limit) {
      hit_limit = true;
      break;
    }
    // Collect a batch of nodes still worth expanding.
    batch.clear();
    const long room = params.node_limit - expanded;
    while (!open.empty() && static_cast<long>(batch.size()) < std::min<long>(batch_width, room)) {
      Node n;
      if (params.search == SearchOrder::BestBound) {
        std::pop_heap(open.begin(), open.end(), heap_before);
        n = std::move(open.back());
        open.pop_back();
      } else {
        n = std::move(open.back());
        open.pop_back();
      }
      if (n.bound >= incumbent - 1e-9) continue;  // already dominated
      batch.push_back(std::move(n));
    }
    if (batch.empty()) continue;
    expanded += static_cast<long>(batch.size());

    results.assign(batch.size(), {});
    std::exception_ptr batch_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(params.threads) if (batch.size() > 1)
#endif
    for (int b = 0; b < static_cast<int>(batch.size()); ++b) {
      try {
        LinearProgram lp = base;
        for (const auto& [ord, val] : batch[b].fixes) {
          lp.lower[ord] = val;
          lp.upper[ord] = val;
        }
        results[b].lp = solve_lp(lp);
      } catch (...) {
        // Exceptions must not unwind out of the parallel region; surface the
        // first one after the loop.
#ifdef _OPENMP
#pragma omp critical(avopt_batch_error)
#endif
        if (!batch_error) batch_error = std::current_exception();
      }
    }
    if (batch_error) std::rethrow_exception(batch_error);

    // Sequential processing in pop order keeps the search deterministic for
    // a fixed batch width.
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const LpOutcome& lp = results[b].lp;
      if (lp.status == LpStatus::Infeasible) continue;
      if (lp.status == LpStatus::Unbounded)
        throw std::runtime_error("solver: relaxation unbounded; model is malformed");
      if (lp.objective >= incumbent - 1e-9) continue;

      const int frac = pick_branch_var(model, lp.values, params.branching,
                                       params.integrality_tol);
      if (frac < 0) {
        // Integral point strictly better than the incumbent.
        incumbent = lp.objective;
        best.values = lp.values;
        for (int c = 0; c < model.vars.binary_count(); ++c)
          best.values[c] = best.values[c] > 0.5 ? 1.0 : 0.0;
        best.objective = sense_sign * lp.objective;
        best.status = SolveStatus::Optimal;
        continue;
      }
      Node zero{batch[b].fixes, lp.objective, next_seq++};
      zero.fixes.emplace_back(frac, 0.0);
      Node one{batch[b].fixes, lp.objective, next_seq++};
      one.fixes.emplace_back(frac, 1.0);
      open.push_back(std::move(zero));
      if (params.search == SearchOrder::BestBound)
        std::push_heap(open.begin(), open.end(), heap_before);
      open.push_back(std::move(one));
      if (params.search == SearchOrder::BestBound)
        std::push_heap(open.begin(), open.end(), heap_before);
    }
  }

  best.node_count = expanded;
  if (hit_limit) best.status = SolveStatus::NodeLimit;
  // Objectives that do not price t_f leave it loose in the relaxation; pin
  // it to the decoded makespan so downstream checks see a coherent value.
  if (!best.values.empty() && model.objective_kind != ObjectiveKind::WeightedMakespan) {
    double latest = 0.0;
    for (int j = 1; j <= model.n; ++j)
      latest = std::max(latest, best.values[model.vars.task_time(j, kVerify)]);
    best.values[model.vars.makespan()] = latest;
  }
  return best;
}

}  // namespace avopt
