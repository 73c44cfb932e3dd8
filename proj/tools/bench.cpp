// Benchmark: serial reference vs OpenMP-parallel execution of the two
// compute kernels (branch-and-bound node evaluation and exhaustive
// enumeration).  Both paths must agree on the optimal objective; the
// serial path is the reference implementation used by the tests.

#include "avopt/model.hpp"
#include "avopt/scenario.hpp"
#include "avopt/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Row {
  std::string label;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  double serial_obj = 0.0;
  double parallel_obj = 0.0;
  long serial_nodes = 0;
  long parallel_nodes = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"avopt-bench: compare the serial reference solver with the parallel one"};
  int n = 2;
  int w = 3;
  int instances = 5;
  int threads = 0;  // 0 = OpenMP default
  std::uint64_t seed = 2024;
  std::string objective = "makespan";
  app.add_option("--targets,-n", n, "number of targets")->check(CLI::Range(1, 3));
  app.add_option("--vehicles,-w", w, "number of vehicles");
  app.add_option("--instances", instances, "random instances per shape");
  app.add_option("--threads", threads, "parallel thread count (0 = library default)");
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--objective", objective, "total-time | makespan | survivors");
  CLI11_PARSE(app, argc, argv);

  if (w <= n) {
    std::fprintf(stderr, "bench: vehicles must exceed targets\n");
    return 1;
  }

  avopt::ObjectiveKind kind;
  try {
    kind = avopt::objective_from_string(objective);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bench: %s\n", e.what());
    return 1;
  }

#if defined(_OPENMP)
  int hw = omp_get_max_threads();
#else
  int hw = 1;
#endif
  if (threads <= 0) threads = hw;

  std::printf("threads: serial=1 parallel=%d (hardware reports %d)\n", threads, hw);
  std::printf("shape:   n=%d w=%d, %d instances, objective=%s\n\n", n, w, instances,
              objective.c_str());

  std::vector<Row> rows;
  bool all_match = true;

  for (int i = 0; i < instances; ++i) {
    avopt::Scenario s = avopt::make_random_scenario(seed + static_cast<std::uint64_t>(i), n, w);
    avopt::MilpModel model = avopt::build_model(s, kind);

    avopt::SolverParams serial;
    serial.threads = 1;
    avopt::SolverParams parallel;
    parallel.threads = threads;

    Row row;
    row.label = "bnb seed=" + std::to_string(seed + static_cast<std::uint64_t>(i));

    double t0 = now_ms();
    avopt::Solution a = avopt::solve(model, serial);
    double t1 = now_ms();
    avopt::Solution b = avopt::solve(model, parallel);
    double t2 = now_ms();

    row.serial_ms = t1 - t0;
    row.parallel_ms = t2 - t1;
    row.serial_obj = a.objective;
    row.parallel_obj = b.objective;
    row.serial_nodes = a.node_count;
    row.parallel_nodes = b.node_count;
    if (std::abs(a.objective - b.objective) > 1e-6) all_match = false;
    rows.push_back(row);

    if (n <= 2 && w <= 4) {
      Row orow;
      orow.label = "oracle seed=" + std::to_string(seed + static_cast<std::uint64_t>(i));
      double u0 = now_ms();
      avopt::Solution oa = avopt::oracle_solve(s, kind, 1);
      double u1 = now_ms();
      avopt::Solution ob = avopt::oracle_solve(s, kind, threads);
      double u2 = now_ms();
      orow.serial_ms = u1 - u0;
      orow.parallel_ms = u2 - u1;
      orow.serial_obj = oa.objective;
      orow.parallel_obj = ob.objective;
      if (std::abs(oa.objective - ob.objective) > 1e-6) all_match = false;
      rows.push_back(orow);
    }
  }

  std::printf("%-22s %12s %12s %9s %14s %14s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "serial obj", "parallel obj");
  double sum_serial = 0.0;
  double sum_parallel = 0.0;
  for (const Row& r : rows) {
    double speedup = r.parallel_ms > 0.0 ? r.serial_ms / r.parallel_ms : 0.0;
    std::printf("%-22s %12.2f %12.2f %8.2fx %14.6f %14.6f\n", r.label.c_str(), r.serial_ms,
                r.parallel_ms, speedup, r.serial_obj, r.parallel_obj);
    sum_serial += r.serial_ms;
    sum_parallel += r.parallel_ms;
  }
  std::printf("\ntotal serial %.2f ms, total parallel %.2f ms, aggregate speedup %.2fx\n",
              sum_serial, sum_parallel, sum_parallel > 0.0 ? sum_serial / sum_parallel : 0.0);
  std::printf("objective agreement: %s\n", all_match ? "yes" : "NO");
  return all_match ? 0 : 2;
}
