#include "avopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace avopt {

namespace {

std::string arc_label(int v, int k, int i, int j) {
  return "(v=" + std::to_string(v) + ", k=" + std::to_string(k) +
         ", i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
}

}  // namespace

Scenario::Scenario(int n, int w, double epsilon, DefuzzSpec defuzz,
                   std::vector<double> endurance,
                   std::vector<std::array<double, 3>> task_weights)
    : n_(n), w_(w), epsilon_(epsilon), defuzz_(defuzz),
      endurance_(std::move(endurance)), task_weights_(std::move(task_weights)) {
  if (n_ < 1) throw std::invalid_argument("scenario: n must be at least 1");
  if (w_ <= n_) throw std::invalid_argument("scenario: w must exceed n");
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_))
    throw std::invalid_argument("scenario: epsilon must be positive");
  defuzz_.validate();
  if (static_cast<int>(endurance_.size()) != w_)
    throw std::invalid_argument("scenario: endurance must list one value per vehicle");
  for (double t : endurance_)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("scenario: endurance values must be positive");
  if (static_cast<int>(task_weights_.size()) != n_)
    throw std::invalid_argument("scenario: task weights must list one triple per target");
  for (const auto& row : task_weights_)
    for (double c : row)
      if (c < 0.0 || !std::isfinite(c))
        throw std::invalid_argument("scenario: task weights must be non-negative");
  const std::size_t cells =
      static_cast<std::size_t>(w_) * kNumTasks * (n_ + w_) * n_;
  table_.resize(cells);
  present_.assign(cells, 0);
}

int Scenario::source_of(int v) const {
  if (v < 1 || v > w_) throw std::invalid_argument("scenario: vehicle index out of range");
  return n_ + v;
}

double Scenario::endurance_of(int v) const {
  if (v < 1 || v > w_) throw std::invalid_argument("scenario: vehicle index out of range");
  return endurance_[v - 1];
}

double Scenario::max_endurance() const {
  return *std::max_element(endurance_.begin(), endurance_.end());
}

double Scenario::big_m() const { return w_ * max_endurance(); }

double Scenario::task_weight(int j, int k) const {
  if (j < 1 || j > n_ || k < 1 || k > kNumTasks)
    throw std::invalid_argument("scenario: task weight index out of range");
  return task_weights_[j - 1][k - 1];
}

bool Scenario::arc_admissible(int v, int k, int i, int j) const {
  if (v < 1 || v > w_ || k < 1 || k > kNumTasks) return false;
  if (j < 1 || j > n_) return false;
  if (i < 1 || i > n_ + w_) return false;
  if (i > n_ && i != n_ + v) return false;  // foreign source rows do not exist
  if (i == j && k != kAttack) return false;
  return true;
}

int Scenario::table_index(int v, int k, int i, int j) const {
  if (!arc_admissible(v, k, i, j)) return -1;
  return ((((v - 1) * kNumTasks + (k - 1)) * (n_ + w_)) + (i - 1)) * n_ + (j - 1);
}

int Scenario::checked_index(int v, int k, int i, int j, const char* op) const {
  const int idx = table_index(v, k, i, j);
  if (idx < 0)
    throw std::invalid_argument(std::string(op) + ": inadmissible arc " + arc_label(v, k, i, j));
  return idx;
}

void Scenario::set_flight_time(int v, int k, int i, int j, const TriangularFuzzyNumber& t) {
  if (finalized_) throw std::logic_error("scenario: table is frozen after finalize");
  const int idx = checked_index(v, k, i, j, "set_flight_time");
  if (present_[idx])
    throw std::invalid_argument("set_flight_time: duplicate entry for arc " + arc_label(v, k, i, j));
  t.validate(/*require_nonnegative=*/true);
  table_[idx] = t;
  present_[idx] = 1;
}

bool Scenario::has_flight_time(int v, int k, int i, int j) const {
  const int idx = table_index(v, k, i, j);
  return idx >= 0 && present_[idx];
}

void Scenario::finalize() {
  if (finalized_) return;
  for (int v = 1; v <= w_; ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= n_ + w_; ++i)
        for (int j = 1; j <= n_; ++j) {
          if (!arc_admissible(v, k, i, j)) continue;
          if (!present_[table_index(v, k, i, j)])
            throw std::invalid_argument("scenario: flight time missing for arc " +
                                        arc_label(v, k, i, j));
        }
  crisp_.resize(table_.size(), 0.0);
  for (std::size_t idx = 0; idx < table_.size(); ++idx)
    if (present_[idx]) crisp_[idx] = defuzzify(table_[idx], defuzz_);
  finalized_ = true;
}

const TriangularFuzzyNumber& Scenario::fuzzy_flight_time(int v, int k, int i, int j) const {
  const int idx = checked_index(v, k, i, j, "fuzzy_flight_time");
  if (!present_[idx])
    throw std::logic_error("fuzzy_flight_time: entry not set for arc " + arc_label(v, k, i, j));
  return table_[idx];
}

double Scenario::flight_time(int v, int k, int i, int j) const {
  if (!finalized_) throw std::logic_error("flight_time: scenario not finalized");
  return crisp_[checked_index(v, k, i, j, "flight_time")];
}

Scenario make_random_scenario(std::uint64_t seed, int n, int w) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time_dist(0.1, 10.0);
  Scenario s(n, w, 0.1, DefuzzSpec{}, std::vector<double>(w, 100.0),
             std::vector<std::array<double, 3>>(n, {0.1, 0.1, 0.1}));
  // Draw order (v, k, i, j) is part of the generator contract; a given seed
  // always yields the same table.
  for (int v = 1; v <= w; ++v)
    for (int k = 1; k <= kNumTasks; ++k)
      for (int i = 1; i <= n + w; ++i)
        for (int j = 1; j <= n; ++j)
          if (s.arc_admissible(v, k, i, j))
            s.set_flight_time(v, k, i, j, TriangularFuzzyNumber::crisp(time_dist(rng)));
  s.finalize();
  return s;
}

}  // namespace avopt
