#include "avopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace avopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropTol = 1e-13;   // multipliers below this skip row updates
constexpr double kPivotTol = 1e-9;   // minimum acceptable pivot magnitude
constexpr double kDegenTol = 1e-12;  // step sizes below this count as degenerate
}  // namespace

void LinearProgram::check_consistent() const {
  if (num_vars < 0) throw std::invalid_argument("lp: negative variable count");
  if (static_cast<int>(lower.size()) != num_vars || static_cast<int>(upper.size()) != num_vars ||
      static_cast<int>(objective.size()) != num_vars)
    throw std::invalid_argument("lp: bound/objective arrays must match num_vars");
  for (int c = 0; c < num_vars; ++c) {
    if (!std::isfinite(lower[c]) || std::isnan(upper[c]))
      throw std::invalid_argument("lp: bad bounds");
    if (upper[c] < lower[c]) throw std::invalid_argument("lp: upper bound below lower bound");
    if (!std::isfinite(objective[c])) throw std::invalid_argument("lp: bad objective coefficient");
  }
  for (const LpRow& r : rows) {
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("lp: bad right-hand side");
    for (const auto& [c, a] : r.coefficients) {
      if (c < 0 || c >= num_vars) throw std::invalid_argument("lp: row references unknown column");
      if (!std::isfinite(a)) throw std::invalid_argument("lp: bad row coefficient");
    }
  }
}

namespace {

// Dense bounded simplex working state. Columns: structurals, then one slack
// per inequality row, then phase-1 artificials. All variables are shifted to
// lower bound 0; nonbasic columns sit at value 0, and "complemented" columns
// stand for u - x so residence at the upper bound also reads as 0.
class Simplex {
 public:
  Simplex(const LinearProgram& p, const LpOptions& opt)
      : p_(p), opt_(opt), m_(static_cast<int>(p.rows.size())) {
    build();
  }

  LpOutcome run() {
    LpOutcome out;
    if (nart_ > 0) {
      // Phase 1: minimize the artificial sum.
      std::vector<double> c1(ncols_, 0.0);
      for (int c = ncols_ - nart_; c < ncols_; ++c) c1[c] = 1.0;
      load_costs(c1);
      if (!iterate(out.iterations, /*phase1=*/true))
        throw std::runtime_error("lp: phase 1 reported unbounded");
      double art_sum = 0.0;
      for (int r = 0; r < m_; ++r)
        if (basis_[r] >= ncols_ - nart_) art_sum += beta_[r];
      if (art_sum > opt_.feasibility_tol) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      // Artificials are pinned at zero from here on; basic ones may linger
      // at value 0 and get pivoted out by degenerate steps as needed.
      for (int c = ncols_ - nart_; c < ncols_; ++c) ub_[c] = 0.0;
    }
    // Phase 2: minimize the real objective.
    std::vector<double> c2(ncols_, 0.0);
    for (int c = 0; c < nv_; ++c) c2[c] = p_.objective[c];
    load_costs(c2);
    if (!iterate(out.iterations, /*phase1=*/false)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.values.assign(nv_, 0.0);
    std::vector<double> shifted(ncols_, 0.0);
    for (int c = 0; c < ncols_; ++c)
      if (state_[c] == kNonbasic && complemented_[c]) shifted[c] = ub_[c];
    for (int r = 0; r < m_; ++r) {
      const int c = basis_[r];
      shifted[c] = complemented_[c] ? ub_[c] - beta_[r] : beta_[r];
    }
    for (int c = 0; c < nv_; ++c) {
      out.values[c] = p_.lower[c] + shifted[c];
      out.objective += p_.objective[c] * out.values[c];
    }
    verify_feasible(out.values);
    return out;
  }

 private:
  static constexpr int kNonbasic = -1;

  void build() {
    nv_ = p_.num_vars;
    nslack_ = 0;
    for (const LpRow& r : p_.rows)
      if (r.sense != RowSense::Equal) ++nslack_;

    if (opt_.warn_on_conditioning) {
      double lo = kInf, hi = 0.0;
      for (const LpRow& r : p_.rows)
        for (const auto& [c, a] : r.coefficients) {
          const double mag = std::fabs(a);
          if (mag == 0.0) continue;
          lo = std::min(lo, mag);
          hi = std::max(hi, mag);
        }
      if (hi > 0.0 && hi / lo > 1e10)
        std::fprintf(stderr, "lp: warning: coefficient magnitude ratio %.3g may hurt accuracy\n",
                     hi / lo);
    }

    // Assemble shifted rows, normalize to nonnegative rhs, then start each
    // row from its slack when that slack can be basic, else an artificial.
    std::vector<std::vector<double>> dense(m_, std::vector<double>(nv_, 0.0));
    std::vector<double> rhs(m_, 0.0);
    std::vector<int> slack_col(m_, -1);
    std::vector<double> slack_coef(m_, 0.0);
    std::vector<char> needs_art(m_, 0);
    int next_slack = nv_;
    for (int r = 0; r < m_; ++r) {
      const LpRow& row = p_.rows[r];
      rhs[r] = row.rhs;
      for (const auto& [c, a] : row.coefficients) {
        dense[r][c] += a;
        rhs[r] -= a * p_.lower[c];
      }
      if (row.sense != RowSense::Equal) {
        slack_col[r] = next_slack++;
        slack_coef[r] = row.sense == RowSense::LessEq ? 1.0 : -1.0;
      }
    }
    nart_ = 0;
    for (int r = 0; r < m_; ++r) {
      if (rhs[r] < 0.0) {
        rhs[r] = -rhs[r];
        for (double& a : dense[r]) a = -a;
        slack_coef[r] = -slack_coef[r];
      }
      needs_art[r] = slack_col[r] < 0 || slack_coef[r] < 0.0;
      if (needs_art[r]) ++nart_;
    }
    ncols_ = nv_ + nslack_ + nart_;

    tab_.assign(static_cast<std::size_t>(m_) * ncols_, 0.0);
    beta_ = rhs;
    ub_.assign(ncols_, kInf);
    for (int c = 0; c < nv_; ++c) ub_[c] = p_.upper[c] - p_.lower[c];
    state_.assign(ncols_, kNonbasic);
    complemented_.assign(ncols_, 0);
    basis_.assign(m_, -1);
    int next_art = nv_ + nslack_;
    for (int r = 0; r < m_; ++r) {
      double* row = tab(r);
      std::copy(dense[r].begin(), dense[r].end(), row);
      if (slack_col[r] >= 0) row[slack_col[r]] = slack_coef[r];
      basis_[r] = needs_art[r] ? next_art++ : slack_col[r];
      if (needs_art[r]) row[basis_[r]] = 1.0;
      state_[basis_[r]] = r;
    }
  }

  double* tab(int r) { return tab_.data() + static_cast<std::size_t>(r) * ncols_; }
  const double* tab(int r) const { return tab_.data() + static_cast<std::size_t>(r) * ncols_; }

  void load_costs(const std::vector<double>& c) {
    d_ = c;
    for (int col = 0; col < ncols_; ++col)
      if (complemented_[col]) d_[col] = -d_[col];
    for (int r = 0; r < m_; ++r) {
      const double mult = d_[basis_[r]];
      if (std::fabs(mult) > kDropTol) {
        const double* row = tab(r);
        for (int col = 0; col < ncols_; ++col) d_[col] -= mult * row[col];
      }
      d_[basis_[r]] = 0.0;
    }
  }

  int price(bool phase1) const {
    const int art_from = ncols_ - nart_;
    if (bland_) {
      for (int c = 0; c < ncols_; ++c) {
        if (state_[c] != kNonbasic || ub_[c] <= 0.0) continue;
        if (!phase1 && c >= art_from) continue;
        if (d_[c] < -opt_.reduced_cost_tol) return c;
      }
      return -1;
    }
    int best = -1;
    double best_d = -opt_.reduced_cost_tol;
    for (int c = 0; c < ncols_; ++c) {
      if (state_[c] != kNonbasic || ub_[c] <= 0.0) continue;
      if (!phase1 && c >= art_from) continue;
      if (d_[c] < best_d) {  // strict: lowest column wins ties
        best_d = d_[c];
        best = c;
      }
    }
    return best;
  }

  // One simplex phase; returns false on an unbounded ray.
  bool iterate(long& iterations, bool phase1) {
    int degenerate_run = 0;
    for (;;) {
      if (++iterations > opt_.iteration_limit)
        throw std::runtime_error("lp: iteration limit exceeded");
      const int e = price(phase1);
      if (e < 0) return true;

      // Ratio test, pass 1: smallest blocking step over the rows.
      double row_min = kInf;
      for (int r = 0; r < m_; ++r) {
        const double a = tab(r)[e];
        if (a > kPivotTol) {
          row_min = std::min(row_min, std::max(beta_[r], 0.0) / a);
        } else if (a < -kPivotTol && ub_[basis_[r]] < kInf) {
          row_min = std::min(row_min, std::max(ub_[basis_[r]] - beta_[r], 0.0) / -a);
        }
      }

      if (ub_[e] <= row_min) {
        // Bound flip wins (also on ties): entering runs to its upper bound.
        if (ub_[e] == kInf) return false;
        if (ub_[e] < kDegenTol) {
          if (++degenerate_run >= opt_.bland_threshold) bland_ = true;
        } else {
          degenerate_run = 0;
        }
        bound_flip(e);
        continue;
      }

      // Pass 2: pick the leaving row among those within tolerance of the
      // minimum (lowest row index; lowest basis variable under Bland).
      int leave_row = -1;
      bool leave_at_upper = false;
      for (int r = 0; r < m_; ++r) {
        const double a = tab(r)[e];
        double cand;
        bool at_upper;
        if (a > kPivotTol) {
          cand = std::max(beta_[r], 0.0) / a;
          at_upper = false;
        } else if (a < -kPivotTol && ub_[basis_[r]] < kInf) {
          cand = std::max(ub_[basis_[r]] - beta_[r], 0.0) / -a;
          at_upper = true;
        } else {
          continue;
        }
        if (cand > row_min + kDegenTol) continue;
        if (leave_row < 0 || (bland_ && basis_[r] < basis_[leave_row])) {
          leave_row = r;
          leave_at_upper = at_upper;
        }
      }
      const double t = row_min;
      if (t < kDegenTol) {
        if (++degenerate_run >= opt_.bland_threshold) bland_ = true;
      } else {
        degenerate_run = 0;
      }

      const int lv = basis_[leave_row];
      for (int r = 0; r < m_; ++r)
        if (r != leave_row) beta_[r] -= t * tab(r)[e];
      beta_[leave_row] = t;
      pivot(leave_row, e);
      state_[lv] = kNonbasic;
      state_[e] = leave_row;
      basis_[leave_row] = e;
      if (leave_at_upper) complement_column(lv);
    }
  }

  void pivot(int prow, int e) {
    double* p = tab(prow);
    const double inv = 1.0 / p[e];
    for (int c = 0; c < ncols_; ++c) p[c] *= inv;
    p[e] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == prow) continue;
      double* row = tab(r);
      const double mult = row[e];
      if (std::fabs(mult) <= kDropTol) {
        row[e] = 0.0;
        continue;
      }
      for (int c = 0; c < ncols_; ++c) row[c] -= mult * p[c];
      row[e] = 0.0;
    }
    const double dmult = d_[e];
    if (std::fabs(dmult) > kDropTol)
      for (int c = 0; c < ncols_; ++c) d_[c] -= dmult * p[c];
    d_[e] = 0.0;
  }

  // Move a nonbasic column sitting at value 0 to its upper bound: the basic
  // values shift by -a*u, then the column is re-expressed so it reads 0 again.
  void bound_flip(int c) {
    const double u = ub_[c];
    if (u == kInf) throw std::logic_error("lp: bound-flipping an unbounded column");
    for (int r = 0; r < m_; ++r) {
      const double a = tab(r)[c];
      if (a != 0.0) beta_[r] -= a * u;
    }
    complement_column(c);
  }

  // Representation change only: substitute x = u - x~ so a column currently
  // AT its upper bound reads as 0. The stored basic values are already the
  // true ones, so beta must not move here.
  void complement_column(int c) {
    for (int r = 0; r < m_; ++r) {
      double* row = tab(r);
      row[c] = -row[c];
    }
    d_[c] = -d_[c];
    complemented_[c] ^= 1;
  }

  void verify_feasible(const std::vector<double>& x) const {
    for (const LpRow& row : p_.rows) {
      double lhs = 0.0;
      for (const auto& [c, a] : row.coefficients) lhs += a * x[c];
      const double viol = row.sense == RowSense::LessEq     ? lhs - row.rhs
                          : row.sense == RowSense::GreaterEq ? row.rhs - lhs
                                                              : std::fabs(lhs - row.rhs);
      if (viol > opt_.feasibility_tol * (1.0 + std::fabs(row.rhs)))
        throw std::runtime_error("lp: optimal point failed the feasibility recheck");
    }
  }

  const LinearProgram& p_;
  const LpOptions& opt_;
  int m_, nv_ = 0, nslack_ = 0, nart_ = 0, ncols_ = 0;
  std::vector<double> tab_, beta_, ub_, d_;
  std::vector<int> basis_, state_;
  std::vector<char> complemented_;
  bool bland_ = false;
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& program, const LpOptions& options) {
  program.check_consistent();
  Simplex s(program, options);
  return s.run();
}

LinearProgram relaxation_of(const MilpModel& model) {
  LinearProgram p;
  p.num_vars = model.vars.count();
  p.lower.assign(p.num_vars, 0.0);
  p.upper.assign(p.num_vars, kInf);
  for (int c = 0; c < model.vars.binary_count(); ++c) p.upper[c] = 1.0;
  p.rows.reserve(model.rows.size());
  for (const ModelRow& r : model.rows) p.rows.push_back({r.coefficients, r.sense, r.rhs});
  p.objective.assign(p.num_vars, 0.0);
  const double sign = model.objective_sense == ObjectiveSense::Maximize ? -1.0 : 1.0;
  for (const auto& [ord, c] : model.objective) p.objective[ord] += sign * c;
  return p;
}

}  // namespace avopt
