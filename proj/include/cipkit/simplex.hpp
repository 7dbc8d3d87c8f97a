// Copyright 2026 the cipkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CIPKIT_SIMPLEX_HPP_
#define CIPKIT_SIMPLEX_HPP_

#include <optional>
#include <vector>

#include "cipkit/problem.hpp"

namespace cipkit {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kNonbasicFree };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

/// Pure LP view: bounds, objective, and two-sided rows. Integrality is kept
/// so that cut derivation can tell integer columns apart, but the simplex
/// itself ignores it.
struct LpModel {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<LinRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  static LpModel from_problem(const Problem& p) {
    LpModel m;
    m.objective = p.objective;
    m.lower = p.lower;
    m.upper = p.upper;
    m.integer = p.integer;
    m.rows = p.rows;
    return m;
  }
};

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> x;              // structural values
  std::vector<double> duals;          // one multiplier per row
  std::vector<double> reduced_costs;  // structural columns then row slacks
  std::vector<VarStatus> basis;       // structural columns then row slacks
  double objective = 0.0;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

/// One tableau row of an optimal basis: the equation
///   x[basic_col] = value - sum_j coeff_j * (z_j - z_j_bar)
/// over the nonbasic columns j at their current values z_j_bar.
struct TableauRow {
  struct Entry {
    int col = 0;          // structural column, or num_vars + row for a slack
    double coeff = 0.0;
    VarStatus status = VarStatus::kAtLower;
    double value = 0.0;   // current nonbasic value
  };
  int basic_col = 0;
  double value = 0.0;     // current value of the basic variable
  std::vector<Entry> entries;
};

/// Dense bounded-variable primal simplex. Deterministic: Dantzig pricing with
/// smallest-index tie-breaking, switching to Bland's rule after a run of
/// degenerate pivots. The basis inverse is maintained by product-form updates
/// and refactorized every 50 pivots.
class Simplex {
 public:
  explicit Simplex(LpModel model, Tolerances tol = Tolerances{})
      : model_(std::move(model)), tol_(tol) {
    rebuild_structure();
  }

  const LpModel& model() const { return model_; }

  void set_objective(std::vector<double> obj) {
    model_.objective = std::move(obj);
    result_valid_ = false;
  }

  void set_bounds(int var, double lb, double ub) {
    model_.lower[static_cast<std::size_t>(var)] = lb;
    model_.upper[static_cast<std::size_t>(var)] = ub;
    result_valid_ = false;
  }

  /// Appends a row; its slack starts basic on the next solve.
  void add_row(LinRow row) {
    model_.rows.push_back(std::move(row));
    rebuild_structure();
    if (!status_.empty()) status_.insert(status_.begin() + n_ + m_ - 1, VarStatus::kBasic);
    result_valid_ = false;
  }

  /// Installs an external starting basis (structural then slack statuses).
  void set_warm_basis(const std::vector<VarStatus>& basis) {
    if (static_cast<int>(basis.size()) != n_ + m_) return;
    status_ = basis;
    arts_.clear();
    num_art_ = 0;
    result_valid_ = false;
  }

  LpResult solve(int iter_limit = 0) {
    if (iter_limit <= 0) iter_limit = 5000 + 100 * (n_ + m_);
    LpResult res;
    res.status = run(iter_limit, res.iterations);
    res.basis.assign(status_.begin(), status_.begin() + n_ + m_);
    res.x.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) res.x[static_cast<std::size_t>(j)] = values_[static_cast<std::size_t>(j)];
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j)
      res.objective += model_.objective[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    res.duals.assign(static_cast<std::size_t>(m_), 0.0);
    res.reduced_costs.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    if (res.status == LpStatus::kOptimal || res.status == LpStatus::kIterationLimit) {
      const std::vector<double> costs = phase2_costs();
      std::vector<double> y = btran_costs(costs);
      for (int i = 0; i < m_; ++i) res.duals[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)];
      for (int col = 0; col < n_ + m_; ++col)
        res.reduced_costs[static_cast<std::size_t>(col)] =
            status_[static_cast<std::size_t>(col)] == VarStatus::kBasic
                ? 0.0
                : reduced_cost(col, y, costs);
    }
    result_valid_ = res.status == LpStatus::kOptimal;
    return res;
  }

  /// Tableau row of a basic column; throws if the column is not basic.
  TableauRow tableau_row(int col) const {
    if (!result_valid_) throw std::logic_error("tableau_row requires an optimal solve");
    if (col < 0 || col >= n_ + m_ || status_[static_cast<std::size_t>(col)] != VarStatus::kBasic)
      throw std::invalid_argument("tableau_row: column is not basic");
    int row = -1;
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] == col) { row = i; break; }
    TableauRow out;
    out.basic_col = col;
    out.value = values_[static_cast<std::size_t>(col)];
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[static_cast<std::size_t>(j)] == VarStatus::kBasic || j == col) continue;
      double a = 0.0;
      for_column(j, [&](int r, double v) { a += binv_at(row, r) * v; });
      if (std::abs(a) > 1e-11)
        out.entries.push_back({j, a, status_[static_cast<std::size_t>(j)],
                               values_[static_cast<std::size_t>(j)]});
    }
    return out;
  }

  /// Current basis statuses for structural and slack columns.
  std::vector<VarStatus> basis_snapshot() const {
    if (status_.empty()) return {};
    return std::vector<VarStatus>(status_.begin(), status_.begin() + n_ + m_);
  }

 private:
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kFeasTol = 1e-7;
  static constexpr double kCostTol = 1e-9;
  static constexpr int kRefactorEvery = 50;

  LpModel model_;
  Tolerances tol_;
  int n_ = 0;  // structural columns
  int m_ = 0;  // rows (slack columns)
  std::vector<SparseVector> cols_;  // structural columns over rows
  // artificial columns, appended after slacks: (row, sign)
  std::vector<std::pair<int, int>> arts_;
  int num_art_ = 0;

  std::vector<VarStatus> status_;  // per column
  std::vector<double> values_;     // per column
  std::vector<int> basis_;         // column per row
  std::vector<double> binv_;       // dense m x m, row-major
  bool result_valid_ = false;

  double binv_at(int i, int j) const {
    return binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                 static_cast<std::size_t>(j)];
  }
  double& binv_at(int i, int j) {
    return binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                 static_cast<std::size_t>(j)];
  }

  void rebuild_structure() {
    n_ = model_.num_vars();
    m_ = model_.num_rows();
    cols_.assign(static_cast<std::size_t>(n_), {});
    for (int i = 0; i < m_; ++i)
      for (const auto& e : model_.rows[static_cast<std::size_t>(i)].coeffs)
        cols_[static_cast<std::size_t>(e.index)].push_back({i, e.value});
  }

  int num_cols() const { return n_ + m_ + num_art_; }

  double col_lower(int col) const {
    if (col < n_) return model_.lower[static_cast<std::size_t>(col)];
    if (col < n_ + m_) return model_.rows[static_cast<std::size_t>(col - n_)].lhs;
    return 0.0;
  }
  double col_upper(int col) const {
    if (col < n_) return model_.upper[static_cast<std::size_t>(col)];
    if (col < n_ + m_) return model_.rows[static_cast<std::size_t>(col - n_)].rhs;
    return art_fixed_ ? 0.0 : kInfinity;
  }

  template <typename F>
  void for_column(int col, F&& f) const {
    if (col < n_) {
      for (const auto& e : cols_[static_cast<std::size_t>(col)]) f(e.index, e.value);
    } else if (col < n_ + m_) {
      f(col - n_, -1.0);
    } else {
      const auto& a = arts_[static_cast<std::size_t>(col - n_ - m_)];
      f(a.first, static_cast<double>(a.second));
    }
  }

  std::vector<double> phase2_costs() const {
    std::vector<double> c(static_cast<std::size_t>(num_cols()), 0.0);
    for (int j = 0; j < n_; ++j) c[static_cast<std::size_t>(j)] = model_.objective[static_cast<std::size_t>(j)];
    return c;
  }

  std::vector<double> phase1_costs() const {
    std::vector<double> c(static_cast<std::size_t>(num_cols()), 0.0);
    for (int k = 0; k < num_art_; ++k) c[static_cast<std::size_t>(n_ + m_ + k)] = 1.0;
    return c;
  }

  bool art_fixed_ = false;  // artificial columns pinned to [0,0] after phase 1

  // Default nonbasic placement: finite lower preferred, then finite upper.
  VarStatus default_status(int col) const {
    const double lb = col_lower(col), ub = col_upper(col);
    if (is_finite_value(lb)) return VarStatus::kAtLower;
    if (is_finite_value(ub)) return VarStatus::kAtUpper;
    return VarStatus::kNonbasicFree;
  }

  double nonbasic_value(int col) const {
    switch (status_[static_cast<std::size_t>(col)]) {
      case VarStatus::kAtLower: return col_lower(col);
      case VarStatus::kAtUpper: return col_upper(col);
      default: return 0.0;
    }
  }

  bool refactorize() {
    std::vector<double> B(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i)
      for_column(basis_[static_cast<std::size_t>(i)], [&](int r, double v) {
        B[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) +
          static_cast<std::size_t>(i)] = v;
      });
    // Gauss-Jordan with partial pivoting
    binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) binv_at(i, i) = 1.0;
    for (int k = 0; k < m_; ++k) {
      int piv = k;
      double best = std::abs(B[static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
                               static_cast<std::size_t>(k)]);
      for (int i = k + 1; i < m_; ++i) {
        const double v = std::abs(B[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                                    static_cast<std::size_t>(k)]);
        if (v > best) { best = v; piv = i; }
      }
      if (best < 1e-11) return false;
      if (piv != k) {
        for (int j = 0; j < m_; ++j) {
          std::swap(B[static_cast<std::size_t>(piv) * static_cast<std::size_t>(m_) +
                      static_cast<std::size_t>(j)],
                    B[static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
                      static_cast<std::size_t>(j)]);
          std::swap(binv_at(piv, j), binv_at(k, j));
        }
      }
      const double d = B[static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
                         static_cast<std::size_t>(k)];
      for (int j = 0; j < m_; ++j) {
        B[static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
          static_cast<std::size_t>(j)] /= d;
        binv_at(k, j) /= d;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == k) continue;
        const double f = B[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                           static_cast<std::size_t>(k)];
        if (f == 0.0) continue;
        for (int j = 0; j < m_; ++j) {
          B[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
            static_cast<std::size_t>(j)] -=
              f * B[static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
                    static_cast<std::size_t>(j)];
          binv_at(i, j) -= f * binv_at(k, j);
        }
      }
    }
    return true;
  }

  void compute_basic_values() {
    std::vector<double> r(static_cast<std::size_t>(m_), 0.0);
    for (int col = 0; col < num_cols(); ++col) {
      if (status_[static_cast<std::size_t>(col)] == VarStatus::kBasic) continue;
      const double v = nonbasic_value(col);
      values_[static_cast<std::size_t>(col)] = v;
      if (v == 0.0) continue;
      for_column(col, [&](int row, double a) { r[static_cast<std::size_t>(row)] += a * v; });
    }
    for (int i = 0; i < m_; ++i) {
      double xb = 0.0;
      for (int j = 0; j < m_; ++j) xb -= binv_at(i, j) * r[static_cast<std::size_t>(j)];
      values_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = xb;
    }
  }

  std::vector<double> btran_costs(const std::vector<double>& costs) const {
    std::vector<double> y(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = costs[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      for (int j = 0; j < m_; ++j) y[static_cast<std::size_t>(j)] += cb * binv_at(i, j);
    }
    return y;
  }

  double reduced_cost(int col, const std::vector<double>& y,
                      const std::vector<double>& costs) const {
    double rc = costs[static_cast<std::size_t>(col)];
    for_column(col, [&](int row, double a) { rc -= y[static_cast<std::size_t>(row)] * a; });
    return rc;
  }

  std::vector<double> ftran(int col) const {
    std::vector<double> w(static_cast<std::size_t>(m_), 0.0);
    for_column(col, [&](int row, double a) {
      for (int i = 0; i < m_; ++i) w[static_cast<std::size_t>(i)] += binv_at(i, row) * a;
    });
    return w;
  }

  void eta_update(int pivot_row, const std::vector<double>& w) {
    const double piv = w[static_cast<std::size_t>(pivot_row)];
    for (int j = 0; j < m_; ++j) binv_at(pivot_row, j) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == pivot_row) continue;
      const double f = w[static_cast<std::size_t>(i)];
      if (f == 0.0) continue;
      for (int j = 0; j < m_; ++j) binv_at(i, j) -= f * binv_at(pivot_row, j);
    }
  }

  bool basics_feasible() const {
    for (int i = 0; i < m_; ++i) {
      const int col = basis_[static_cast<std::size_t>(i)];
      const double v = values_[static_cast<std::size_t>(col)];
      if (is_finite_value(col_lower(col)) && v < col_lower(col) - kFeasTol) return false;
      if (is_finite_value(col_upper(col)) && v > col_upper(col) + kFeasTol) return false;
    }
    return true;
  }

  // Installs the all-slack starting basis, clamping violated slacks to their
  // nearest bound and covering the residual with one artificial per row.
  void cold_start() {
    arts_.clear();
    num_art_ = 0;
    art_fixed_ = false;
    status_.assign(static_cast<std::size_t>(n_ + m_), VarStatus::kAtLower);
    for (int j = 0; j < n_; ++j) status_[static_cast<std::size_t>(j)] = default_status(j);
    values_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    basis_.assign(static_cast<std::size_t>(m_), 0);
    std::vector<double> activity(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_; ++j) {
      status_[static_cast<std::size_t>(j)] = default_status(j);
      const double v = status_[static_cast<std::size_t>(j)] == VarStatus::kAtLower
                           ? col_lower(j)
                           : status_[static_cast<std::size_t>(j)] == VarStatus::kAtUpper
                                 ? col_upper(j)
                                 : 0.0;
      values_[static_cast<std::size_t>(j)] = v;
      if (v != 0.0)
        for (const auto& e : cols_[static_cast<std::size_t>(j)])
          activity[static_cast<std::size_t>(e.index)] += e.value * v;
    }
    for (int i = 0; i < m_; ++i) {
      const int scol = n_ + i;
      const double act = activity[static_cast<std::size_t>(i)];
      const double lb = col_lower(scol), ub = col_upper(scol);
      if ((!is_finite_value(lb) || act >= lb - kFeasTol) &&
          (!is_finite_value(ub) || act <= ub + kFeasTol)) {
        basis_[static_cast<std::size_t>(i)] = scol;
        status_[static_cast<std::size_t>(scol)] = VarStatus::kBasic;
        values_[static_cast<std::size_t>(scol)] = act;
      } else {
        const double clamp = act > ub ? ub : lb;
        status_[static_cast<std::size_t>(scol)] =
            act > ub ? VarStatus::kAtUpper : VarStatus::kAtLower;
        values_[static_cast<std::size_t>(scol)] = clamp;
        const double residual = act - clamp;  // a.x - s must vanish
        const int sign = residual > 0.0 ? -1 : 1;
        arts_.push_back({i, sign});
        const int acol = n_ + m_ + num_art_;
        ++num_art_;
        status_.push_back(VarStatus::kBasic);
        values_.push_back(std::abs(residual));
        basis_[static_cast<std::size_t>(i)] = acol;
      }
    }
  }

  // Attempts to reuse the stored statuses; falls back to a cold start when the
  // implied basis is singular or primal infeasible.
  bool warm_start() {
    if (static_cast<int>(status_.size()) < n_ + m_) return false;
    // stale artificial columns from a previous solve can only be dropped if
    // none of them is still basic
    for (std::size_t k = static_cast<std::size_t>(n_ + m_); k < status_.size(); ++k)
      if (status_[k] == VarStatus::kBasic) return false;
    status_.resize(static_cast<std::size_t>(n_ + m_));
    basis_.clear();
    std::vector<int> basic_cols;
    for (int col = 0; col < n_ + m_; ++col)
      if (status_[static_cast<std::size_t>(col)] == VarStatus::kBasic) basic_cols.push_back(col);
    if (static_cast<int>(basic_cols.size()) != m_) return false;
    basis_ = basic_cols;
    arts_.clear();
    num_art_ = 0;
    art_fixed_ = false;
    // repair nonbasic statuses that no longer match finite bounds
    for (int col = 0; col < n_ + m_; ++col) {
      auto& st = status_[static_cast<std::size_t>(col)];
      if (st == VarStatus::kBasic) continue;
      if (st == VarStatus::kAtLower && !is_finite_value(col_lower(col))) st = default_status(col);
      if (st == VarStatus::kAtUpper && !is_finite_value(col_upper(col))) st = default_status(col);
    }
    values_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    if (!refactorize()) return false;
    compute_basic_values();
    return basics_feasible();
  }

  LpStatus run(int iter_limit, int& iterations) {
    iterations = 0;
    if (m_ == 0) return solve_bounds_only();
    const bool warm_ok = status_.empty() ? false : warm_start();
    if (!warm_ok) {
      cold_start();
      if (!refactorize()) return LpStatus::kNumericalFailure;
      compute_basic_values();
      if (num_art_ > 0) {
        const LpStatus ph1 = iterate(phase1_costs(), iter_limit, iterations, true);
        if (ph1 != LpStatus::kOptimal) return ph1;
        double art_sum = 0.0;
        for (int k = 0; k < num_art_; ++k)
          art_sum += std::abs(values_[static_cast<std::size_t>(n_ + m_ + k)]);
        if (art_sum > tol_.feasibility) return LpStatus::kInfeasible;
        art_fixed_ = true;
        pivot_out_artificials();
      }
    }
    const LpStatus ph2 = iterate(phase2_costs(), iter_limit, iterations, false);
    return ph2;
  }

  LpStatus solve_bounds_only() {
    status_.assign(static_cast<std::size_t>(n_), VarStatus::kAtLower);
    values_.assign(static_cast<std::size_t>(n_), 0.0);
    basis_.clear();
    binv_.clear();
    arts_.clear();
    num_art_ = 0;
    for (int j = 0; j < n_; ++j) {
      const double c = model_.objective[static_cast<std::size_t>(j)];
      const double lb = col_lower(j), ub = col_upper(j);
      if (lb > ub) return LpStatus::kInfeasible;
      if (c > kCostTol) {
        if (!is_finite_value(lb)) return LpStatus::kUnbounded;
        status_[static_cast<std::size_t>(j)] = VarStatus::kAtLower;
      } else if (c < -kCostTol) {
        if (!is_finite_value(ub)) return LpStatus::kUnbounded;
        status_[static_cast<std::size_t>(j)] = VarStatus::kAtUpper;
      } else {
        status_[static_cast<std::size_t>(j)] = default_status(j);
      }
      values_[static_cast<std::size_t>(j)] = nonbasic_value(j);
    }
    return LpStatus::kOptimal;
  }

  void pivot_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      const int col = basis_[static_cast<std::size_t>(i)];
      if (col < n_ + m_) continue;
      // try a degenerate exchange with any usable nonbasic column
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[static_cast<std::size_t>(j)] == VarStatus::kBasic) continue;
        std::vector<double> w = ftran(j);
        if (std::abs(w[static_cast<std::size_t>(i)]) < 1e-7) continue;
        status_[static_cast<std::size_t>(col)] = VarStatus::kAtLower;
        values_[static_cast<std::size_t>(col)] = 0.0;
        status_[static_cast<std::size_t>(j)] = VarStatus::kBasic;
        basis_[static_cast<std::size_t>(i)] = j;
        eta_update(i, w);
        compute_basic_values();
        break;
      }
      // a row spanned only by its artificial is redundant; the artificial
      // stays basic at zero with fixed bounds, which is harmless
    }
  }

  LpStatus iterate(const std::vector<double>& costs, int iter_limit, int& iterations,
                   bool phase1) {
    int pivots_since_refactor = 0;
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations >= iter_limit) return LpStatus::kIterationLimit;
      std::vector<double> y = btran_costs(costs);
      int entering = -1;
      int dir = +1;
      double best_score = kCostTol;
      for (int col = 0; col < num_cols(); ++col) {
        const auto st = status_[static_cast<std::size_t>(col)];
        if (st == VarStatus::kBasic) continue;
        const double lb = col_lower(col), ub = col_upper(col);
        if (lb == ub && is_finite_value(lb)) continue;  // fixed column
        const double rc = reduced_cost(col, y, costs);
        int d = 0;
        if (st == VarStatus::kAtLower && rc < -kCostTol) d = +1;
        else if (st == VarStatus::kAtUpper && rc > kCostTol) d = -1;
        else if (st == VarStatus::kNonbasicFree && std::abs(rc) > kCostTol)
          d = rc < 0.0 ? +1 : -1;
        if (d == 0) continue;
        if (bland) { entering = col; dir = d; break; }
        if (std::abs(rc) > best_score) {
          best_score = std::abs(rc);
          entering = col;
          dir = d;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;

      std::vector<double> w = ftran(entering);
      // ratio test: x_B(theta) = x_B - theta * dir * w
      double theta = kInfinity;
      int leave_row = -1;
      bool leave_to_upper = false;
      {
        const double lb = col_lower(entering), ub = col_upper(entering);
        if (is_finite_value(lb) && is_finite_value(ub)) theta = ub - lb;
      }
      for (int i = 0; i < m_; ++i) {
        const double delta = dir * w[static_cast<std::size_t>(i)];
        if (std::abs(delta) < kPivotTol) continue;
        const int bcol = basis_[static_cast<std::size_t>(i)];
        const double v = values_[static_cast<std::size_t>(bcol)];
        double limit = kInfinity;
        bool to_upper = false;
        if (delta > 0.0) {
          const double lb = col_lower(bcol);
          if (is_finite_value(lb)) limit = (v - lb) / delta;
        } else {
          const double ub = col_upper(bcol);
          if (is_finite_value(ub)) { limit = (ub - v) / (-delta); to_upper = true; }
        }
        if (limit < -1e-9) limit = 0.0;
        if (limit < theta - 1e-12 ||
            (limit < theta + 1e-12 && leave_row >= 0 &&
             bcol < basis_[static_cast<std::size_t>(leave_row)])) {
          theta = std::max(limit, 0.0);
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (!is_finite_value(theta) && leave_row < 0)
        return phase1 ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;

      ++iterations;
      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
      bland = degenerate_run > 200;

      // apply step
      for (int i = 0; i < m_; ++i) {
        const int bcol = basis_[static_cast<std::size_t>(i)];
        values_[static_cast<std::size_t>(bcol)] -= theta * dir * w[static_cast<std::size_t>(i)];
      }
      values_[static_cast<std::size_t>(entering)] += dir * theta;

      if (leave_row < 0) {
        // entering flips to its opposite bound
        status_[static_cast<std::size_t>(entering)] =
            dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        values_[static_cast<std::size_t>(entering)] =
            dir > 0 ? col_upper(entering) : col_lower(entering);
        continue;
      }
      const int leaving = basis_[static_cast<std::size_t>(leave_row)];
      status_[static_cast<std::size_t>(leaving)] =
          leave_to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
      values_[static_cast<std::size_t>(leaving)] =
          leave_to_upper ? col_upper(leaving) : col_lower(leaving);
      status_[static_cast<std::size_t>(entering)] = VarStatus::kBasic;
      basis_[static_cast<std::size_t>(leave_row)] = entering;
      eta_update(leave_row, w);

      if (++pivots_since_refactor >= kRefactorEvery) {
        if (!refactorize()) return LpStatus::kNumericalFailure;
        compute_basic_values();
        pivots_since_refactor = 0;
      }
    }
  }
};

/// Convenience wrapper: one-shot solve of a problem's LP relaxation.
inline LpResult solve_lp(const Problem& p, int iter_limit = 0) {
  Simplex s(LpModel::from_problem(p));
  return s.solve(iter_limit);
}

/// Fraction of nonbasic columns with reduced cost within the zero tolerance.
/// High values indicate many alternative optimal bases.
inline double dual_degeneracy(const LpResult& result, const Tolerances& tol = Tolerances{}) {
  if (!result.optimal()) throw std::invalid_argument("dual_degeneracy requires an optimal LP");
  int nonbasic = 0, degenerate = 0;
  for (std::size_t j = 0; j < result.basis.size(); ++j) {
    if (result.basis[j] == VarStatus::kBasic) continue;
    ++nonbasic;
    if (std::abs(result.reduced_costs[j]) <= tol.zero) ++degenerate;
  }
  if (nonbasic == 0) return 0.0;
  return static_cast<double>(degenerate) / static_cast<double>(nonbasic);
}

}  // namespace cipkit

#endif  // CIPKIT_SIMPLEX_HPP_
