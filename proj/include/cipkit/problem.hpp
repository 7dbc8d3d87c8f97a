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

#ifndef CIPKIT_PROBLEM_HPP_
#define CIPKIT_PROBLEM_HPP_

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "cipkit/core.hpp"

namespace cipkit {

enum class Sense { kMinimize, kMaximize };

/// Two-sided linear row lhs <= a.x <= rhs. One-sided rows use an infinite
/// side; coefficients are stored sparse with strictly increasing indices.
struct LinRow {
  std::string name;
  SparseVector coeffs;
  double lhs = -kInfinity;
  double rhs = kInfinity;

  double activity(const std::vector<double>& x) const { return sparse_dot(coeffs, x); }
};

/// Indicator constraint z = 0 -> x <= 0 with activation bound ell > 0 used by
/// the semi-continuous reformulation (the companion row ell*z <= x is an
/// ordinary LinRow of the instance).
struct IndicatorCons {
  int binvar = -1;
  int var = -1;
  double activation = 0.0;  // ell
};

/// Signomial equality t = prod x_j^alpha_j over a positive box.
struct SignomialTerm {
  int tvar = -1;
  std::vector<int> vars;
  std::vector<double> exponents;
};

struct Solution {
  std::vector<double> values;
  double objective = 0.0;
};

class Problem {
 public:
  std::string name = "problem";
  int num_vars = 0;
  std::vector<std::string> var_names;
  std::vector<double> objective;       // always minimization internally
  Sense original_sense = Sense::kMinimize;
  bool sense_flipped = false;          // true when a max objective was negated
  std::vector<LinRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<IndicatorCons> indicators;
  std::vector<SignomialTerm> signomials;

  int add_var(const std::string& vname, double lb = 0.0, double ub = kInfinity,
              bool is_int = false, double obj = 0.0) {
    var_names.push_back(vname);
    lower.push_back(lb);
    upper.push_back(ub);
    integer.push_back(is_int);
    objective.push_back(obj);
    return num_vars++;
  }

  void add_row(LinRow row) {
    row.coeffs = canonicalize(std::move(row.coeffs));
    rows.push_back(std::move(row));
  }

  bool is_binary(int j) const {
    return integer[static_cast<std::size_t>(j)] && lower[static_cast<std::size_t>(j)] >= -1e-9 &&
           upper[static_cast<std::size_t>(j)] <= 1.0 + 1e-9;
  }

  std::vector<int> integer_indices() const {
    std::vector<int> idx;
    for (int j = 0; j < num_vars; ++j)
      if (integer[static_cast<std::size_t>(j)]) idx.push_back(j);
    return idx;
  }

  /// Reported objective in the instance's original sense.
  double external_objective(double internal_obj) const {
    return sense_flipped ? -internal_obj : internal_obj;
  }

  /// Normalizes a max objective to internal minimization, recording the flip.
  void normalize_sense(Sense sense) {
    original_sense = sense;
    if (sense == Sense::kMaximize) {
      sense_flipped = true;
      for (double& c : objective) c = -c;
    }
  }

  void validate() const {
    for (int j = 0; j < num_vars; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (lower[u] > upper[u])
        throw std::invalid_argument("variable " + var_names[u] + ": lower bound exceeds upper");
      if (lower[u] >= kInfinity || upper[u] <= -kInfinity)
        throw std::invalid_argument("variable " + var_names[u] + " fixed to +/-infinity");
    }
    for (const auto& row : rows) {
      if (row.lhs > row.rhs)
        throw std::invalid_argument("row " + row.name + ": lhs exceeds rhs");
      for (std::size_t k = 0; k < row.coeffs.size(); ++k) {
        if (row.coeffs[k].index < 0 || row.coeffs[k].index >= num_vars)
          throw std::invalid_argument("row " + row.name + ": variable index out of range");
        if (k > 0 && row.coeffs[k - 1].index >= row.coeffs[k].index)
          throw std::invalid_argument("row " + row.name + ": indices not strictly increasing");
        if (row.coeffs[k].value == 0.0)
          throw std::invalid_argument("row " + row.name + ": stored zero coefficient");
      }
    }
    for (const auto& ind : indicators) {
      if (ind.binvar < 0 || ind.binvar >= num_vars || ind.var < 0 || ind.var >= num_vars)
        throw std::invalid_argument("indicator references unknown variable");
      if (!is_binary(ind.binvar))
        throw std::invalid_argument("indicator variable " +
                                    var_names[static_cast<std::size_t>(ind.binvar)] +
                                    " is not binary");
      if (ind.activation <= 0.0)
        throw std::invalid_argument("indicator activation bound must be positive");
    }
  }
};

inline double objective_value(const Problem& p, const std::vector<double>& x) {
  double s = 0.0;
  for (int j = 0; j < p.num_vars; ++j)
    s += p.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  return s;
}

/// One violated fact of a feasibility check.
struct Violation {
  enum class Kind { kRow, kBound, kIntegrality, kIndicator };
  Kind kind;
  int index;        // row / variable / indicator index
  double magnitude; // amount by which the constraint is violated
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  double max_violation = 0.0;

  bool feasible() const { return violations.empty(); }

  void add(Violation v) {
    max_violation = std::max(max_violation, v.magnitude);
    violations.push_back(v);
  }
};

/// Reports every violated row, bound, integrality, and indicator condition.
/// An indicator is violated iff s[z] <= eps_int and s[x] > eps_feas.
inline FeasibilityReport check_feasible(const Problem& p, const Solution& s,
                                        const Tolerances& tol = Tolerances{}) {
  FeasibilityReport report;
  if (static_cast<int>(s.values.size()) != p.num_vars)
    throw std::invalid_argument("solution length does not match variable count");
  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double v = s.values[u];
    double viol = 0.0;
    if (is_finite_value(p.lower[u])) viol = std::max(viol, p.lower[u] - v);
    if (is_finite_value(p.upper[u])) viol = std::max(viol, v - p.upper[u]);
    if (viol > tol.feasibility)
      report.add({Violation::Kind::kBound, j, viol});
    if (p.integer[u] && !is_integral(v, tol.integrality))
      report.add({Violation::Kind::kIntegrality, j, std::abs(v - std::round(v))});
  }
  for (int i = 0; i < static_cast<int>(p.rows.size()); ++i) {
    const LinRow& row = p.rows[static_cast<std::size_t>(i)];
    const double a = row.activity(s.values);
    double viol = 0.0;
    if (is_finite_value(row.lhs)) viol = std::max(viol, row.lhs - a);
    if (is_finite_value(row.rhs)) viol = std::max(viol, a - row.rhs);
    if (viol > tol.feasibility) report.add({Violation::Kind::kRow, i, viol});
  }
  for (int i = 0; i < static_cast<int>(p.indicators.size()); ++i) {
    const IndicatorCons& ind = p.indicators[static_cast<std::size_t>(i)];
    const double z = s.values[static_cast<std::size_t>(ind.binvar)];
    const double x = s.values[static_cast<std::size_t>(ind.var)];
    if (z <= tol.integrality && x > tol.feasibility)
      report.add({Violation::Kind::kIndicator, i, x});
  }
  return report;
}

}  // namespace cipkit

#endif  // CIPKIT_PROBLEM_HPP_
