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

#ifndef CIPKIT_CUTS_HPP_
#define CIPKIT_CUTS_HPP_

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "cipkit/simplex.hpp"

namespace cipkit {

enum class CutOrigin { kGmi, kSst, kSignomial, kUser };

/// Linear inequality coeffs . x <= rhs over structural variables.
struct Cut {
  SparseVector coeffs;
  double rhs = 0.0;
  CutOrigin origin = CutOrigin::kUser;
  int source_var = -1;  // fractional basic variable for GMI cuts
  double efficacy = 0.0;
  double density = 0.0;
  bool local = false;
};

/// Elementary split pi . x <= pi0  or  pi . x >= pi0 + 1 with pi = e_i.
struct SplitDisjunction {
  SparseVector pi;
  long long pi0 = 0;
};

/// Euclidean distance by which the cut separates x from its feasible side;
/// positive iff x violates the cut.
inline double efficacy(const Cut& cut, const std::vector<double>& x) {
  const double norm = sparse_norm2(cut.coeffs);
  if (norm <= 0.0) throw std::invalid_argument("efficacy: cut has zero norm");
  return (sparse_dot(cut.coeffs, x) - cut.rhs) / norm;
}

/// The split of the branching dichotomy on variable i at the point x.
inline SplitDisjunction elementary_split(int i, const std::vector<double>& x,
                                         const std::vector<bool>& integer,
                                         const Tolerances& tol = Tolerances{}) {
  if (i < 0 || i >= static_cast<int>(integer.size()) || !integer[static_cast<std::size_t>(i)])
    throw std::invalid_argument("elementary_split: variable is not integer");
  const double v = x[static_cast<std::size_t>(i)];
  if (is_integral(v, tol.integrality))
    throw std::invalid_argument("elementary_split: value is integral");
  SplitDisjunction d;
  d.pi.push_back({i, 1.0});
  d.pi0 = static_cast<long long>(std::floor(v));
  return d;
}

/// Divides each efficacy by the round maximum; an all-zero round maps to all
/// zeros. Throws on empty input.
inline std::vector<double> normalize_round(const std::vector<double>& efficacies) {
  if (efficacies.empty()) throw std::invalid_argument("normalize_round: empty round");
  double mx = 0.0;
  for (double e : efficacies) mx = std::max(mx, e);
  std::vector<double> out(efficacies.size(), 0.0);
  if (mx <= 0.0) return out;
  for (std::size_t k = 0; k < efficacies.size(); ++k) out[k] = efficacies[k] / mx;
  return out;
}

/// Gomory mixed-integer cut from the tableau row of a fractional basic
/// integer variable. Nonbasic variables at their upper bound are complemented
/// before the rounding step and slack variables are substituted out, so the
/// result is a <=-form inequality over structural variables. Returns nullopt
/// when the row does not qualify or the coefficient dynamic range exceeds
/// 1e7.
inline std::optional<Cut> gmi_from_row(const TableauRow& row, const LpModel& model,
                                       const std::vector<double>& x,
                                       const Tolerances& tol = Tolerances{}) {
  const int n = model.num_vars();
  if (row.basic_col >= n || !model.integer[static_cast<std::size_t>(row.basic_col)])
    return std::nullopt;
  const double f0 = frac(row.value);
  if (f0 <= tol.integrality || f0 >= 1.0 - tol.integrality) return std::nullopt;

  std::vector<double> dense(static_cast<std::size_t>(n), 0.0);
  double rhs = 1.0;
  for (const auto& e : row.entries) {
    double sigma, bound;
    switch (e.status) {
      case VarStatus::kAtLower: sigma = 1.0; bound = e.value; break;
      case VarStatus::kAtUpper: sigma = -1.0; bound = e.value; break;
      default:
        // a free nonbasic cannot be complemented to a nonnegative variable
        return std::nullopt;
    }
    const double a_hat = e.coeff * sigma;
    const bool integer_col = e.col < n && model.integer[static_cast<std::size_t>(e.col)] &&
                             is_integral(bound, 1e-9);
    double g;
    if (integer_col) {
      const double fj = frac(a_hat);
      g = std::min(fj / f0, (1.0 - fj) / (1.0 - f0));
    } else {
      g = a_hat > 0.0 ? a_hat / f0 : -a_hat / (1.0 - f0);
    }
    if (g == 0.0) continue;
    // t_j = sigma * (z_j - bound); expand g * t_j >= ... into z-space
    rhs += g * sigma * bound;
    if (e.col < n) {
      dense[static_cast<std::size_t>(e.col)] += g * sigma;
    } else {
      const LinRow& r = model.rows[static_cast<std::size_t>(e.col - n)];
      for (const auto& rc : r.coeffs)
        dense[static_cast<std::size_t>(rc.index)] += g * sigma * rc.value;
    }
  }

  // >=-form over structurals, negate into <=-form
  Cut cut;
  cut.origin = CutOrigin::kGmi;
  cut.source_var = row.basic_col;
  double max_abs = 0.0, min_abs = kInfinity;
  for (int j = 0; j < n; ++j) {
    const double c = -dense[static_cast<std::size_t>(j)];
    if (std::abs(c) <= 1e-12) continue;
    cut.coeffs.push_back({j, c});
    max_abs = std::max(max_abs, std::abs(c));
    min_abs = std::min(min_abs, std::abs(c));
  }
  if (cut.coeffs.empty()) return std::nullopt;
  if (max_abs / min_abs > 1e7) return std::nullopt;
  cut.rhs = -rhs;
  cut.efficacy = efficacy(cut, x);
  cut.density = static_cast<double>(cut.coeffs.size()) / static_cast<double>(n);
  return cut;
}

/// Scale-normalized identity of a cut, used to deduplicate pools.
inline std::string cut_fingerprint(const Cut& cut) {
  double scale = 0.0;
  for (const auto& e : cut.coeffs) scale = std::max(scale, std::abs(e.value));
  if (scale <= 0.0) scale = 1.0;
  std::string key;
  char buf[64];
  for (const auto& e : cut.coeffs) {
    std::snprintf(buf, sizeof(buf), "%d:%.9f;", e.index, e.value / scale);
    key += buf;
  }
  std::snprintf(buf, sizeof(buf), "r%.9f", cut.rhs / scale);
  key += buf;
  return key;
}

}  // namespace cipkit

#endif  // CIPKIT_CUTS_HPP_
