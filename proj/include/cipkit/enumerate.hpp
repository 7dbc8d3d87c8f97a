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

#ifndef CIPKIT_ENUMERATE_HPP_
#define CIPKIT_ENUMERATE_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "cipkit/problem.hpp"
#include "cipkit/simplex.hpp"

namespace cipkit {

enum class BruteForceStatus { kOptimal, kInfeasible, kUnbounded, kBudgetExceeded };

struct BruteForceResult {
  BruteForceStatus status = BruteForceStatus::kInfeasible;
  Solution solution;  // valid iff status == kOptimal
};

namespace enum_detail {

struct Lattice {
  std::vector<int> vars;
  std::vector<long long> lo, hi;
  long long size = 1;
};

inline std::optional<Lattice> build_lattice(const Problem& p, long long limit) {
  Lattice lat;
  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (!p.integer[u]) continue;
    if (!is_finite_value(p.lower[u]) || !is_finite_value(p.upper[u])) return std::nullopt;
    const long long lo = static_cast<long long>(std::ceil(p.lower[u] - 1e-9));
    const long long hi = static_cast<long long>(std::floor(p.upper[u] + 1e-9));
    lat.vars.push_back(j);
    lat.lo.push_back(lo);
    lat.hi.push_back(hi);
    if (hi < lo) { lat.size = 0; return lat; }
    const long long width = hi - lo + 1;
    if (lat.size > limit / width + 1) return std::nullopt;
    lat.size *= width;
    if (lat.size > limit) return std::nullopt;
  }
  return lat;
}

// Calls f once per integer assignment (values written into the given buffer).
inline void for_each_assignment(const Lattice& lat, std::vector<long long>& buf,
                                const std::function<void()>& f) {
  if (lat.size == 0) return;
  buf.assign(lat.lo.begin(), lat.lo.end());
  while (true) {
    f();
    std::size_t k = 0;
    while (k < buf.size()) {
      if (buf[k] < lat.hi[k]) { ++buf[k]; break; }
      buf[k] = lat.lo[k];
      ++k;
    }
    if (k == buf.size()) break;
    if (buf.empty()) break;
  }
}

// Bounds of the continuous slice for fixed integers, with indicator
// implications (z = 0 forces x <= 0) applied. Returns false if a bound pair
// crosses.
inline bool slice_bounds(const Problem& p, const std::vector<int>& ivars,
                         const std::vector<long long>& ivals, std::vector<double>& lo,
                         std::vector<double>& hi) {
  lo = p.lower;
  hi = p.upper;
  for (std::size_t k = 0; k < ivars.size(); ++k) {
    const auto u = static_cast<std::size_t>(ivars[k]);
    lo[u] = hi[u] = static_cast<double>(ivals[k]);
  }
  for (const auto& ind : p.indicators) {
    const auto z = static_cast<std::size_t>(ind.binvar);
    if (lo[z] == hi[z] && lo[z] <= 0.5) {
      const auto x = static_cast<std::size_t>(ind.var);
      hi[x] = std::min(hi[x], 0.0);
    }
  }
  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (lo[u] > hi[u] + 1e-9) return false;
  }
  return true;
}

}  // namespace enum_detail

/// Maximizes a linear function over the mixed-integer feasible set by
/// enumerating integer assignments and solving the continuous slice LP.
/// Returns nullopt if the lattice exceeds the budget or a slice is unbounded;
/// -infinity when the instance is infeasible.
inline std::optional<double> max_over_feasible(const Problem& p, const SparseVector& coeffs,
                                               long long limit = 1 << 20) {
  using namespace enum_detail;
  auto lat = build_lattice(p, limit);
  if (!lat) return std::nullopt;
  std::vector<double> dense(static_cast<std::size_t>(p.num_vars), 0.0);
  for (const auto& e : coeffs) dense[static_cast<std::size_t>(e.index)] = e.value;

  bool has_continuous = false;
  for (int j = 0; j < p.num_vars; ++j)
    if (!p.integer[static_cast<std::size_t>(j)]) has_continuous = true;

  double best = -kInfinity;
  bool unbounded = false;
  std::vector<long long> buf;
  std::vector<double> lo, hi;
  for_each_assignment(*lat, buf, [&]() {
    if (unbounded) return;
    if (!slice_bounds(p, lat->vars, buf, lo, hi)) return;
    if (!has_continuous) {
      Solution s;
      s.values.assign(lo.begin(), lo.end());
      if (!check_feasible(p, s).feasible()) return;
      best = std::max(best, sparse_dot(coeffs, s.values));
      return;
    }
    LpModel m = LpModel::from_problem(p);
    m.lower = lo;
    m.upper = hi;
    for (auto& c : m.objective) c = 0.0;
    for (int j = 0; j < p.num_vars; ++j)
      m.objective[static_cast<std::size_t>(j)] = -dense[static_cast<std::size_t>(j)];
    Simplex s(std::move(m));
    const LpResult r = s.solve();
    if (r.status == LpStatus::kUnbounded) { unbounded = true; return; }
    if (r.status != LpStatus::kOptimal) return;
    best = std::max(best, -r.objective);
  });
  if (unbounded) return std::nullopt;
  return best;
}

/// Exact optimum by enumerating integer assignments and solving the LP over
/// the continuous variables of each slice.
inline BruteForceResult brute_force_optimum(const Problem& p, long long limit = 1 << 20) {
  using namespace enum_detail;
  BruteForceResult out;
  auto lat = build_lattice(p, limit);
  if (!lat) { out.status = BruteForceStatus::kBudgetExceeded; return out; }

  bool has_continuous = false;
  for (int j = 0; j < p.num_vars; ++j)
    if (!p.integer[static_cast<std::size_t>(j)]) has_continuous = true;

  double best = kInfinity;
  bool unbounded = false;
  std::vector<long long> buf;
  std::vector<double> lo, hi;
  Solution best_sol;
  for_each_assignment(*lat, buf, [&]() {
    if (unbounded) return;
    if (!slice_bounds(p, lat->vars, buf, lo, hi)) return;
    if (!has_continuous) {
      Solution s;
      s.values.assign(lo.begin(), lo.end());
      if (!check_feasible(p, s).feasible()) return;
      const double obj = objective_value(p, s.values);
      if (obj < best) { best = obj; best_sol = s; best_sol.objective = obj; }
      return;
    }
    LpModel m = LpModel::from_problem(p);
    m.lower = lo;
    m.upper = hi;
    Simplex s(std::move(m));
    const LpResult r = s.solve();
    if (r.status == LpStatus::kUnbounded) { unbounded = true; return; }
    if (r.status != LpStatus::kOptimal) return;
    if (r.objective < best) {
      best = r.objective;
      best_sol.values = r.x;
      best_sol.objective = r.objective;
    }
  });
  if (unbounded) { out.status = BruteForceStatus::kUnbounded; return out; }
  if (best >= kInfinity) { out.status = BruteForceStatus::kInfeasible; return out; }
  out.status = BruteForceStatus::kOptimal;
  out.solution = best_sol;
  return out;
}

}  // namespace cipkit

#endif  // CIPKIT_ENUMERATE_HPP_
