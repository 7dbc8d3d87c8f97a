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

#ifndef CIPKIT_DIVING_HPP_
#define CIPKIT_DIVING_HPP_

#include <optional>
#include <vector>

#include "cipkit/enumerate.hpp"
#include "cipkit/problem.hpp"
#include "cipkit/simplex.hpp"

namespace cipkit {

struct DiveConfig {
  int max_depth = 50;
  int lp_iter_budget = 0;  // 0: simplex default
  bool backtrack = true;   // single-level backtrack on infeasibility
};

/// Indicator candidate score. -1 marks values already consistent with the
/// semi-continuous domain {0} u [ell, u]; otherwise the score grows as the
/// LP value falls short of the activation bound.
inline double indicator_score(double xhat, double ell, double ub) {
  if (ell <= 0.0) throw std::invalid_argument("indicator_score: activation bound must be positive");
  if (xhat == 0.0 || (xhat >= ell && xhat <= ub)) return -1.0;
  if (xhat > 0.0 && xhat < ub) return 100.0 * (ell - xhat) / ell;
  return -1.0;
}

struct DiveCandidate {
  int cons = -1;   // index into Problem::indicators
  double xhat = 0.0;
  double ell = 0.0;
  double ub = kInfinity;
};

struct FixDecision {
  int cons = -1;
  int value = 0;  // bit the indicator variable is fixed to
};

/// Highest score wins (ties toward the smallest indicator variable); the
/// variable is fixed to 1 iff the LP value reaches at least half the
/// activation bound.
inline FixDecision choose_and_fix(const Problem& p, const std::vector<DiveCandidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("choose_and_fix: no candidates");
  int best = 0;
  double best_score = -kInfinity;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double s = indicator_score(candidates[k].xhat, candidates[k].ell, candidates[k].ub);
    const int z = p.indicators[static_cast<std::size_t>(candidates[k].cons)].binvar;
    const int zbest = p.indicators[static_cast<std::size_t>(candidates[best].cons)].binvar;
    if (s > best_score + 1e-12 || (s > best_score - 1e-12 && z < zbest)) {
      best_score = s;
      best = static_cast<int>(k);
    }
  }
  FixDecision d;
  d.cons = candidates[static_cast<std::size_t>(best)].cons;
  d.value = candidates[static_cast<std::size_t>(best)].xhat >=
                    0.5 * candidates[static_cast<std::size_t>(best)].ell
                ? 1
                : 0;
  return d;
}

namespace dive_detail {

struct BoundsSnapshot {
  std::vector<std::pair<int, std::pair<double, double>>> saved;

  void save(int var, double lo, double hi) { saved.push_back({var, {lo, hi}}); }
  void restore(std::vector<double>& lo, std::vector<double>& hi, Simplex& s) const {
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      lo[static_cast<std::size_t>(it->first)] = it->second.first;
      hi[static_cast<std::size_t>(it->first)] = it->second.second;
      s.set_bounds(it->first, it->second.first, it->second.second);
    }
  }
};

}  // namespace dive_detail

/// Depth-first dive: fix the best indicator candidate while any violated
/// indicator has an integral unfixed z, then round remaining fractional
/// integers toward the objective-improving direction. A single backtrack
/// flips the latest fixing; the first integral fully feasible LP solution is
/// returned.
inline std::optional<Solution> dive(const Problem& p, const DiveConfig& cfg = DiveConfig{},
                                    const Tolerances& tol = Tolerances{}) {
  Simplex lp(LpModel::from_problem(p));
  std::vector<double> lo = p.lower, hi = p.upper;
  LpResult res = lp.solve(cfg.lp_iter_budget);
  if (!res.optimal()) return std::nullopt;

  bool used_backtrack = false;
  // applies one fixing (with indicator propagation) and records prior bounds
  auto apply_indicator_fix = [&](const FixDecision& d, dive_detail::BoundsSnapshot& snap) {
    const IndicatorCons& ind = p.indicators[static_cast<std::size_t>(d.cons)];
    const auto z = static_cast<std::size_t>(ind.binvar);
    const auto x = static_cast<std::size_t>(ind.var);
    snap.save(ind.binvar, lo[z], hi[z]);
    snap.save(ind.var, lo[x], hi[x]);
    lo[z] = hi[z] = static_cast<double>(d.value);
    if (d.value == 0)
      hi[x] = std::min(hi[x], 0.0);
    else
      lo[x] = std::max(lo[x], ind.activation);
    lp.set_bounds(ind.binvar, lo[z], hi[z]);
    lp.set_bounds(ind.var, lo[x], hi[x]);
  };

  struct LastFix {
    bool indicator = false;
    FixDecision decision;
    int var = -1;
    double other_target = 0.0;
  };
  std::optional<LastFix> last_fix;
  for (int depth = 0; depth < cfg.max_depth; ++depth) {
    // indicator candidates: violated constraints with integral unfixed z
    std::vector<DiveCandidate> cands;
    for (int c = 0; c < static_cast<int>(p.indicators.size()); ++c) {
      const IndicatorCons& ind = p.indicators[static_cast<std::size_t>(c)];
      const auto z = static_cast<std::size_t>(ind.binvar);
      if (lo[z] == hi[z]) continue;  // already fixed
      const double zval = res.x[z];
      if (!is_integral(zval, tol.integrality)) continue;
      const double xval = res.x[static_cast<std::size_t>(ind.var)];
      if (zval <= tol.integrality && xval > tol.feasibility) {
        DiveCandidate cand;
        cand.cons = c;
        cand.xhat = xval;
        cand.ell = ind.activation;
        cand.ub = p.upper[static_cast<std::size_t>(ind.var)];
        cands.push_back(cand);
      }
    }

    dive_detail::BoundsSnapshot snap;
    if (!cands.empty()) {
      const FixDecision d = choose_and_fix(p, cands);
      apply_indicator_fix(d, snap);
      LastFix lf;
      lf.indicator = true;
      lf.decision = d;
      last_fix = lf;
    } else {
      // fallback: round a fractional integer toward the improving direction
      int var = -1;
      bool down = true;
      double best_score = -1.0;
      for (int j = 0; j < p.num_vars; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (!p.integer[u]) continue;
        const double f = frac(res.x[u]);
        if (f <= tol.integrality || f >= 1.0 - tol.integrality) continue;
        const double c = p.objective[u];
        double score;
        bool dir_down;
        if (c > 0.0) { score = c * f; dir_down = true; }
        else if (c < 0.0) { score = -c * (1.0 - f); dir_down = false; }
        else { score = std::min(f, 1.0 - f) * 1e-3; dir_down = f < 0.5; }
        if (score > best_score + 1e-12) { best_score = score; var = j; down = dir_down; }
      }
      if (var < 0) {
        // integral and no violated indicators: candidate incumbent
        Solution sol;
        sol.values = res.x;
        for (auto& v : sol.values) v = std::round(v * 1e9) / 1e9;
        for (int j = 0; j < p.num_vars; ++j)
          if (p.integer[static_cast<std::size_t>(j)])
            sol.values[static_cast<std::size_t>(j)] =
                std::round(sol.values[static_cast<std::size_t>(j)]);
        sol.objective = objective_value(p, sol.values);
        if (check_feasible(p, sol, tol).feasible()) return sol;
        return std::nullopt;
      }
      const auto u = static_cast<std::size_t>(var);
      const double target = down ? std::floor(res.x[u]) : std::ceil(res.x[u]);
      snap.save(var, lo[u], hi[u]);
      lo[u] = hi[u] = target;
      lp.set_bounds(var, target, target);
      LastFix lf;
      lf.var = var;
      lf.other_target = down ? std::ceil(res.x[u]) : std::floor(res.x[u]);
      last_fix = lf;
    }

    res = lp.solve(cfg.lp_iter_budget);
    if (!res.optimal()) {
      if (!cfg.backtrack || used_backtrack || !last_fix) return std::nullopt;
      used_backtrack = true;
      snap.restore(lo, hi, lp);
      dive_detail::BoundsSnapshot snap2;
      if (last_fix->indicator) {
        FixDecision flipped = last_fix->decision;
        flipped.value = 1 - flipped.value;
        apply_indicator_fix(flipped, snap2);
      } else {
        const auto u = static_cast<std::size_t>(last_fix->var);
        snap2.save(last_fix->var, lo[u], hi[u]);
        lo[u] = hi[u] = last_fix->other_target;
        lp.set_bounds(last_fix->var, lo[u], hi[u]);
      }
      last_fix.reset();
      res = lp.solve(cfg.lp_iter_budget);
      if (!res.optimal()) return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace cipkit

#endif  // CIPKIT_DIVING_HPP_
