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

#ifndef CIPKIT_LAGROMORY_HPP_
#define CIPKIT_LAGROMORY_HPP_

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "cipkit/cuts.hpp"
#include "cipkit/problem.hpp"
#include "cipkit/simplex.hpp"

namespace cipkit {

struct LagromoryConfig {
  double degeneracy_threshold = 0.5;
  int max_iters = 20;
  int cuts_per_basis = 5;
  double stabilization = 0.3;  // kappa: pull toward the core vector
  enum class Regularization { kNone, kL1Ball, kL2Ball };
  Regularization regularization = Regularization::kL2Ball;
  double radius = 10.0;
  int freq = -1;  // separator is off by default; >= 0 enables
};

struct LagromoryResult {
  double best_bound = -kInfinity;
  std::vector<Cut> harvested;
  std::vector<double> iteration_bounds;  // Lagrangian value per LP solve
  int iterations = 0;
};

/// The separator only runs on sufficiently dual-degenerate LPs.
inline bool lagromory_should_run(const LpResult& lp, const LagromoryConfig& cfg,
                                 const Tolerances& tol = Tolerances{}) {
  return dual_degeneracy(lp, tol) >= cfg.degeneracy_threshold;
}

namespace lagromory_detail {

// projection of nonnegative lambda onto {sum <= radius} (l1) or the
// Euclidean ball (l2)
inline void project(std::vector<double>& lambda, const LagromoryConfig& cfg) {
  if (cfg.regularization == LagromoryConfig::Regularization::kNone) return;
  if (cfg.regularization == LagromoryConfig::Regularization::kL2Ball) {
    double norm2 = 0.0;
    for (double v : lambda) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm > cfg.radius && norm > 0.0)
      for (double& v : lambda) v *= cfg.radius / norm;
    return;
  }
  double sum = 0.0;
  for (double v : lambda) sum += v;
  if (sum <= cfg.radius) return;
  // Euclidean projection onto the simplex-like set {v >= 0, sum v <= radius}
  std::vector<double> sorted = lambda;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - cfg.radius) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= t) { tau = t; break; }
  }
  for (double& v : lambda) v = std::max(0.0, v - tau);
}

}  // namespace lagromory_detail

/// Relax-and-cut separation: GMI cuts are dualized into the node objective
/// with multipliers lambda, the Lagrangian dual is walked with projected
/// subgradient steps (plus stabilization toward the best multipliers), and
/// every newly explored basis contributes fresh cuts. The harvested cuts are
/// returned for the global pool and are never added to the node LP itself.
inline LagromoryResult relax_and_cut(const Problem& p, const LagromoryConfig& cfg,
                                     std::optional<double> incumbent_objective = {},
                                     const Tolerances& tol = Tolerances{}) {
  LagromoryResult out;
  Simplex lp(LpModel::from_problem(p));
  LpResult res = lp.solve();
  if (!res.optimal()) return out;
  const double root_bound = res.objective;
  out.best_bound = root_bound;

  std::vector<Cut> pool;
  std::vector<double> lambda, core;
  std::set<std::string> fingerprints;

  auto harvest_from_basis = [&](const LpResult& lpres) {
    int added = 0;
    for (int j = 0; j < p.num_vars && added < cfg.cuts_per_basis; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (!p.integer[u] || lpres.basis[u] != VarStatus::kBasic) continue;
      const double f = frac(lpres.x[u]);
      if (f <= tol.integrality || f >= 1.0 - tol.integrality) continue;
      const auto cut = gmi_from_row(lp.tableau_row(j), lp.model(), lpres.x, tol);
      if (!cut) continue;
      const std::string fp = cut_fingerprint(*cut);
      if (!fingerprints.insert(fp).second) continue;
      pool.push_back(*cut);
      lambda.push_back(0.0);
      core.push_back(0.0);
      out.harvested.push_back(*cut);
      ++added;
    }
  };
  harvest_from_basis(res);

  int stall = 0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    // dualized objective c + sum_k lambda_k a_k, constant -lambda . b
    std::vector<double> obj = p.objective;
    double constant = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (lambda[k] == 0.0) continue;
      for (const auto& e : pool[k].coeffs)
        obj[static_cast<std::size_t>(e.index)] += lambda[k] * e.value;
      constant -= lambda[k] * pool[k].rhs;
    }
    lp.set_objective(obj);
    res = lp.solve();
    if (!res.optimal()) break;
    ++out.iterations;
    const double lagrangian = res.objective + constant;
    out.iteration_bounds.push_back(lagrangian);
    if (lagrangian > out.best_bound + 1e-9) {
      out.best_bound = lagrangian;
      core = lambda;
      stall = 0;
    } else if (++stall >= 5) {
      break;
    }

    harvest_from_basis(res);
    if (lambda.size() > core.size()) core.resize(lambda.size(), 0.0);

    // projected subgradient step with Polyak-style length
    std::vector<double> g(pool.size(), 0.0);
    double gnorm2 = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      g[k] = sparse_dot(pool[k].coeffs, res.x) - pool[k].rhs;
      gnorm2 += g[k] * g[k];
    }
    double step;
    if (gnorm2 <= 1e-18) {
      step = 0.0;
    } else if (incumbent_objective) {
      step = std::max(0.0, (*incumbent_objective - lagrangian) / gnorm2);
    } else {
      step = 1.0 / iter;
    }
    for (std::size_t k = 0; k < pool.size(); ++k)
      lambda[k] = std::max(0.0, lambda[k] + step * g[k]);
    lagromory_detail::project(lambda, cfg);
    for (std::size_t k = 0; k < pool.size(); ++k)
      lambda[k] = (1.0 - cfg.stabilization) * lambda[k] + cfg.stabilization * core[k];
  }
  return out;
}

}  // namespace cipkit

#endif  // CIPKIT_LAGROMORY_HPP_
