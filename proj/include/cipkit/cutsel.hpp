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

#ifndef CIPKIT_CUTSEL_HPP_
#define CIPKIT_CUTSEL_HPP_

#include <optional>
#include <vector>

#include "cipkit/cuts.hpp"
#include "cipkit/pseudocost.hpp"

namespace cipkit {

enum class CutSelector { kHybrid, kDynamic, kEnsemble };

/// Weights of the four hybrid scoring criteria. The directed cutoff distance
/// weight defaults to zero.
struct HybridWeights {
  double efficacy = 1.0;
  double int_support = 0.1;
  double obj_parallelism = 0.1;
  double directed_cutoff = 0.0;
};

struct DynamicConfig {
  double mingain = 0.01;
  enum class FilterMode { kNormal, kF };
  FilterMode filtermode = FilterMode::kNormal;
};

/// Ensemble parameters. These are artifact defaults; the tuned values used in
/// practice come from blackbox optimization and are not published.
struct EnsembleConfig {
  double max_density = 0.4;
  double parallelism_penalty = 0.2;
  long long nnz_budget = 0;  // 0: use 10 * num_vars
  double w_pseudo = 0.5;
  double w_sparsity = 0.5;
};

namespace cutsel_detail {

inline double cos_with_dense(const SparseVector& a, const std::vector<double>& c) {
  double dot = 0.0, nc = 0.0;
  for (double v : c) nc += v * v;
  for (const auto& e : a) dot += e.value * c[static_cast<std::size_t>(e.index)];
  const double na = sparse_norm2(a);
  if (na == 0.0 || nc == 0.0) return 0.0;
  return dot / (na * std::sqrt(nc));
}

}  // namespace cutsel_detail

/// Efficacy measured along the ray from x toward the incumbent; zero when no
/// incumbent exists or the ray never reaches the cut hyperplane.
inline double directed_cutoff_distance(const Cut& cut, const std::vector<double>& x,
                                       const Solution* incumbent) {
  if (incumbent == nullptr) return 0.0;
  double norm_d = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = incumbent->values[j] - x[j];
    norm_d += d * d;
  }
  norm_d = std::sqrt(norm_d);
  if (norm_d <= 0.0) return 0.0;
  double ad = 0.0;
  for (const auto& e : cut.coeffs)
    ad += e.value * (incumbent->values[static_cast<std::size_t>(e.index)] -
                     x[static_cast<std::size_t>(e.index)]);
  ad /= norm_d;
  if (ad >= -1e-12) return 0.0;
  const double violation = sparse_dot(cut.coeffs, x) - cut.rhs;
  return violation / (-ad);
}

/// Weighted sum of efficacy, integer support, objective parallelism, and
/// directed cutoff distance.
inline double score_hybrid(const Cut& cut, const std::vector<double>& x,
                           const std::vector<bool>& integer, const std::vector<double>& objective,
                           const Solution* incumbent, const HybridWeights& w = HybridWeights{}) {
  double score = w.efficacy * cut.efficacy;
  if (w.int_support != 0.0 && !cut.coeffs.empty()) {
    int int_nnz = 0;
    for (const auto& e : cut.coeffs)
      if (integer[static_cast<std::size_t>(e.index)]) ++int_nnz;
    score += w.int_support * static_cast<double>(int_nnz) /
             static_cast<double>(cut.coeffs.size());
  }
  if (w.obj_parallelism != 0.0)
    score += w.obj_parallelism * std::abs(cutsel_detail::cos_with_dense(cut.coeffs, objective));
  if (w.directed_cutoff != 0.0)
    score += w.directed_cutoff * directed_cutoff_distance(cut, x, incumbent);
  return score;
}

/// Greedy filter keeping cuts whose orthogonality 1 - |cos| against every
/// kept cut is at least min_ortho. Input must be sorted by score descending;
/// returns indices of kept cuts in order.
inline std::vector<std::size_t> filter_orthogonality(const std::vector<Cut>& sorted_cuts,
                                                     double min_ortho = 0.9) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < sorted_cuts.size(); ++i) {
    bool ok = true;
    for (std::size_t k : kept) {
      const double c = std::abs(sparse_cosine(sorted_cuts[i].coeffs, sorted_cuts[k].coeffs));
      if (1.0 - c < min_ortho) { ok = false; break; }
    }
    if (ok) kept.push_back(i);
  }
  return kept;
}

struct PairwiseEfficacy {
  double distance = 0.0;
  bool both_active = false;  // the corner minimizer is the ridge point
};

/// Euclidean distance from x to the region satisfying both cuts. Requires
/// both cuts violated at x; returns nullopt for an empty (antiparallel) pair.
inline std::optional<PairwiseEfficacy> pairwise_efficacy(const Cut& c1, const Cut& c2,
                                                         const std::vector<double>& x) {
  const double n1 = sparse_norm2(c1.coeffs), n2 = sparse_norm2(c2.coeffs);
  if (n1 <= 0.0 || n2 <= 0.0) throw std::invalid_argument("pairwise_efficacy: zero-norm cut");
  const double v1 = sparse_dot(c1.coeffs, x) - c1.rhs;
  const double v2 = sparse_dot(c2.coeffs, x) - c2.rhs;
  if (v1 <= 0.0 || v2 <= 0.0)
    throw std::invalid_argument("pairwise_efficacy: cuts must both be violated");
  const double e1 = v1 / n1, e2 = v2 / n2;

  double a12 = 0.0;
  {
    std::size_t i = 0, j = 0;
    while (i < c1.coeffs.size() && j < c2.coeffs.size()) {
      if (c1.coeffs[i].index < c2.coeffs[j].index) ++i;
      else if (c1.coeffs[i].index > c2.coeffs[j].index) ++j;
      else a12 += c1.coeffs[i++].value * c2.coeffs[j++].value;
    }
  }
  // projection of x onto hyperplane 1 satisfies cut 2?
  const double act2_at_p1 = (sparse_dot(c2.coeffs, x) - v1 / (n1 * n1) * a12);
  if (act2_at_p1 <= c2.rhs + 1e-12 * (1.0 + std::abs(c2.rhs)))
    return PairwiseEfficacy{std::max(e1, e2), false};
  const double act1_at_p2 = (sparse_dot(c1.coeffs, x) - v2 / (n2 * n2) * a12);
  if (act1_at_p2 <= c1.rhs + 1e-12 * (1.0 + std::abs(c1.rhs)))
    return PairwiseEfficacy{std::max(e1, e2), false};

  // both projections infeasible: nearest point lies on the ridge
  const double det = n1 * n1 * n2 * n2 - a12 * a12;
  if (det <= 1e-14 * n1 * n1 * n2 * n2) return std::nullopt;  // antiparallel, empty region
  const double mu1 = (n2 * n2 * v1 - a12 * v2) / det;
  const double mu2 = (n1 * n1 * v2 - a12 * v1) / det;
  const double dist2 = mu1 * v1 + mu2 * v2;
  return PairwiseEfficacy{std::sqrt(std::max(dist2, 0.0)), true};
}

/// Dynamic pairwise filter: a candidate joins the kept set only if, against
/// every kept cut, the pair improves the kept cut's efficacy by at least
/// (1 + mingain) and x lies inside the pair's intersection fan. Filter mode
/// 'f' rescores the remaining candidates by pairwise efficacy against the
/// newest kept cut after each acceptance.
inline std::vector<std::size_t> filter_dynamic(const std::vector<Cut>& sorted_cuts,
                                               const std::vector<double>& x,
                                               const DynamicConfig& cfg = DynamicConfig{}) {
  std::vector<std::size_t> kept;
  if (sorted_cuts.empty()) return kept;

  auto accepts = [&](std::size_t j) {
    for (std::size_t i : kept) {
      const auto pe = pairwise_efficacy(sorted_cuts[i], sorted_cuts[j], x);
      if (!pe || !pe->both_active) return false;
      const double base = efficacy(sorted_cuts[i], x);
      if (pe->distance < (1.0 + cfg.mingain) * base) return false;
    }
    return true;
  };

  kept.push_back(0);
  if (cfg.filtermode == DynamicConfig::FilterMode::kNormal) {
    for (std::size_t j = 1; j < sorted_cuts.size(); ++j)
      if (accepts(j)) kept.push_back(j);
    return kept;
  }

  // mode 'f': maintain candidates rescored after each acceptance
  std::vector<std::pair<double, std::size_t>> cands;  // (-score, index)
  for (std::size_t j = 1; j < sorted_cuts.size(); ++j)
    cands.push_back({static_cast<double>(j), j});  // initial order = given order
  while (!cands.empty()) {
    const std::size_t j = cands.front().second;
    cands.erase(cands.begin());
    if (!accepts(j)) continue;
    kept.push_back(j);
    for (auto& c : cands) {
      const auto pe = pairwise_efficacy(sorted_cuts[j], sorted_cuts[c.second], x);
      c.first = pe ? -pe->distance : kInfinity;
    }
    std::stable_sort(cands.begin(), cands.end());
  }
  return kept;
}

/// Ensemble selection: density pre-filter, hybrid + pseudo-cost + sparsity
/// scoring, multiplicative parallelism penalty against the kept set, and a
/// stop once the kept cuts' total nonzeros reach the budget.
inline std::vector<std::size_t> select_ensemble(const std::vector<Cut>& cuts,
                                                const std::vector<double>& x,
                                                const std::vector<bool>& integer,
                                                const std::vector<double>& objective,
                                                const Solution* incumbent,
                                                const PseudoCostStore& pseudo,
                                                const EnsembleConfig& cfg = EnsembleConfig{},
                                                const HybridWeights& hw = HybridWeights{}) {
  const long long budget =
      cfg.nnz_budget > 0 ? cfg.nnz_budget : 10LL * static_cast<long long>(integer.size());
  std::vector<std::size_t> pool;
  std::vector<double> base;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i].density > cfg.max_density) continue;
    double pseudo_gain = 0.0;
    int support = 0;
    for (const auto& e : cuts[i].coeffs) {
      const auto j = static_cast<std::size_t>(e.index);
      if (!integer[j]) continue;
      const double f = frac(x[j]);
      if (f <= 1e-9 || f >= 1.0 - 1e-9) continue;
      pseudo_gain += pseudo.product_score(e.index, f);
      ++support;
    }
    if (support > 0) pseudo_gain /= support;
    const double s = score_hybrid(cuts[i], x, integer, objective, incumbent, hw) +
                     cfg.w_pseudo * pseudo_gain + cfg.w_sparsity * (1.0 - cuts[i].density);
    pool.push_back(i);
    base.push_back(s);
  }

  std::vector<std::size_t> kept;
  std::vector<bool> used(pool.size(), false);
  long long nnz = 0;
  while (true) {
    int best = -1;
    double best_score = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (used[k]) continue;
      double max_cos = 0.0;
      for (std::size_t kk : kept)
        max_cos = std::max(max_cos,
                           std::abs(sparse_cosine(cuts[pool[k]].coeffs, cuts[kk].coeffs)));
      const double adj = base[k] * (1.0 - cfg.parallelism_penalty * max_cos);
      if (best < 0 || adj > best_score) { best = static_cast<int>(k); best_score = adj; }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    kept.push_back(pool[static_cast<std::size_t>(best)]);
    nnz += static_cast<long long>(cuts[pool[static_cast<std::size_t>(best)]].coeffs.size());
    if (nnz >= budget) break;
  }
  return kept;
}

}  // namespace cipkit

#endif  // CIPKIT_CUTSEL_HPP_
