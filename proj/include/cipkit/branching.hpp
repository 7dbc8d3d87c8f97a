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

#ifndef CIPKIT_BRANCHING_HPP_
#define CIPKIT_BRANCHING_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "cipkit/cuts.hpp"
#include "cipkit/pseudocost.hpp"

namespace cipkit {

enum class BranchRule { kHybrid, kGmi, kMostFractional };

/// Per-variable running average and most recent value of normalized GMI cut
/// efficacies observed in separation rounds.
class GmiEffStats {
 public:
  explicit GmiEffStats(int num_vars = 0) { resize(num_vars); }

  void resize(int num_vars) { entries_.assign(static_cast<std::size_t>(num_vars), Entry{}); }

  /// Normalizes a round of (source variable, efficacy) observations by the
  /// round maximum and folds them into the per-variable statistics.
  void record_round(const std::vector<std::pair<int, double>>& round) {
    if (round.empty()) throw std::invalid_argument("record_round: empty round");
    std::vector<double> effs;
    effs.reserve(round.size());
    for (const auto& r : round) effs.push_back(r.second);
    const std::vector<double> norm = normalize_round(effs);
    for (std::size_t k = 0; k < round.size(); ++k) {
      auto& e = entries_[static_cast<std::size_t>(round[k].first)];
      e.average = (e.average * e.count + norm[k]) / (e.count + 1);
      ++e.count;
      e.last = norm[k];
    }
  }

  double average(int var) const { return entries_[static_cast<std::size_t>(var)].average; }
  double last(int var) const { return entries_[static_cast<std::size_t>(var)].last; }
  int count(int var) const { return entries_[static_cast<std::size_t>(var)].count; }

 private:
  struct Entry {
    double average = 0.0;
    double last = 0.0;
    int count = 0;
  };
  std::vector<Entry> entries_;
};

/// Conflict-style counters of the hybrid rule. No conflict analysis exists in
/// this kernel, so they stay zero, but their weights are honored so the
/// scoring formula is complete.
struct BranchCounters {
  double conflict_freq = 0.0;
  double conflict_len = 0.0;
  double fix_freq = 0.0;
  double infeas_freq = 0.0;
  double nl_count = 0.0;
};

struct HybridBranchWeights {
  double pseudo = 1.0;
  double conflict_freq = 0.01;
  double conflict_len = 0.01;
  double fix_freq = 0.01;
  double infeas_freq = 0.01;
  double nl_count = 0.01;
  double gmi_avg_eff = 0.0;
  double gmi_last_eff = 1e-5;
};

/// Weighted-sum branching score with the two GMI efficacy terms appended.
inline double hybrid_score(int var, double fractionality, const GmiEffStats& stats,
                           const PseudoCostStore& pc, const BranchCounters& counters,
                           const HybridBranchWeights& w = HybridBranchWeights{}) {
  double score = 0.0;
  score += w.conflict_freq * counters.conflict_freq;
  score += w.conflict_len * counters.conflict_len;
  score += w.fix_freq * counters.fix_freq;
  score += w.infeas_freq * counters.infeas_freq;
  score += w.nl_count * counters.nl_count;
  score += w.pseudo * pc.product_score(var, fractionality);
  score += w.gmi_avg_eff * stats.average(var);
  score += w.gmi_last_eff * stats.last(var);
  return score;
}

struct GmiBranchChoice {
  int var = -1;
  std::optional<Cut> cut;
  bool fallback_most_fractional = false;
};

/// Branches on the variable whose elementary split yields the most
/// efficacious GMI cut. Candidates that are nonbasic or whose cut is
/// rejected score zero; if no candidate yields a cut, falls back to the
/// most fractional variable. Ties break toward the smallest index.
inline GmiBranchChoice gmi_branch_select(Simplex& lp, const LpResult& result,
                                         const std::vector<int>& candidates, int max_cands = 20,
                                         const Tolerances& tol = Tolerances{}) {
  if (candidates.empty()) throw std::invalid_argument("gmi_branch_select: no candidates");
  GmiBranchChoice choice;
  double best_eff = 0.0;
  int examined = 0;
  for (int var : candidates) {
    if (examined >= max_cands) break;
    ++examined;
    if (result.basis[static_cast<std::size_t>(var)] != VarStatus::kBasic) continue;
    const TableauRow row = lp.tableau_row(var);
    const auto cut = gmi_from_row(row, lp.model(), result.x, tol);
    if (!cut) continue;
    if (cut->efficacy > best_eff + 1e-12) {
      best_eff = cut->efficacy;
      choice.var = var;
      choice.cut = cut;
    }
  }
  if (choice.var >= 0) return choice;
  // fallback: most fractional candidate
  choice.fallback_most_fractional = true;
  double best_frac = -1.0;
  for (int var : candidates) {
    const double f = frac(result.x[static_cast<std::size_t>(var)]);
    const double dist = std::min(f, 1.0 - f);
    if (dist > best_frac + 1e-12) { best_frac = dist; choice.var = var; }
  }
  return choice;
}

}  // namespace cipkit

#endif  // CIPKIT_BRANCHING_HPP_
