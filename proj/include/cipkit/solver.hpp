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

#ifndef CIPKIT_SOLVER_HPP_
#define CIPKIT_SOLVER_HPP_

#include <chrono>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "cipkit/branching.hpp"
#include "cipkit/cuts.hpp"
#include "cipkit/cutsel.hpp"
#include "cipkit/diving.hpp"
#include "cipkit/lagromory.hpp"
#include "cipkit/problem.hpp"
#include "cipkit/simplex.hpp"
#include "cipkit/symmetry.hpp"

namespace cipkit {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNodeLimit, kTimeLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNodeLimit: return "node_limit";
    case SolveStatus::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

enum class SymmetryHandling { kNone, kSst };

struct SolverConfig {
  CutSelector cutsel = CutSelector::kHybrid;
  BranchRule branching = BranchRule::kHybrid;
  SymmetryMode symmetry = SymmetryMode::kNone;
  SymmetryHandling symmetry_handling = SymmetryHandling::kNone;
  LagromoryConfig lagromory;                // freq < 0 keeps the separator off
  std::optional<bool> indicator_diving;     // default: on iff indicators exist
  unsigned seed = 0;
  double time_limit = kInfinity;            // seconds
  long long node_limit = 1000000;
  double gap_tol = 1e-6;
  int max_cut_rounds = 3;
  int cut_depth_limit = 4;
  int plunge_depth = 2;
  HybridWeights cutsel_weights;
  DynamicConfig dynamic_config;
  EnsembleConfig ensemble_config;
  HybridBranchWeights branch_weights;
  int gmi_max_cands = 20;
  double min_orthogonality = 0.9;
  Tolerances tol;
};

struct SolveStats {
  long long nodes = 0;
  long long lp_iterations = 0;
  std::map<CutOrigin, long long> cuts_generated;
  std::map<CutOrigin, long long> cuts_kept;
  long long lagromory_harvested = 0;
  double incumbent_objective = kInfinity;  // internal minimization space
  double dual_bound = -kInfinity;
  double gap = kInfinity;
  double wall_time_s = 0.0;
  std::vector<double> incumbent_sequence;
  std::vector<Cut> global_cuts;  // kept globally valid cuts

  void update_gap() {
    if (incumbent_objective >= kInfinity || dual_bound <= -kInfinity) {
      gap = kInfinity;
      return;
    }
    gap = (incumbent_objective - dual_bound) / std::max(std::abs(incumbent_objective), 1e-9);
  }
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<Solution> best;
  SolveStats stats;
};

/// Indicator implications on fixed binaries: z = 0 forces x <= 0 and z = 1
/// lifts the lower bound of x to the activation bound. Returns false when a
/// bound pair crosses.
inline bool propagate_bounds(const Problem& p, std::vector<double>& lower,
                             std::vector<double>& upper) {
  for (const auto& ind : p.indicators) {
    const auto z = static_cast<std::size_t>(ind.binvar);
    if (lower[z] != upper[z]) continue;
    const auto x = static_cast<std::size_t>(ind.var);
    if (lower[z] <= 0.5)
      upper[x] = std::min(upper[x], 0.0);
    else
      lower[x] = std::max(lower[x], ind.activation);
  }
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j] + 1e-12) return false;
  return true;
}

namespace solver_detail {

struct BnbNode {
  std::vector<double> lower, upper;
  std::vector<Cut> local_cuts;
  double bound = -kInfinity;
  int depth = 0;
  long long seq = 0;
  // pseudo-cost bookkeeping from the parent branching
  int branch_var = -1;
  bool branch_down = true;
  double branch_frac = 0.0;
  double parent_objective = -kInfinity;
};

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // FIFO tie-break
  }
};

inline LinRow row_from_cut(const Cut& cut, const std::string& name) {
  LinRow row;
  row.name = name;
  row.coeffs = cut.coeffs;
  row.lhs = -kInfinity;
  row.rhs = cut.rhs;
  return row;
}

}  // namespace solver_detail

class BranchAndCut {
 public:
  BranchAndCut(const Problem& p, const SolverConfig& cfg = SolverConfig{})
      : p_(p), cfg_(cfg), pseudo_(p.num_vars), gmi_stats_(p.num_vars) {
    if (!p.signomials.empty())
      throw std::invalid_argument(
          "solve: signomial constraints are handled by the standalone separator only");
  }

  SolveResult run() {
    using namespace solver_detail;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    SolveResult out;
    SolveStats& stats = out.stats;

    if (cfg_.symmetry != SymmetryMode::kNone &&
        cfg_.symmetry_handling == SymmetryHandling::kSst)
      add_sst_cuts(stats);

    BnbNode root;
    root.lower = p_.lower;
    root.upper = p_.upper;
    root.depth = 0;
    root.seq = 0;

    std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> open;
    std::vector<BnbNode> plunge;
    open.push(std::move(root));
    long long next_seq = 1;
    int consecutive_plunges = 0;
    bool any_unbounded = false;

    while (!open.empty() || !plunge.empty()) {
      if (stats.nodes >= cfg_.node_limit) { finish(out, SolveStatus::kNodeLimit, open, plunge); break; }
      if (elapsed() >= cfg_.time_limit) { finish(out, SolveStatus::kTimeLimit, open, plunge); break; }

      BnbNode node;
      if (!plunge.empty() && consecutive_plunges < cfg_.plunge_depth) {
        node = std::move(plunge.back());
        plunge.pop_back();
        ++consecutive_plunges;
      } else {
        while (!plunge.empty()) { open.push(std::move(plunge.back())); plunge.pop_back(); }
        node = open.top();
        open.pop();
        consecutive_plunges = 0;
      }

      // bound-based pruning against the incumbent
      if (node.bound >= stats.incumbent_objective - 1e-9) continue;
      if (!propagate_bounds(p_, node.lower, node.upper)) continue;

      ++stats.nodes;
      Simplex lp(node_model(node));
      LpResult res = lp.solve();
      stats.lp_iterations += res.iterations;
      if (res.status == LpStatus::kNumericalFailure || res.status == LpStatus::kIterationLimit) {
        res = lp.solve();  // one cold retry
        stats.lp_iterations += res.iterations;
      }
      if (res.status == LpStatus::kInfeasible) {
        record_branch_outcome(node, kInfinity);
        continue;
      }
      if (res.status == LpStatus::kUnbounded) { any_unbounded = true; break; }
      if (!res.optimal()) continue;
      record_branch_outcome(node, res.objective);

      node.bound = std::max(node.bound, res.objective);
      if (node.bound >= stats.incumbent_objective - 1e-9) continue;

      // root extras: Lagromory bound lift and harvested cuts, then diving
      std::vector<Cut> harvest;
      if (node.depth == 0) {
        if (cfg_.lagromory.freq >= 0 && lagromory_should_run(res, cfg_.lagromory, cfg_.tol)) {
          const auto lagro = relax_and_cut(
              p_, cfg_.lagromory,
              stats.incumbent_objective < kInfinity
                  ? std::optional<double>(stats.incumbent_objective)
                  : std::nullopt,
              cfg_.tol);
          stats.lagromory_harvested += static_cast<long long>(lagro.harvested.size());
          harvest = lagro.harvested;
          node.bound = std::max(node.bound, lagro.best_bound);
        }
        if (cfg_.indicator_diving.value_or(!p_.indicators.empty())) {
          if (const auto sol = dive(p_, DiveConfig{}, cfg_.tol)) update_incumbent(*sol, stats);
        }
      }

      // separation rounds
      if (node.depth <= cfg_.cut_depth_limit) {
        for (int round = 0; round < cfg_.max_cut_rounds; ++round) {
          const double before = res.objective;
          std::vector<Cut> candidates = generate_gmi_round(lp, res, stats);
          if (node.depth == 0 && round == 0)
            for (const auto& c : harvest)
              if (efficacy(c, res.x) > cfg_.tol.zero) candidates.push_back(c);
          if (candidates.empty()) break;
          const std::vector<Cut> kept = select_cuts(candidates, res, stats);
          if (kept.empty()) break;
          for (const auto& cut : kept) {
            stats.cuts_kept[cut.origin]++;
            Cut stored = cut;
            stored.local = node.depth > 0;
            if (node.depth == 0) {
              stats.global_cuts.push_back(stored);
              global_cuts_.push_back(stored);
            } else {
              node.local_cuts.push_back(stored);
            }
            lp.add_row(solver_detail::row_from_cut(
                stored, "cut" + std::to_string(stats.cuts_kept[cut.origin])));
          }
          res = lp.solve();
          stats.lp_iterations += res.iterations;
          if (!res.optimal()) break;
          node.bound = std::max(node.bound, res.objective);
          if (res.objective - before < 1e-6) break;  // stalling
        }
        if (res.status == LpStatus::kInfeasible) continue;
        if (!res.optimal()) continue;
        if (node.bound >= stats.incumbent_objective - 1e-9) continue;
      }

      // integrality
      std::vector<int> fractional;
      for (int j = 0; j < p_.num_vars; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (!p_.integer[u]) continue;
        if (!is_integral(res.x[u], cfg_.tol.integrality)) fractional.push_back(j);
      }

      if (fractional.empty()) {
        // integral point; indicators may still be violated
        const int viol = first_violated_indicator(node, res.x);
        if (viol < 0) {
          Solution sol = rounded_solution(res.x);
          if (check_feasible(p_, sol, cfg_.tol).feasible()) update_incumbent(sol, stats);
          continue;
        }
        branch_on_indicator(node, viol, res, plunge, open, next_seq);
        continue;
      }

      const int var = pick_branching_variable(lp, res, fractional);
      make_children(node, var, res, plunge, open, next_seq);
    }

    if (any_unbounded) {
      out.status = SolveStatus::kUnbounded;
      stats.dual_bound = -kInfinity;
      stats.wall_time_s = elapsed();
      return out;
    }
    if (out.status != SolveStatus::kNodeLimit && out.status != SolveStatus::kTimeLimit) {
      if (stats.incumbent_objective < kInfinity) {
        out.status = SolveStatus::kOptimal;
        stats.dual_bound = stats.incumbent_objective;
        out.best = incumbent_;
      } else {
        out.status = SolveStatus::kInfeasible;
      }
    } else if (stats.incumbent_objective < kInfinity) {
      out.best = incumbent_;
    }
    stats.update_gap();
    stats.wall_time_s = elapsed();
    return out;
  }

 private:
  using OpenQueue =
      std::priority_queue<solver_detail::BnbNode, std::vector<solver_detail::BnbNode>,
                          solver_detail::NodeOrder>;

  void finish(SolveResult& out, SolveStatus status, OpenQueue& open,
              std::vector<solver_detail::BnbNode>& plunge) {
    out.status = status;
    double best_open = out.stats.incumbent_objective;
    OpenQueue copy = open;
    while (!copy.empty()) { best_open = std::min(best_open, copy.top().bound); copy.pop(); }
    for (const auto& n : plunge) best_open = std::min(best_open, n.bound);
    out.stats.dual_bound = best_open;
  }

  LpModel node_model(const solver_detail::BnbNode& node) const {
    LpModel m = LpModel::from_problem(p_);
    m.lower = node.lower;
    m.upper = node.upper;
    int k = 0;
    for (const auto& cut : global_cuts_)
      m.rows.push_back(solver_detail::row_from_cut(cut, "g" + std::to_string(k++)));
    for (const auto& cut : node.local_cuts)
      m.rows.push_back(solver_detail::row_from_cut(cut, "l" + std::to_string(k++)));
    return m;
  }

  void add_sst_cuts(SolveStats& stats) {
    AutomorphismGenerators gens;
    if (cfg_.symmetry == SymmetryMode::kPermutation) {
      gens = find_automorphisms(build_perm_graph(p_));
      std::vector<Permutation> verified;
      for (const auto& g : gens.perms)
        if (verify_symmetry(p_, g)) verified.push_back(g);
      gens.perms = std::move(verified);
    } else {
      gens = find_automorphisms(build_signed_graph(p_));
      std::vector<SignedPermutation> verified;
      for (const auto& g : gens.signed_perms)
        if (verify_symmetry(p_, g)) verified.push_back(g);
      gens.signed_perms = std::move(verified);
    }
    const auto parts = orbits(gens, p_.num_vars);
    // first-level cuts: the orbit of the smallest variable in any
    // non-singleton orbit
    for (const auto& orbit : parts) {
      if (orbit.size() < 2) continue;
      const int leader = orbit.front();
      for (auto& cut : sst_first_level(orbit, leader)) {
        stats.cuts_generated[CutOrigin::kSst]++;
        stats.cuts_kept[CutOrigin::kSst]++;
        stats.global_cuts.push_back(cut);
        global_cuts_.push_back(std::move(cut));
      }
      break;
    }
  }

  std::vector<Cut> generate_gmi_round(Simplex& lp, const LpResult& res, SolveStats& stats) {
    std::vector<Cut> cuts;
    std::vector<std::pair<int, double>> round;
    for (int j = 0; j < p_.num_vars; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (!p_.integer[u] || res.basis[u] != VarStatus::kBasic) continue;
      const double f = frac(res.x[u]);
      if (f <= cfg_.tol.integrality || f >= 1.0 - cfg_.tol.integrality) continue;
      const auto cut = gmi_from_row(lp.tableau_row(j), lp.model(), res.x, cfg_.tol);
      if (!cut) continue;
      stats.cuts_generated[CutOrigin::kGmi]++;
      round.push_back({j, cut->efficacy});
      cuts.push_back(*cut);
    }
    if (!round.empty()) gmi_stats_.record_round(round);
    return cuts;
  }

  std::vector<Cut> select_cuts(std::vector<Cut>& candidates, const LpResult& res,
                               SolveStats& stats) {
    (void)stats;
    const Solution* inc = incumbent_ ? &*incumbent_ : nullptr;
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> scores(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
      scores[i] = score_hybrid(candidates[i], res.x, p_.integer, p_.objective, inc,
                               cfg_.cutsel_weights);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<Cut> sorted;
    sorted.reserve(candidates.size());
    for (std::size_t i : order) sorted.push_back(candidates[i]);

    std::vector<std::size_t> kept_idx;
    switch (cfg_.cutsel) {
      case CutSelector::kHybrid:
        kept_idx = filter_orthogonality(sorted, cfg_.min_orthogonality);
        break;
      case CutSelector::kDynamic:
        kept_idx = filter_dynamic(sorted, res.x, cfg_.dynamic_config);
        break;
      case CutSelector::kEnsemble:
        kept_idx = select_ensemble(sorted, res.x, p_.integer, p_.objective, inc, pseudo_,
                                   cfg_.ensemble_config, cfg_.cutsel_weights);
        break;
    }
    std::vector<Cut> kept;
    for (std::size_t i : kept_idx) kept.push_back(sorted[i]);
    return kept;
  }

  int pick_branching_variable(Simplex& lp, const LpResult& res,
                              const std::vector<int>& fractional) {
    switch (cfg_.branching) {
      case BranchRule::kGmi: {
        return gmi_branch_select(lp, res, fractional, cfg_.gmi_max_cands, cfg_.tol).var;
      }
      case BranchRule::kHybrid: {
        int best = fractional.front();
        double best_score = -kInfinity;
        for (int j : fractional) {
          const double f = frac(res.x[static_cast<std::size_t>(j)]);
          const double s =
              hybrid_score(j, f, gmi_stats_, pseudo_, BranchCounters{}, cfg_.branch_weights);
          if (s > best_score + 1e-15) { best_score = s; best = j; }
        }
        return best;
      }
      case BranchRule::kMostFractional:
      default: {
        int best = fractional.front();
        double best_frac = -1.0;
        for (int j : fractional) {
          const double f = frac(res.x[static_cast<std::size_t>(j)]);
          const double dist = std::min(f, 1.0 - f);
          if (dist > best_frac + 1e-12) { best_frac = dist; best = j; }
        }
        return best;
      }
    }
  }

  void make_children(const solver_detail::BnbNode& node, int var, const LpResult& res,
                     std::vector<solver_detail::BnbNode>& plunge, OpenQueue& open,
                     long long& next_seq) {
    const auto u = static_cast<std::size_t>(var);
    const double v = res.x[u];
    const double f = frac(v);
    solver_detail::BnbNode down = child_of(node, res);
    down.upper[u] = std::floor(v);
    down.branch_var = var;
    down.branch_down = true;
    down.branch_frac = f;
    down.seq = next_seq++;
    solver_detail::BnbNode up = child_of(node, res);
    up.lower[u] = std::ceil(v);
    up.branch_var = var;
    up.branch_down = false;
    up.branch_frac = f;
    up.seq = next_seq++;
    open.push(std::move(up));
    plunge.push_back(std::move(down));
  }

  void branch_on_indicator(const solver_detail::BnbNode& node, int ind_index, const LpResult& res,
                           std::vector<solver_detail::BnbNode>& plunge, OpenQueue& open,
                           long long& next_seq) {
    const IndicatorCons& ind = p_.indicators[static_cast<std::size_t>(ind_index)];
    const auto z = static_cast<std::size_t>(ind.binvar);
    solver_detail::BnbNode zero = child_of(node, res);
    zero.upper[z] = 0.0;
    zero.seq = next_seq++;
    solver_detail::BnbNode one = child_of(node, res);
    one.lower[z] = 1.0;
    one.seq = next_seq++;
    open.push(std::move(one));
    plunge.push_back(std::move(zero));
  }

  solver_detail::BnbNode child_of(const solver_detail::BnbNode& node, const LpResult& res) {
    solver_detail::BnbNode child;
    child.lower = node.lower;
    child.upper = node.upper;
    child.local_cuts = node.local_cuts;
    child.bound = std::max(node.bound, res.objective);
    child.depth = node.depth + 1;
    child.parent_objective = res.objective;
    return child;
  }

  void record_branch_outcome(const solver_detail::BnbNode& node, double child_objective) {
    if (node.branch_var < 0 || node.parent_objective <= -kInfinity) return;
    if (node.branch_frac <= 0.0 || node.branch_frac >= 1.0) return;
    const double gain = child_objective >= kInfinity
                            ? 0.0
                            : std::max(0.0, child_objective - node.parent_objective);
    if (child_objective >= kInfinity) return;  // infeasible children carry no gain info
    pseudo_.update(node.branch_var, node.branch_down, gain, node.branch_frac);
  }

  int first_violated_indicator(const solver_detail::BnbNode& node,
                               const std::vector<double>& x) const {
    for (int i = 0; i < static_cast<int>(p_.indicators.size()); ++i) {
      const IndicatorCons& ind = p_.indicators[static_cast<std::size_t>(i)];
      const auto z = static_cast<std::size_t>(ind.binvar);
      if (node.lower[z] == node.upper[z]) continue;  // fixed: already propagated
      if (x[z] <= cfg_.tol.integrality &&
          x[static_cast<std::size_t>(ind.var)] > cfg_.tol.feasibility)
        return i;
    }
    return -1;
  }

  Solution rounded_solution(const std::vector<double>& x) const {
    Solution sol;
    sol.values = x;
    for (int j = 0; j < p_.num_vars; ++j)
      if (p_.integer[static_cast<std::size_t>(j)])
        sol.values[static_cast<std::size_t>(j)] =
            std::round(sol.values[static_cast<std::size_t>(j)]);
    sol.objective = objective_value(p_, sol.values);
    return sol;
  }

  void update_incumbent(const Solution& sol, SolveStats& stats) {
    if (sol.objective >= stats.incumbent_objective - 1e-12) return;
    incumbent_ = sol;
    stats.incumbent_objective = sol.objective;
    stats.incumbent_sequence.push_back(sol.objective);
  }

  const Problem& p_;
  SolverConfig cfg_;
  PseudoCostStore pseudo_;
  GmiEffStats gmi_stats_;
  std::vector<Cut> global_cuts_;
  std::optional<Solution> incumbent_;
};

inline SolveResult solve(const Problem& p, const SolverConfig& cfg = SolverConfig{}) {
  BranchAndCut solver(p, cfg);
  return solver.run();
}

}  // namespace cipkit

#endif  // CIPKIT_SOLVER_HPP_
