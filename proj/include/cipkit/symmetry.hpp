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

#ifndef CIPKIT_SYMMETRY_HPP_
#define CIPKIT_SYMMETRY_HPP_

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "cipkit/cuts.hpp"
#include "cipkit/problem.hpp"

namespace cipkit {

enum class SymmetryMode { kNone, kPermutation, kSigned };

/// Variable permutation gamma with image[j] the index variable j maps to.
struct Permutation {
  std::vector<int> image;

  bool identity() const {
    for (std::size_t j = 0; j < image.size(); ++j)
      if (image[j] != static_cast<int>(j)) return false;
    return true;
  }
  bool operator<(const Permutation& o) const { return image < o.image; }
  bool operator==(const Permutation& o) const { return image == o.image; }
};

/// Signed permutation: gamma(e_j) = sign[j] * e_{target[j]}, acting on
/// centered variable domains.
struct SignedPermutation {
  struct Entry {
    int target = 0;
    int sign = 1;
    bool operator<(const Entry& o) const {
      return target != o.target ? target < o.target : sign < o.sign;
    }
    bool operator==(const Entry& o) const { return target == o.target && sign == o.sign; }
  };
  std::vector<Entry> image;

  bool identity() const {
    for (std::size_t j = 0; j < image.size(); ++j)
      if (image[j].target != static_cast<int>(j) || image[j].sign != 1) return false;
    return true;
  }
  bool operator<(const SignedPermutation& o) const { return image < o.image; }
  bool operator==(const SignedPermutation& o) const { return image == o.image; }
};

inline SignedPermutation compose(const SignedPermutation& outer, const SignedPermutation& inner) {
  SignedPermutation out;
  out.image.resize(inner.image.size());
  for (std::size_t j = 0; j < inner.image.size(); ++j) {
    const auto& first = inner.image[j];
    const auto& second = outer.image[static_cast<std::size_t>(first.target)];
    out.image[j] = {second.target, first.sign * second.sign};
  }
  return out;
}

/// Colored symmetry detection graph. Variable node j sits at index j; in
/// signed mode the negated variable node of j sits at num_vars + j and the
/// pair is joined by an edge.
struct SymGraph {
  enum class NodeKind { kVar, kNegVar, kValue, kOperator, kCons, kRhs };
  struct Node {
    NodeKind kind;
    int color = 0;
    int var = -1;  // variable index for kVar / kNegVar nodes
  };
  struct Edge {
    int a = 0, b = 0;
    int color = 0;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  bool signed_mode = false;
  int num_vars = 0;

  int add_node(NodeKind kind, int color, int var = -1) {
    nodes.push_back({kind, color, var});
    return static_cast<int>(nodes.size()) - 1;
  }
  void add_edge(int a, int b, int color) { edges.push_back({a, b, color}); }
};

namespace sym_detail {

// Color tables keyed by snapped numeric tuples; ids are assigned in
// construction order, which is deterministic.
class ColorTable {
 public:
  int get(const std::vector<double>& key) {
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    const int id = static_cast<int>(table_.size());
    table_.emplace(key, id);
    return id;
  }

 private:
  std::map<std::vector<double>, int> table_;
};

// edge color key tags
constexpr double kTagCoefficient = 0.0;
constexpr double kTagPairing = 1.0;
constexpr double kTagConsLink = 2.0;
constexpr double kTagIndicatorZ = 3.0;
constexpr double kTagIndicatorX = 4.0;

// node color key tags
constexpr double kTagVar = 0.0;
constexpr double kTagNegVar = 1.0;
constexpr double kTagRhs = 2.0;
constexpr double kTagCons = 3.0;
constexpr double kTagValue = 4.0;

constexpr double kHandlerLinear = 0.0;
constexpr double kHandlerIndicator = 1.0;

inline double center_of(const Problem& p, int j) {
  const auto u = static_cast<std::size_t>(j);
  if (is_finite_value(p.lower[u]) && is_finite_value(p.upper[u]))
    return 0.5 * (p.lower[u] + p.upper[u]);
  return 0.0;  // semi-unbounded and free domains are not translated
}

inline void require_symmetry_compatible(const Problem& p) {
  if (!p.signomials.empty())
    throw std::invalid_argument("symmetry detection: unsupported constraint kind present");
}

}  // namespace sym_detail

/// Permutation-mode detection graph: variable nodes colored by type,
/// objective, and bounds; one rhs node per row colored by its sides; edges
/// var-rhs colored by coefficient; one cons node per constraint identifying
/// the handler kind.
inline SymGraph build_perm_graph(const Problem& p) {
  sym_detail::require_symmetry_compatible(p);
  using namespace sym_detail;
  SymGraph g;
  g.signed_mode = false;
  g.num_vars = p.num_vars;
  ColorTable node_colors, edge_colors;

  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const int color = node_colors.get({kTagVar, p.integer[u] ? 1.0 : 0.0,
                                       snap_value(p.objective[u]), snap_value(p.lower[u]),
                                       snap_value(p.upper[u])});
    g.add_node(SymGraph::NodeKind::kVar, color, j);
  }
  for (const auto& row : p.rows) {
    const int rhs_node = g.add_node(
        SymGraph::NodeKind::kRhs,
        node_colors.get({kTagRhs, snap_value(row.lhs), snap_value(row.rhs)}));
    const int cons_node =
        g.add_node(SymGraph::NodeKind::kCons, node_colors.get({kTagCons, kHandlerLinear}));
    g.add_edge(cons_node, rhs_node, edge_colors.get({kTagConsLink}));
    for (const auto& e : row.coeffs)
      g.add_edge(e.index, rhs_node, edge_colors.get({kTagCoefficient, snap_value(e.value)}));
  }
  for (const auto& ind : p.indicators) {
    const int cons_node = g.add_node(SymGraph::NodeKind::kCons,
                                     node_colors.get({kTagCons, kHandlerIndicator}));
    const int val_node = g.add_node(SymGraph::NodeKind::kValue,
                                    node_colors.get({kTagValue, snap_value(ind.activation)}));
    g.add_edge(cons_node, val_node, edge_colors.get({kTagConsLink}));
    g.add_edge(ind.binvar, cons_node, edge_colors.get({kTagIndicatorZ}));
    g.add_edge(ind.var, cons_node, edge_colors.get({kTagIndicatorX}));
  }
  return g;
}

/// Signed-mode detection graph: adds a negated node per variable, colored by
/// negated objective and negated centered bounds, with a pairing edge.
/// Coefficient edges from the negated node carry the negated coefficient
/// color, and row sides are centered before coloring.
inline SymGraph build_signed_graph(const Problem& p) {
  sym_detail::require_symmetry_compatible(p);
  using namespace sym_detail;
  SymGraph g;
  g.signed_mode = true;
  g.num_vars = p.num_vars;
  ColorTable node_colors, edge_colors;

  std::vector<double> center(static_cast<std::size_t>(p.num_vars), 0.0);
  for (int j = 0; j < p.num_vars; ++j)
    center[static_cast<std::size_t>(j)] = center_of(p, j);

  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double lo = is_finite_value(p.lower[u]) ? p.lower[u] - center[u] : -kInfinity;
    const double hi = is_finite_value(p.upper[u]) ? p.upper[u] - center[u] : kInfinity;
    const int color = node_colors.get({kTagVar, p.integer[u] ? 1.0 : 0.0,
                                       snap_value(p.objective[u]), snap_value(lo), snap_value(hi)});
    g.add_node(SymGraph::NodeKind::kVar, color, j);
  }
  // negated nodes share the variable color space so that var <-> negvar
  // mappings stay possible; their colors derive from the negated objective
  // and negated centered bounds
  for (int j = 0; j < p.num_vars; ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double lo = is_finite_value(p.lower[u]) ? p.lower[u] - center[u] : -kInfinity;
    const double hi = is_finite_value(p.upper[u]) ? p.upper[u] - center[u] : kInfinity;
    const int color = node_colors.get({kTagVar, p.integer[u] ? 1.0 : 0.0,
                                       snap_value(-p.objective[u]), snap_value(-hi),
                                       snap_value(-lo)});
    g.add_node(SymGraph::NodeKind::kNegVar, color, j);
  }
  const int pairing = edge_colors.get({kTagPairing});
  for (int j = 0; j < p.num_vars; ++j) g.add_edge(j, p.num_vars + j, pairing);

  for (const auto& row : p.rows) {
    double shift = 0.0;
    for (const auto& e : row.coeffs) shift += e.value * center[static_cast<std::size_t>(e.index)];
    const double lhs = is_finite_value(row.lhs) ? row.lhs - shift : -kInfinity;
    const double rhs = is_finite_value(row.rhs) ? row.rhs - shift : kInfinity;
    const int rhs_node = g.add_node(SymGraph::NodeKind::kRhs,
                                    node_colors.get({kTagRhs, snap_value(lhs), snap_value(rhs)}));
    const int cons_node =
        g.add_node(SymGraph::NodeKind::kCons, node_colors.get({kTagCons, kHandlerLinear}));
    g.add_edge(cons_node, rhs_node, edge_colors.get({kTagConsLink}));
    for (const auto& e : row.coeffs) {
      g.add_edge(e.index, rhs_node,
                 edge_colors.get({kTagCoefficient, snap_value(e.value)}));
      g.add_edge(p.num_vars + e.index, rhs_node,
                 edge_colors.get({kTagCoefficient, snap_value(-e.value)}));
    }
  }
  for (const auto& ind : p.indicators) {
    const auto zc = center[static_cast<std::size_t>(ind.binvar)];
    const auto xc = center[static_cast<std::size_t>(ind.var)];
    const int cons_node = g.add_node(SymGraph::NodeKind::kCons,
                                     node_colors.get({kTagCons, kHandlerIndicator}));
    const int val_node = g.add_node(
        SymGraph::NodeKind::kValue,
        node_colors.get({kTagValue, snap_value(ind.activation), snap_value(zc), snap_value(xc)}));
    g.add_edge(cons_node, val_node, edge_colors.get({kTagConsLink}));
    g.add_edge(ind.binvar, cons_node, edge_colors.get({kTagIndicatorZ}));
    g.add_edge(ind.var, cons_node, edge_colors.get({kTagIndicatorX}));
  }
  return g;
}

namespace sym_detail {

struct Adjacency {
  int n = 0;
  std::map<std::pair<int, int>, int> edge_color;  // both orientations
  std::vector<std::vector<std::pair<int, int>>> neighbors;  // (neighbor, edge color)

  explicit Adjacency(const SymGraph& g) : n(static_cast<int>(g.nodes.size())) {
    neighbors.resize(static_cast<std::size_t>(n));
    for (const auto& e : g.edges) {
      edge_color[{e.a, e.b}] = e.color;
      edge_color[{e.b, e.a}] = e.color;
      neighbors[static_cast<std::size_t>(e.a)].push_back({e.b, e.color});
      neighbors[static_cast<std::size_t>(e.b)].push_back({e.a, e.color});
    }
  }

  int color_between(int a, int b) const {
    auto it = edge_color.find({a, b});
    return it == edge_color.end() ? -1 : it->second;
  }
};

// 1-WL refinement: nodes are recolored by (color, sorted multiset of
// (edge color, neighbor color)) until stable.
inline std::vector<int> refine_colors(const Adjacency& adj, std::vector<int> colors) {
  while (true) {
    std::map<std::vector<long long>, int> signature_ids;
    std::vector<int> next(colors.size());
    for (int v = 0; v < adj.n; ++v) {
      std::vector<long long> sig;
      sig.push_back(colors[static_cast<std::size_t>(v)]);
      std::vector<std::pair<int, int>> ns;
      for (const auto& [w, ec] : adj.neighbors[static_cast<std::size_t>(v)])
        ns.push_back({ec, colors[static_cast<std::size_t>(w)]});
      std::sort(ns.begin(), ns.end());
      for (const auto& [ec, nc] : ns) {
        sig.push_back(ec);
        sig.push_back(nc);
      }
      auto it = signature_ids.find(sig);
      if (it == signature_ids.end())
        it = signature_ids.emplace(sig, static_cast<int>(signature_ids.size())).first;
      next[static_cast<std::size_t>(v)] = it->second;
    }
    if (next == colors) return colors;
    // stop when the partition no longer splits
    std::set<int> old_classes(colors.begin(), colors.end());
    std::set<int> new_classes(next.begin(), next.end());
    const bool split = new_classes.size() != old_classes.size();
    colors = std::move(next);
    if (!split) return colors;
  }
}

// Backtracking search for a single color-preserving automorphism extending
// the partial constraint map. Nodes are processed in index order.
class MappingSearch {
 public:
  MappingSearch(const Adjacency& adj, const std::vector<int>& colors, long long budget)
      : adj_(adj), colors_(colors), budget_(budget) {}

  // seed: required images (from -> to); returns a full mapping or empty.
  std::vector<int> find(const std::vector<std::pair<int, int>>& seed) {
    map_.assign(static_cast<std::size_t>(adj_.n), -1);
    used_.assign(static_cast<std::size_t>(adj_.n), false);
    for (const auto& [a, b] : seed) {
      if (colors_[static_cast<std::size_t>(a)] != colors_[static_cast<std::size_t>(b)]) return {};
      if (!assign(a, b)) return {};
    }
    if (search(0)) return map_;
    return {};
  }

 private:
  bool assign(int a, int b) {
    if (map_[static_cast<std::size_t>(a)] >= 0) return map_[static_cast<std::size_t>(a)] == b;
    if (used_[static_cast<std::size_t>(b)]) return false;
    // adjacency consistency against already-assigned nodes
    for (int w = 0; w < adj_.n; ++w) {
      const int mw = map_[static_cast<std::size_t>(w)];
      if (mw < 0) continue;
      if (adj_.color_between(a, w) != adj_.color_between(b, mw)) return false;
    }
    map_[static_cast<std::size_t>(a)] = b;
    used_[static_cast<std::size_t>(b)] = true;
    return true;
  }

  void unassign(int a) {
    const int b = map_[static_cast<std::size_t>(a)];
    map_[static_cast<std::size_t>(a)] = -1;
    used_[static_cast<std::size_t>(b)] = false;
  }

  bool search(int v) {
    while (v < adj_.n && map_[static_cast<std::size_t>(v)] >= 0) ++v;
    if (v >= adj_.n) return true;
    for (int b = 0; b < adj_.n; ++b) {
      if (--budget_ < 0) throw std::runtime_error("automorphism search budget exceeded");
      if (used_[static_cast<std::size_t>(b)]) continue;
      if (colors_[static_cast<std::size_t>(b)] != colors_[static_cast<std::size_t>(v)]) continue;
      if (!assign(v, b)) continue;
      if (search(v + 1)) return true;
      unassign(v);
    }
    return false;
  }

  const Adjacency& adj_;
  const std::vector<int>& colors_;
  long long budget_;
  std::vector<int> map_;
  std::vector<bool> used_;
};

}  // namespace sym_detail

struct AutomorphismGenerators {
  std::vector<Permutation> perms;          // permutation mode
  std::vector<SignedPermutation> signed_perms;  // signed mode
};

/// Color refinement followed by an individualization backtracking search.
/// Returns generators of the color-preserving automorphism group restricted
/// to variable-node images. The budget caps backtracking steps.
inline AutomorphismGenerators find_automorphisms(const SymGraph& g, long long budget = 10000000) {
  using namespace sym_detail;
  AutomorphismGenerators out;
  if (g.nodes.empty()) return out;
  Adjacency adj(g);
  // node colors already separate the kinds, except that var and negvar nodes
  // deliberately share a color space
  std::vector<int> base_colors(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v) base_colors[v] = g.nodes[v].color;

  auto to_variable_image = [&](const std::vector<int>& map) {
    if (!g.signed_mode) {
      Permutation perm;
      perm.image.resize(static_cast<std::size_t>(g.num_vars));
      for (int j = 0; j < g.num_vars; ++j)
        perm.image[static_cast<std::size_t>(j)] = g.nodes[static_cast<std::size_t>(map[static_cast<std::size_t>(j)])].var;
      if (!perm.identity()) out.perms.push_back(perm);
      return;
    }
    SignedPermutation sp;
    sp.image.resize(static_cast<std::size_t>(g.num_vars));
    for (int j = 0; j < g.num_vars; ++j) {
      const int img = map[static_cast<std::size_t>(j)];
      const auto& node = g.nodes[static_cast<std::size_t>(img)];
      sp.image[static_cast<std::size_t>(j)] = {node.var,
                                               node.kind == SymGraph::NodeKind::kVar ? 1 : -1};
    }
    if (!sp.identity()) out.signed_perms.push_back(sp);
  };

  std::vector<int> colors = refine_colors(adj, base_colors);
  int fresh_color = 0;
  for (int c : colors) fresh_color = std::max(fresh_color, c);

  // stabilizer chain over variable nodes: for the first non-singleton cell,
  // emit one generator per alternative image of its smallest node, then fix
  // that node and descend
  const int var_node_count = g.signed_mode ? 2 * g.num_vars : g.num_vars;
  while (true) {
    int pivot = -1;
    std::vector<int> cell;
    for (int v = 0; v < var_node_count && pivot < 0; ++v) {
      cell.clear();
      for (int w = 0; w < var_node_count; ++w)
        if (colors[static_cast<std::size_t>(w)] == colors[static_cast<std::size_t>(v)])
          cell.push_back(w);
      if (cell.size() > 1) pivot = v;
    }
    if (pivot < 0) break;
    for (int target : cell) {
      if (target == pivot) continue;
      MappingSearch search(adj, colors, budget);
      const std::vector<int> map = search.find({{pivot, target}});
      if (!map.empty()) to_variable_image(map);
    }
    colors[static_cast<std::size_t>(pivot)] = ++fresh_color;
    colors = refine_colors(adj, colors);
  }
  // different graph automorphisms can restrict to the same variable image
  std::sort(out.perms.begin(), out.perms.end());
  out.perms.erase(std::unique(out.perms.begin(), out.perms.end()), out.perms.end());
  std::sort(out.signed_perms.begin(), out.signed_perms.end());
  out.signed_perms.erase(std::unique(out.signed_perms.begin(), out.signed_perms.end()),
                         out.signed_perms.end());
  return out;
}

/// Checks the formulation-symmetry definition: objective, bounds, and
/// integrality invariance plus a row bijection matching permuted coefficient
/// multisets exactly. Rows and indicators are compared as written, on the
/// 1e-9 value grid.
inline bool verify_symmetry(const Problem& p, const Permutation& gamma) {
  const int n = p.num_vars;
  if (static_cast<int>(gamma.image.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int j = 0; j < n; ++j) {
    const int k = gamma.image[static_cast<std::size_t>(j)];
    if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)]) return false;
    seen[static_cast<std::size_t>(k)] = true;
    const auto uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);
    if (snap_value(p.objective[uj]) != snap_value(p.objective[uk])) return false;
    if (snap_value(p.lower[uj]) != snap_value(p.lower[uk])) return false;
    if (snap_value(p.upper[uj]) != snap_value(p.upper[uk])) return false;
    if (p.integer[uj] != p.integer[uk]) return false;
  }
  // rows must match as multisets of canonical keys
  auto row_key = [&](const SparseVector& coeffs, double lhs, double rhs) {
    std::vector<double> key{snap_value(lhs), snap_value(rhs)};
    for (const auto& e : coeffs) {
      key.push_back(e.index);
      key.push_back(snap_value(e.value));
    }
    return key;
  };
  std::multiset<std::vector<double>> original, transformed;
  for (const auto& row : p.rows) {
    original.insert(row_key(row.coeffs, row.lhs, row.rhs));
    SparseVector mapped;
    for (const auto& e : row.coeffs)
      mapped.push_back({gamma.image[static_cast<std::size_t>(e.index)], e.value});
    transformed.insert(row_key(canonicalize(std::move(mapped)), row.lhs, row.rhs));
  }
  if (original != transformed) return false;
  std::multiset<std::vector<double>> ind_orig, ind_mapped;
  for (const auto& ind : p.indicators) {
    ind_orig.insert({static_cast<double>(ind.binvar), static_cast<double>(ind.var),
                     snap_value(ind.activation)});
    ind_mapped.insert({static_cast<double>(gamma.image[static_cast<std::size_t>(ind.binvar)]),
                       static_cast<double>(gamma.image[static_cast<std::size_t>(ind.var)]),
                       snap_value(ind.activation)});
  }
  return ind_orig == ind_mapped;
}

/// Signed-mode verification on centered domains: gamma(e_j) = s e_k requires
/// the centered bound interval of k to equal s times that of j, the objective
/// to satisfy c_k = s c_j, and the centered rows to map onto each other.
inline bool verify_symmetry(const Problem& p, const SignedPermutation& gamma) {
  const int n = p.num_vars;
  if (static_cast<int>(gamma.image.size()) != n) return false;
  std::vector<double> center(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) center[static_cast<std::size_t>(j)] = sym_detail::center_of(p, j);

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int j = 0; j < n; ++j) {
    const auto [k, s] = gamma.image[static_cast<std::size_t>(j)];
    if (k < 0 || k >= n || (s != 1 && s != -1) || seen[static_cast<std::size_t>(k)]) return false;
    seen[static_cast<std::size_t>(k)] = true;
    const auto uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);
    if (p.integer[uj] != p.integer[uk]) return false;
    if (snap_value(s * p.objective[uj]) != snap_value(p.objective[uk])) return false;
    const double lo_j = is_finite_value(p.lower[uj]) ? p.lower[uj] - center[uj] : -kInfinity;
    const double hi_j = is_finite_value(p.upper[uj]) ? p.upper[uj] - center[uj] : kInfinity;
    const double lo_k = is_finite_value(p.lower[uk]) ? p.lower[uk] - center[uk] : -kInfinity;
    const double hi_k = is_finite_value(p.upper[uk]) ? p.upper[uk] - center[uk] : kInfinity;
    const double want_lo = s > 0 ? lo_j : (is_finite_value(hi_j) ? -hi_j : -kInfinity);
    const double want_hi = s > 0 ? hi_j : (is_finite_value(lo_j) ? -lo_j : kInfinity);
    if (snap_value(lo_k) != snap_value(want_lo)) return false;
    if (snap_value(hi_k) != snap_value(want_hi)) return false;
  }

  auto row_key = [&](const SparseVector& coeffs, double lhs, double rhs) {
    std::vector<double> key{snap_value(lhs), snap_value(rhs)};
    for (const auto& e : coeffs) {
      key.push_back(e.index);
      key.push_back(snap_value(e.value));
    }
    return key;
  };
  std::multiset<std::vector<double>> original, transformed;
  for (const auto& row : p.rows) {
    double shift = 0.0;
    for (const auto& e : row.coeffs) shift += e.value * center[static_cast<std::size_t>(e.index)];
    const double lhs = is_finite_value(row.lhs) ? row.lhs - shift : -kInfinity;
    const double rhs = is_finite_value(row.rhs) ? row.rhs - shift : kInfinity;
    original.insert(row_key(row.coeffs, lhs, rhs));
    SparseVector mapped;
    for (const auto& e : row.coeffs) {
      const auto [k, s] = gamma.image[static_cast<std::size_t>(e.index)];
      mapped.push_back({k, s * e.value});
    }
    transformed.insert(row_key(canonicalize(std::move(mapped)), lhs, rhs));
  }
  if (original != transformed) return false;

  std::multiset<std::vector<double>> ind_orig, ind_mapped;
  for (const auto& ind : p.indicators) {
    const auto zc = center[static_cast<std::size_t>(ind.binvar)];
    const auto xc = center[static_cast<std::size_t>(ind.var)];
    ind_orig.insert({static_cast<double>(ind.binvar), static_cast<double>(ind.var),
                     snap_value(ind.activation), snap_value(zc), snap_value(xc)});
    const auto [kz, sz] = gamma.image[static_cast<std::size_t>(ind.binvar)];
    const auto [kx, sx] = gamma.image[static_cast<std::size_t>(ind.var)];
    if (sz != 1 || sx != 1) return false;  // indicators admit no reflections
    ind_mapped.insert({static_cast<double>(kz), static_cast<double>(kx),
                       snap_value(ind.activation),
                       snap_value(center[static_cast<std::size_t>(kz)]),
                       snap_value(center[static_cast<std::size_t>(kx)])});
  }
  return ind_orig == ind_mapped;
}

/// Connected components of the union of generator mappings; signed targets
/// contribute adjacency through their absolute index.
inline std::vector<std::vector<int>> orbits(const AutomorphismGenerators& gens, int num_vars) {
  std::vector<int> parent(static_cast<std::size_t>(num_vars));
  for (int j = 0; j < num_vars; ++j) parent[static_cast<std::size_t>(j)] = j;
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
  for (const auto& perm : gens.perms)
    for (int j = 0; j < num_vars; ++j) unite(j, perm.image[static_cast<std::size_t>(j)]);
  for (const auto& sp : gens.signed_perms)
    for (int j = 0; j < num_vars; ++j) unite(j, sp.image[static_cast<std::size_t>(j)].target);
  std::map<int, std::vector<int>> members;
  for (int j = 0; j < num_vars; ++j) members[find(j)].push_back(j);
  std::vector<std::vector<int>> out;
  for (auto& [root, vars] : members) out.push_back(std::move(vars));
  return out;
}

/// First-level Schreier-Sims table cuts: x_leader >= x_j for every other
/// member of the leader's orbit, in <=-form.
inline std::vector<Cut> sst_first_level(const std::vector<int>& orbit, int leader) {
  std::vector<Cut> cuts;
  for (int j : orbit) {
    if (j == leader) continue;
    Cut cut;
    cut.origin = CutOrigin::kSst;
    if (leader < j) cut.coeffs = {{leader, -1.0}, {j, 1.0}};
    else cut.coeffs = {{j, 1.0}, {leader, -1.0}};
    cut.rhs = 0.0;
    cut.local = false;
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

/// BFS closure of the generated group (signed representation); permutations
/// embed with positive signs. Stops at `cap` elements.
inline std::set<SignedPermutation> group_closure(const std::vector<SignedPermutation>& gens,
                                                 int num_vars, std::size_t cap = 100000) {
  SignedPermutation id;
  id.image.resize(static_cast<std::size_t>(num_vars));
  for (int j = 0; j < num_vars; ++j) id.image[static_cast<std::size_t>(j)] = {j, 1};
  std::set<SignedPermutation> group{id};
  std::vector<SignedPermutation> queue{id};
  while (!queue.empty()) {
    const SignedPermutation g = queue.back();
    queue.pop_back();
    for (const auto& h : gens) {
      const SignedPermutation gh = compose(h, g);
      if (group.insert(gh).second) {
        if (group.size() > cap) throw std::runtime_error("group closure cap exceeded");
        queue.push_back(gh);
      }
    }
  }
  return group;
}

inline SignedPermutation to_signed(const Permutation& perm) {
  SignedPermutation sp;
  sp.image.resize(perm.image.size());
  for (std::size_t j = 0; j < perm.image.size(); ++j) sp.image[j] = {perm.image[j], 1};
  return sp;
}

}  // namespace cipkit

#endif  // CIPKIT_SYMMETRY_HPP_
