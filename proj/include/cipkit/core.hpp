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

#ifndef CIPKIT_CORE_HPP_
#define CIPKIT_CORE_HPP_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cipkit {

/// Values with magnitude at or above this sentinel are treated as infinite.
inline constexpr double kInfinity = 1e20;

inline bool is_infinite(double v) { return std::abs(v) >= kInfinity; }
inline bool is_finite_value(double v) { return std::abs(v) < kInfinity; }

/// Feasibility, integrality, and zero tolerances shared across the kernel.
struct Tolerances {
  double feasibility = 1e-6;
  double integrality = 1e-6;
  double zero = 1e-9;

  void validate() const {
    if (feasibility <= 0.0 || integrality <= 0.0 || zero <= 0.0)
      throw std::invalid_argument("tolerances must be strictly positive");
    if (zero >= feasibility)
      throw std::invalid_argument("zero tolerance must be below feasibility tolerance");
  }
};

/// Sparse vector entry over variable indices.
struct SparseEntry {
  int index = 0;
  double value = 0.0;
};

using SparseVector = std::vector<SparseEntry>;

/// Sorts by index and merges duplicates, dropping entries below `drop_tol`.
inline SparseVector canonicalize(SparseVector v, double drop_tol = 0.0) {
  std::sort(v.begin(), v.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  SparseVector out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!out.empty() && out.back().index == e.index)
      out.back().value += e.value;
    else
      out.push_back(e);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [&](const SparseEntry& e) { return std::abs(e.value) <= drop_tol; }),
            out.end());
  return out;
}

inline double sparse_dot(const SparseVector& a, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& e : a) s += e.value * x[static_cast<std::size_t>(e.index)];
  return s;
}

inline double sparse_norm2(const SparseVector& a) {
  double s = 0.0;
  for (const auto& e : a) s += e.value * e.value;
  return std::sqrt(s);
}

/// Cosine of the angle between two sparse vectors; 0 if either has zero norm.
inline double sparse_cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].index < b[j].index)
      ++i;
    else if (a[i].index > b[j].index)
      ++j;
    else
      dot += a[i++].value * b[j++].value;
  }
  const double na = sparse_norm2(a);
  const double nb = sparse_norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

inline double frac(double v) { return v - std::floor(v); }

inline bool is_integral(double v, double eps) {
  return std::abs(v - std::round(v)) <= eps;
}

/// Canonical representative of a numeric value on a 1e-9 grid. Used wherever
/// two floating-point quantities must be compared for exact class membership.
inline double snap_value(double v) {
  if (v >= kInfinity) return std::numeric_limits<double>::infinity();
  if (v <= -kInfinity) return -std::numeric_limits<double>::infinity();
  const double snapped = std::nearbyint(v * 1e9) / 1e9;
  return snapped == 0.0 ? 0.0 : snapped;  // normalize -0
}

}  // namespace cipkit

#endif  // CIPKIT_CORE_HPP_
