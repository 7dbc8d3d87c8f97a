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

#ifndef CIPKIT_PSEUDOCOST_HPP_
#define CIPKIT_PSEUDOCOST_HPP_

#include <vector>

#include "cipkit/core.hpp"

namespace cipkit {

/// Per-variable, per-direction history of objective gain per unit of
/// fractionality. Variables without history fall back to the average over
/// initialized variables.
class PseudoCostStore {
 public:
  explicit PseudoCostStore(int num_vars = 0) { resize(num_vars); }

  void resize(int num_vars) { entries_.assign(static_cast<std::size_t>(num_vars), Entry{}); }

  int size() const { return static_cast<int>(entries_.size()); }

  void update(int var, bool down, double gain, double fractionality) {
    if (gain < 0.0) throw std::invalid_argument("pseudo-cost gain must be nonnegative");
    if (fractionality <= 0.0 || fractionality >= 1.0)
      throw std::invalid_argument("fractionality must lie in (0,1)");
    auto& e = entries_[static_cast<std::size_t>(var)];
    const double per_unit = gain / (down ? fractionality : 1.0 - fractionality);
    if (down) { e.sum_down += per_unit; ++e.count_down; }
    else { e.sum_up += per_unit; ++e.count_up; }
  }

  /// Per-unit gain estimate for one direction.
  double estimate(int var, bool down) const {
    const auto& e = entries_[static_cast<std::size_t>(var)];
    const int cnt = down ? e.count_down : e.count_up;
    if (cnt > 0) return (down ? e.sum_down : e.sum_up) / cnt;
    // uninitialized: average of initialized variables in the same direction
    double sum = 0.0;
    int total = 0;
    for (const auto& other : entries_) {
      const int c = down ? other.count_down : other.count_up;
      if (c > 0) { sum += (down ? other.sum_down : other.sum_up) / c; ++total; }
    }
    return total > 0 ? sum / total : 0.0;
  }

  /// Product of the down and up gain estimates at the given fractionality.
  double product_score(int var, double fractionality) const {
    const double down_gain = estimate(var, true) * fractionality;
    const double up_gain = estimate(var, false) * (1.0 - fractionality);
    return down_gain * up_gain;
  }

  int observations(int var, bool down) const {
    const auto& e = entries_[static_cast<std::size_t>(var)];
    return down ? e.count_down : e.count_up;
  }

 private:
  struct Entry {
    double sum_down = 0.0, sum_up = 0.0;
    int count_down = 0, count_up = 0;
  };
  std::vector<Entry> entries_;
};

}  // namespace cipkit

#endif  // CIPKIT_PSEUDOCOST_HPP_
