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

#ifndef CIPKIT_SIGNOMIAL_HPP_
#define CIPKIT_SIGNOMIAL_HPP_

#include <optional>
#include <vector>

#include "cipkit/cuts.hpp"
#include "cipkit/problem.hpp"
#include "cipkit/simplex.hpp"

namespace cipkit {

struct SignomialConfig {
  int max_undervars = 10;  // cap on the vertex-LP side dimension
};

/// Rewriting of t = x^alpha as u^beta = v^gamma with nonnegative exponents:
/// positive-exponent variables form the u side, t (exponent 1) and the
/// negative-exponent variables form the v side, and both exponent vectors are
/// scaled by eta = 1 / max(sum beta_bar, sum gamma_bar).
struct LiftedForm {
  std::vector<int> u_vars;
  std::vector<double> beta_bar, beta;
  std::vector<int> v_vars;  // t first, then negative-exponent variables
  std::vector<double> gamma_bar, gamma;
  double eta = 1.0;
  std::vector<double> u_lo, u_hi;
  std::vector<double> v_lo, v_hi;

  int h() const { return static_cast<int>(u_vars.size()); }
  int ell() const { return static_cast<int>(v_vars.size()); }
};

enum class SignomialSide { kS1, kS2 };  // S1: u^beta <= v^gamma, S2: >=
enum class SignomialMode { kS1, kS2, kEquality };

/// Affine estimator cut a.u + b <= g(vtilde) + grad g(vtilde).(v - vtilde),
/// stored both by side and as a final inequality over the original space.
struct EstimatorCut {
  SignomialSide side = SignomialSide::kS1;
  std::vector<double> under_coeffs;  // a over the underestimated side
  double under_offset = 0.0;         // b
  std::vector<double> grad_coeffs;   // gradient part over the other side
  double grad_offset = 0.0;          // g(point) - grad . point
  Cut inequality;                    // over original (x, t) variables
  double violation = 0.0;
};

namespace signomial_detail {

inline double power_product(const std::vector<double>& values,
                            const std::vector<double>& exponents) {
  double r = 1.0;
  for (std::size_t k = 0; k < values.size(); ++k) r *= std::pow(values[k], exponents[k]);
  return r;
}

}  // namespace signomial_detail

/// Splits exponents by sign, attaches t to the v side with exponent one, and
/// applies the positive power eta so that max(sum beta, sum gamma) = 1.
/// The t box is derived from the monotone range of x^alpha over the box when
/// the problem supplies none.
inline LiftedForm reformulate(const SignomialTerm& term, const std::vector<double>& lower,
                              const std::vector<double>& upper) {
  LiftedForm lf;
  double t_lo = 1.0, t_hi = 1.0;
  for (std::size_t k = 0; k < term.vars.size(); ++k) {
    const auto u = static_cast<std::size_t>(term.vars[k]);
    if (lower[u] <= 0.0 || !is_finite_value(upper[u]))
      throw std::invalid_argument("signomial variables need a positive bounded box");
    const double a = term.exponents[k];
    if (a == 0.0) continue;
    if (a > 0.0) {
      lf.u_vars.push_back(term.vars[k]);
      lf.beta_bar.push_back(a);
      lf.u_lo.push_back(lower[u]);
      lf.u_hi.push_back(upper[u]);
      t_lo *= std::pow(lower[u], a);
      t_hi *= std::pow(upper[u], a);
    } else {
      lf.v_vars.push_back(term.vars[k]);
      lf.gamma_bar.push_back(-a);
      lf.v_lo.push_back(lower[u]);
      lf.v_hi.push_back(upper[u]);
      t_lo *= std::pow(upper[u], a);
      t_hi *= std::pow(lower[u], a);
    }
  }
  // t joins the v side with exponent one
  const auto tu = static_cast<std::size_t>(term.tvar);
  double box_lo = t_lo, box_hi = t_hi;
  if (term.tvar < static_cast<int>(lower.size()) && lower[tu] > 0.0 &&
      is_finite_value(upper[tu])) {
    box_lo = lower[tu];
    box_hi = upper[tu];
  }
  lf.v_vars.insert(lf.v_vars.begin(), term.tvar);
  lf.gamma_bar.insert(lf.gamma_bar.begin(), 1.0);
  lf.v_lo.insert(lf.v_lo.begin(), box_lo);
  lf.v_hi.insert(lf.v_hi.begin(), box_hi);

  double sum_beta = 0.0, sum_gamma = 0.0;
  for (double b : lf.beta_bar) sum_beta += b;
  for (double g : lf.gamma_bar) sum_gamma += g;
  lf.eta = 1.0 / std::max(sum_beta, sum_gamma);
  lf.beta.resize(lf.beta_bar.size());
  lf.gamma.resize(lf.gamma_bar.size());
  for (std::size_t k = 0; k < lf.beta_bar.size(); ++k) lf.beta[k] = lf.eta * lf.beta_bar[k];
  for (std::size_t k = 0; k < lf.gamma_bar.size(); ++k) lf.gamma[k] = lf.eta * lf.gamma_bar[k];
  return lf;
}

/// Best affine underestimator of w^expo over the box at the point `tilde`:
/// solves max a.tilde + b subject to a.q + b <= q^expo on every box vertex.
/// The convex envelope over the box is vertex polyhedral, so vertex validity
/// gives box validity.
inline std::pair<std::vector<double>, double> underestimate_vertex_lp(
    const std::vector<double>& lo, const std::vector<double>& hi,
    const std::vector<double>& expo, const std::vector<double>& tilde, int max_undervars = 10) {
  const int h = static_cast<int>(lo.size());
  if (h > max_undervars)
    throw std::invalid_argument("underestimator dimension exceeds max_undervars");
  for (int k = 0; k < h; ++k)
    if (hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)] <= 1e-12)
      throw std::invalid_argument("degenerate box side");
  if (h == 0) return {{}, 1.0};  // empty product is the constant one

  // LP variables: a_1..a_h, b, all free. Rows: a.q + b <= q^expo per vertex.
  LpModel m;
  m.objective.assign(static_cast<std::size_t>(h + 1), 0.0);
  m.lower.assign(static_cast<std::size_t>(h + 1), -kInfinity);
  m.upper.assign(static_cast<std::size_t>(h + 1), kInfinity);
  m.integer.assign(static_cast<std::size_t>(h + 1), false);
  for (int k = 0; k < h; ++k)
    m.objective[static_cast<std::size_t>(k)] = -tilde[static_cast<std::size_t>(k)];
  m.objective[static_cast<std::size_t>(h)] = -1.0;

  std::vector<double> q(static_cast<std::size_t>(h));
  for (int mask = 0; mask < (1 << h); ++mask) {
    for (int k = 0; k < h; ++k)
      q[static_cast<std::size_t>(k)] =
          (mask >> k) & 1 ? hi[static_cast<std::size_t>(k)] : lo[static_cast<std::size_t>(k)];
    LinRow row;
    for (int k = 0; k < h; ++k) row.coeffs.push_back({k, q[static_cast<std::size_t>(k)]});
    row.coeffs.push_back({h, 1.0});
    row.rhs = signomial_detail::power_product(q, expo);
    m.rows.push_back(std::move(row));
  }
  Simplex lp(std::move(m));
  const LpResult r = lp.solve();
  if (!r.optimal()) throw std::runtime_error("vertex LP failed to solve");
  std::vector<double> a(r.x.begin(), r.x.begin() + h);
  return {a, r.x[static_cast<std::size_t>(h)]};
}

inline std::pair<std::vector<double>, double> underestimate_u_beta(const LiftedForm& lf,
                                                                   const std::vector<double>& u,
                                                                   int max_undervars = 10) {
  return underestimate_vertex_lp(lf.u_lo, lf.u_hi, lf.beta, u, max_undervars);
}

/// Gradient overestimator of the concave g(v) = v^gamma at vtilde: returns
/// (coefficients, offset) of the affine majorant coeffs.v + offset.
inline std::pair<std::vector<double>, double> overestimate_v_gamma(
    const std::vector<double>& gamma, const std::vector<double>& vtilde) {
  for (double v : vtilde)
    if (v <= 0.0) throw std::invalid_argument("gradient point must be strictly positive");
  const double g = signomial_detail::power_product(vtilde, gamma);
  std::vector<double> coeffs(vtilde.size(), 0.0);
  double offset = g;
  for (std::size_t k = 0; k < vtilde.size(); ++k) {
    coeffs[k] = gamma[k] * g / vtilde[k];
    offset -= coeffs[k] * vtilde[k];
  }
  return {coeffs, offset};
}

inline std::pair<std::vector<double>, double> overestimate_v_gamma(const LiftedForm& lf,
                                                                   const std::vector<double>& v) {
  return overestimate_v_gamma(lf.gamma, v);
}

/// Separates a point from the requested side of the lifted signomial set.
/// Returns the violated-side estimator cut, or nullopt when the point lies on
/// the requested side or the computed inequality fails to cut it off. In
/// equality mode the side violated by the point is separated.
inline std::optional<EstimatorCut> separate(const SignomialTerm& term,
                                            const std::vector<double>& lower,
                                            const std::vector<double>& upper,
                                            const std::vector<double>& point,
                                            SignomialMode mode = SignomialMode::kEquality,
                                            const SignomialConfig& cfg = SignomialConfig{},
                                            const Tolerances& tol = Tolerances{}) {
  const LiftedForm lf = reformulate(term, lower, upper);
  std::vector<double> u(lf.u_vars.size()), v(lf.v_vars.size());
  for (std::size_t k = 0; k < lf.u_vars.size(); ++k) {
    u[k] = point[static_cast<std::size_t>(lf.u_vars[k])];
    if (u[k] <= 0.0) throw std::invalid_argument("separation point must be strictly positive");
  }
  for (std::size_t k = 0; k < lf.v_vars.size(); ++k) {
    v[k] = point[static_cast<std::size_t>(lf.v_vars[k])];
    if (v[k] <= 0.0) throw std::invalid_argument("separation point must be strictly positive");
  }
  const double u_pow = signomial_detail::power_product(u, lf.beta);
  const double v_pow = signomial_detail::power_product(v, lf.gamma);

  auto build = [&](SignomialSide side) -> std::optional<EstimatorCut> {
    EstimatorCut cut;
    cut.side = side;
    const auto& under_vars = side == SignomialSide::kS1 ? lf.u_vars : lf.v_vars;
    const auto& grad_vars = side == SignomialSide::kS1 ? lf.v_vars : lf.u_vars;
    const auto& under_point = side == SignomialSide::kS1 ? u : v;
    const auto& grad_point = side == SignomialSide::kS1 ? v : u;
    std::pair<std::vector<double>, double> under, over;
    if (side == SignomialSide::kS1) {
      under = underestimate_vertex_lp(lf.u_lo, lf.u_hi, lf.beta, u, cfg.max_undervars);
      over = overestimate_v_gamma(lf.gamma, v);
    } else {
      under = underestimate_vertex_lp(lf.v_lo, lf.v_hi, lf.gamma, v, cfg.max_undervars);
      over = overestimate_v_gamma(lf.beta, u);
    }
    cut.under_coeffs = under.first;
    cut.under_offset = under.second;
    cut.grad_coeffs = over.first;
    cut.grad_offset = over.second;
    // violation of a.u + b <= grad(v) at the separation point
    double lhs = cut.under_offset, rhs = cut.grad_offset;
    for (std::size_t k = 0; k < under_point.size(); ++k)
      lhs += cut.under_coeffs[k] * under_point[k];
    for (std::size_t k = 0; k < grad_point.size(); ++k) rhs += cut.grad_coeffs[k] * grad_point[k];
    cut.violation = lhs - rhs;
    if (cut.violation <= tol.zero) return std::nullopt;
    SparseVector coeffs;
    for (std::size_t k = 0; k < under_vars.size(); ++k)
      coeffs.push_back({under_vars[k], cut.under_coeffs[k]});
    for (std::size_t k = 0; k < grad_vars.size(); ++k)
      coeffs.push_back({grad_vars[k], -cut.grad_coeffs[k]});
    cut.inequality.coeffs = canonicalize(std::move(coeffs), 1e-14);
    cut.inequality.rhs = cut.grad_offset - cut.under_offset;
    cut.inequality.origin = CutOrigin::kSignomial;
    return cut;
  };

  std::optional<EstimatorCut> best;
  const bool s1_violated = u_pow > v_pow + tol.zero;  // point outside S1
  const bool s2_violated = v_pow > u_pow + tol.zero;  // point outside S2
  if (s1_violated && (mode == SignomialMode::kS1 || mode == SignomialMode::kEquality))
    best = build(SignomialSide::kS1);
  if (s2_violated && (mode == SignomialMode::kS2 || mode == SignomialMode::kEquality)) {
    auto alt = build(SignomialSide::kS2);
    if (alt && (!best || alt->violation > best->violation)) best = alt;
  }
  return best;
}

}  // namespace cipkit

#endif  // CIPKIT_SIGNOMIAL_HPP_
