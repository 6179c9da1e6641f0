#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "nnkkt/errors.hpp"
#include "nnkkt/linprog.hpp"

namespace nnkkt {

// Separation margins at or below this are numerically indistinguishable from
// contact; callers report the band between kLpFeasTol and this as Degenerate.
inline constexpr double kSeparationTol = 1e-9;

struct HullIntersection {
  std::vector<double> u_weights;  // lamhat over U
  std::vector<double> v_weights;  // muhat over V
  std::vector<double> point;      // sum lamhat_i u_i
  double defect = 0.0;            // ||sum lamhat u - sum muhat v||_inf
};

struct HullSeparation {
  std::vector<double> a;  // ||a||_inf <= 1
  double b = 0.0;
  double delta = 0.0;  // a.u >= b+delta on U, a.v <= b-delta on V
};

using HullIntersectionResult = std::variant<HullIntersection, HullSeparation>;

struct ZonotopeMember {
  std::vector<double> t;  // coefficients in [-1,1], one per generator
  double residual_inf = 0.0;
};

struct ZonotopeOutside {
  std::vector<double> a;  // ||a||_inf <= 1
  double gap = 0.0;       // a.s - sum_i |a.g_i|
};

using ZonotopeMembershipResult = std::variant<ZonotopeMember, ZonotopeOutside>;

namespace detail {

inline void check_point_set(const std::vector<std::vector<double>>& pts,
                            std::size_t dim, const char* what) {
  for (const auto& p : pts)
    if (p.size() != dim)
      throw DimensionMismatchError(std::string(what) +
                                   " vectors disagree on dimension");
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace detail

// Max-margin separating functional between two point sets:
//   maximize delta  s.t.  a.u_i >= b + delta,  a.v_j <= b - delta,
//   ||a||_inf <= 1.
// Throws NotSeparableError when the best margin is inside the numerical band.
inline HullSeparation separating_hyperplane(
    const std::vector<std::vector<double>>& U,
    const std::vector<std::vector<double>>& V) {
  if (U.empty() || V.empty()) throw EmptyInputError("empty point set");
  std::size_t m = U[0].size();
  detail::check_point_set(U, m, "U");
  detail::check_point_set(V, m, "V");
  int k1 = static_cast<int>(U.size());
  int k2 = static_cast<int>(V.size());
  int md = static_cast<int>(m);
  // columns: a (m, box [-1,1]) | b | delta | slack_u (k1) | slack_v (k2)
  StandardLP lp = StandardLP::make(k1 + k2, md + 2 + k1 + k2);
  for (int k = 0; k < md; ++k) {
    lp.lower[k] = -1.0;
    lp.upper[k] = 1.0;
  }
  lp.lower[md] = -kInfinity;      // b
  lp.lower[md + 1] = -kInfinity;  // delta
  for (int i = 0; i < k1; ++i) {
    for (int k = 0; k < md; ++k) lp.at(i, k) = U[i][k];
    lp.at(i, md) = -1.0;
    lp.at(i, md + 1) = -1.0;
    lp.at(i, md + 2 + i) = -1.0;
  }
  for (int j = 0; j < k2; ++j) {
    int r = k1 + j;
    for (int k = 0; k < md; ++k) lp.at(r, k) = -V[j][k];
    lp.at(r, md) = 1.0;
    lp.at(r, md + 1) = -1.0;
    lp.at(r, md + 2 + k1 + j) = -1.0;
  }
  lp.cost[md + 1] = -1.0;
  auto result = lp_minimize(lp);
  const auto* opt = std::get_if<LpOptimum>(&result);
  if (opt == nullptr)
    throw NotSeparableError("separation subproblem reported infeasible");
  HullSeparation sep;
  sep.a.assign(opt->x.begin(), opt->x.begin() + md);
  sep.b = opt->x[md];
  sep.delta = opt->x[md + 1];
  if (!(sep.delta > kSeparationTol))
    throw NotSeparableError("best separation margin " +
                            std::to_string(sep.delta) +
                            " is inside the numerical band");
  return sep;
}

// Do conv(U) and conv(V) share a point? Feasibility of
//   sum lam_i u_i - sum mu_j v_j = 0, sum lam = 1, sum mu = 1, lam, mu >= 0.
inline HullIntersectionResult hull_intersect(
    const std::vector<std::vector<double>>& U,
    const std::vector<std::vector<double>>& V) {
  if (U.empty() || V.empty()) throw EmptyInputError("empty point set");
  std::size_t m = U[0].size();
  detail::check_point_set(U, m, "U");
  detail::check_point_set(V, m, "V");
  int k1 = static_cast<int>(U.size());
  int k2 = static_cast<int>(V.size());
  int md = static_cast<int>(m);
  StandardLP lp = StandardLP::make(md + 2, k1 + k2);
  for (int j = 0; j < k1 + k2; ++j) lp.upper[j] = 1.0;
  for (int r = 0; r < md; ++r) {
    for (int i = 0; i < k1; ++i) lp.at(r, i) = U[i][r];
    for (int j = 0; j < k2; ++j) lp.at(r, k1 + j) = -V[j][r];
  }
  for (int i = 0; i < k1; ++i) lp.at(md, i) = 1.0;
  for (int j = 0; j < k2; ++j) lp.at(md + 1, k1 + j) = 1.0;
  lp.rhs[md] = 1.0;
  lp.rhs[md + 1] = 1.0;
  auto result = lp_phase1_feasible(lp);
  if (const auto* feas = std::get_if<LpFeasible>(&result)) {
    HullIntersection hit;
    hit.u_weights.assign(feas->x.begin(), feas->x.begin() + k1);
    hit.v_weights.assign(feas->x.begin() + k1, feas->x.end());
    hit.point.assign(m, 0.0);
    std::vector<double> vpoint(m, 0.0);
    for (int i = 0; i < k1; ++i)
      for (int r = 0; r < md; ++r) hit.point[r] += hit.u_weights[i] * U[i][r];
    for (int j = 0; j < k2; ++j)
      for (int r = 0; r < md; ++r) vpoint[r] += hit.v_weights[j] * V[j][r];
    for (int r = 0; r < md; ++r)
      hit.defect = std::max(hit.defect, std::fabs(hit.point[r] - vpoint[r]));
    return hit;
  }
  return separating_hyperplane(U, V);
}

// Is s in the zonotope sum_i t_i g_i, t in [-1,1]^k? Outside answers carry a
// functional with a.s > sum_i |a.g_i| by `gap`.
inline ZonotopeMembershipResult zonotope_contains(
    const std::vector<std::vector<double>>& gens,
    const std::vector<double>& s) {
  std::size_t m = s.size();
  if (m == 0) throw DimensionMismatchError("zero-dimensional target");
  detail::check_point_set(gens, m, "generator");
  int k = static_cast<int>(gens.size());
  int md = static_cast<int>(m);

  if (k > 0) {
    StandardLP lp = StandardLP::make(md, k);
    for (int j = 0; j < k; ++j) {
      lp.lower[j] = -1.0;
      lp.upper[j] = 1.0;
      for (int r = 0; r < md; ++r) lp.at(r, j) = gens[j][r];
    }
    for (int r = 0; r < md; ++r) lp.rhs[r] = s[r];
    auto result = lp_phase1_feasible(lp);
    if (const auto* feas = std::get_if<LpFeasible>(&result)) {
      ZonotopeMember member;
      member.t = feas->x;
      for (int r = 0; r < md; ++r) {
        double v = -s[r];
        for (int j = 0; j < k; ++j) v += member.t[j] * gens[j][r];
        member.residual_inf = std::max(member.residual_inf, std::fabs(v));
      }
      return member;
    }
  } else {
    double norm = 0.0;
    for (double v : s) norm = std::max(norm, std::fabs(v));
    if (norm <= kLpFeasTol) return ZonotopeMember{std::vector<double>(), 0.0};
  }

  // Margin problem: maximize a.s - sum_i h_i with h_i >= |a.g_i|.
  // columns: a (m, box [-1,1]) | h (k) | gap | p (k) | q (k) | s0
  StandardLP lp = StandardLP::make(2 * k + 1, md + k + 1 + 2 * k + 1);
  int col_h = md;
  int col_gap = md + k;
  int col_p = md + k + 1;
  int col_q = md + 2 * k + 1;
  int col_s0 = md + 3 * k + 1;
  for (int r = 0; r < md; ++r) {
    lp.lower[r] = -1.0;
    lp.upper[r] = 1.0;
  }
  lp.lower[col_gap] = -kInfinity;
  for (int i = 0; i < k; ++i) {
    for (int r = 0; r < md; ++r) lp.at(2 * i, r) = -gens[i][r];
    lp.at(2 * i, col_h + i) = 1.0;
    lp.at(2 * i, col_p + i) = -1.0;
    for (int r = 0; r < md; ++r) lp.at(2 * i + 1, r) = gens[i][r];
    lp.at(2 * i + 1, col_h + i) = 1.0;
    lp.at(2 * i + 1, col_q + i) = -1.0;
  }
  int last = 2 * k;
  for (int r = 0; r < md; ++r) lp.at(last, r) = s[r];
  for (int i = 0; i < k; ++i) lp.at(last, col_h + i) = -1.0;
  lp.at(last, col_gap) = -1.0;
  lp.at(last, col_s0) = -1.0;
  lp.cost[col_gap] = -1.0;
  auto result = lp_minimize(lp);
  const auto* opt = std::get_if<LpOptimum>(&result);
  if (opt == nullptr)
    throw NotSeparableError("zonotope margin subproblem reported infeasible");
  ZonotopeOutside outside;
  outside.a.assign(opt->x.begin(), opt->x.begin() + md);
  outside.gap = opt->x[col_gap];
  return outside;
}

}  // namespace nnkkt
