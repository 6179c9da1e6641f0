#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nnkkt/deviation.hpp"
#include "nnkkt/errors.hpp"
#include "nnkkt/linprog.hpp"
#include "nnkkt/network.hpp"

namespace nnkkt {

inline double loss_value(const NetworkParams& params, const Activation& act,
                         const Dataset& data, LossMode mode) {
  DeviationProfile p = compute_residuals(params, act, data);
  return mode == LossMode::uniform ? p.z_max : p.l1_total;
}

// Level-z feasibility of the no-hidden uniform problem: is there (w, w0)
// with |sigma(w.T_i + w0) - f_i| <= z for all i? Monotonicity turns each
// constraint into an interval for the pre-activation w.T_i + w0, clipped at
// the activation's image boundary; the interval system is a small LP.
// Returns the feasible parameters, or nothing.
inline std::optional<NetworkParams> uniform_level_params(const Dataset& data,
                                                         const Activation& act,
                                                         double z) {
  if (!(z >= 0.0)) throw OutOfRangeError("level must be >= 0");
  int d = data.dim();
  int n = data.size();
  struct RowBound {
    int point;
    double lo, hi;
  };
  std::vector<RowBound> rows;
  for (int i = 0; i < n; ++i) {
    double f = data.target(i);
    if (f - z >= act.range_high() || f + z <= act.range_low()) return {};
    double lo = (f - z > act.range_low()) ? act.inverse(f - z) : -kInfinity;
    double hi = (f + z < act.range_high()) ? act.inverse(f + z) : kInfinity;
    if (std::isfinite(lo) || std::isfinite(hi)) rows.push_back({i, lo, hi});
  }
  if (rows.empty())
    return NetworkParams::no_hidden(std::vector<double>(d, 0.0), 0.0);
  int m = static_cast<int>(rows.size());
  // columns: w0 | w (d) | one interval slack per constrained point
  StandardLP lp = StandardLP::make(m, 1 + d + m);
  for (int j = 0; j < 1 + d; ++j) {
    lp.lower[j] = -kInfinity;
    lp.upper[j] = kInfinity;
  }
  for (int r = 0; r < m; ++r) {
    lp.at(r, 0) = 1.0;
    const auto& t = data.point(rows[r].point);
    for (int k = 0; k < d; ++k) lp.at(r, 1 + k) = t[k];
    lp.at(r, 1 + d + r) = -1.0;
    lp.lower[1 + d + r] = rows[r].lo;
    lp.upper[1 + d + r] = rows[r].hi;
  }
  auto result = lp_phase1_feasible(lp);
  const auto* feas = std::get_if<LpFeasible>(&result);
  if (feas == nullptr) return {};
  std::vector<double> w(feas->x.begin() + 1, feas->x.begin() + 1 + d);
  return NetworkParams::no_hidden(std::move(w), feas->x[0]);
}

struct BisectionResult {
  NetworkParams params;
  double z_star = 0.0;
  int iterations = 0;
};

// Bisection over the level-feasibility predicate; the uniform no-hidden
// objective is quasiconvex for a strictly monotone activation so the
// feasible levels form a ray. Invariant kept throughout: z_hi feasible,
// z_lo infeasible or zero. Returns the last feasible parameters and
// z_star = z_hi with z_opt <= z_star <= z_opt + eps.
inline BisectionResult bisect_uniform_no_hidden(const Dataset& data,
                                                const Activation& act,
                                                double eps = 1e-6) {
  if (!(eps > 0.0)) throw OutOfRangeError("eps must be > 0");
  double mid = act.eval(0.0);
  double z_hi = 0.0;
  for (double f : data.targets()) z_hi = std::max(z_hi, std::fabs(mid - f));
  z_hi += 1.0;
  std::optional<NetworkParams> best = uniform_level_params(data, act, z_hi);
  for (int grow = 0; !best && grow < 64; ++grow) {
    z_hi *= 2.0;
    best = uniform_level_params(data, act, z_hi);
  }
  if (!best)
    throw NoFiniteBracketError("no finite level is feasible for this data");
  double z_lo = 0.0;
  int iters = 0;
  while (z_hi - z_lo > eps && iters < 200) {
    double zm = 0.5 * (z_lo + z_hi);
    if (auto p = uniform_level_params(data, act, zm)) {
      best = std::move(p);
      z_hi = zm;
    } else {
      z_lo = zm;
    }
    ++iters;
  }
  return BisectionResult{std::move(*best), z_hi, iters};
}

// Projected-free subgradient descent on the chosen loss with the
// step0/sqrt(k+1) schedule; returns the best iterate by loss (never worse
// than the start). Deterministic.
inline NetworkParams subgradient_descent(const NetworkParams& params0,
                                         const Activation& act,
                                         const Dataset& data, LossMode mode,
                                         int steps, double step0) {
  if (steps < 1) throw OutOfRangeError("steps must be >= 1");
  if (!(step0 > 0.0)) throw OutOfRangeError("step0 must be > 0");
  Architecture arch = params0.architecture();
  int d = params0.input_dim();
  int n = params0.unit_count();
  std::vector<double> x = params0.flatten();
  std::vector<double> best_x = x;
  double best_loss = loss_value(params0, act, data, mode);
  for (int k = 0; k < steps; ++k) {
    NetworkParams cur = NetworkParams::unflatten(arch, d, n, x);
    DeviationProfile prof = compute_residuals(cur, act, data);
    std::vector<double> g(x.size(), 0.0);
    if (mode == LossMode::uniform) {
      int star = 0;
      for (int i = 1; i < data.size(); ++i)
        if (std::fabs(prof.residuals[i]) > std::fabs(prof.residuals[star]))
          star = i;
      double sgn = (prof.residuals[star] > 0.0)   ? 1.0
                   : (prof.residuals[star] < 0.0) ? -1.0
                                                  : 0.0;
      if (sgn != 0.0) {
        auto grad = network_param_gradient(cur, act, data.point(star));
        for (std::size_t r = 0; r < g.size(); ++r) g[r] = sgn * grad[r];
      }
    } else {
      for (int i = 0; i < data.size(); ++i) {
        double r = prof.residuals[i];
        if (r == 0.0) continue;
        double sgn = r > 0.0 ? 1.0 : -1.0;
        auto grad = network_param_gradient(cur, act, data.point(i));
        for (std::size_t r2 = 0; r2 < g.size(); ++r2) g[r2] += sgn * grad[r2];
      }
    }
    double step = step0 / std::sqrt(double(k + 1));
    for (std::size_t r = 0; r < x.size(); ++r) x[r] -= step * g[r];
    NetworkParams next = NetworkParams::unflatten(arch, d, n, x);
    double loss = loss_value(next, act, data, mode);
    if (loss < best_loss) {
      best_loss = loss;
      best_x = x;
    }
  }
  return NetworkParams::unflatten(arch, d, n, best_x);
}

struct GridSpec {
  double lo = -10.0;
  double hi = 10.0;
  int resolution = 201;  // points per parameter axis
};

struct OracleResult {
  NetworkParams params;
  double loss = 0.0;
};

// Exhaustive loss minimization over a uniform parameter grid; ties resolve
// to the lexicographically smallest parameter vector. Test oracle only.
inline OracleResult brute_force_oracle(const Dataset& data,
                                       const Activation& act, LossMode mode,
                                       Architecture arch, int n_units,
                                       const GridSpec& grid) {
  if (grid.resolution < 1) throw OutOfRangeError("grid resolution must be >= 1");
  if (!(grid.lo <= grid.hi)) throw OutOfRangeError("grid bounds inverted");
  if (arch == Architecture::no_hidden && n_units != 1)
    throw DimensionMismatchError("no_hidden requires one unit");
  int d = data.dim();
  int pcount = (arch == Architecture::no_hidden) ? d + 1
                                                 : n_units * (d + 1) + n_units;
  double total = std::pow(double(grid.resolution), double(pcount));
  if (total > 1e7)
    throw GridTooLargeError("grid has ~" + std::to_string(total) +
                            " points, limit 1e7");
  std::vector<double> axis(grid.resolution);
  for (int i = 0; i < grid.resolution; ++i)
    axis[i] = (grid.resolution == 1)
                  ? grid.lo
                  : grid.lo + (grid.hi - grid.lo) * i / (grid.resolution - 1);
  std::vector<int> idx(pcount, 0);
  std::vector<double> flat(pcount, axis[0]);
  std::vector<double> best_flat;
  double best_loss = kInfinity;
  for (;;) {
    NetworkParams p = NetworkParams::unflatten(arch, d, n_units, flat);
    double loss = loss_value(p, act, data, mode);
    if (loss < best_loss) {
      best_loss = loss;
      best_flat = flat;
    }
    int pos = pcount - 1;
    while (pos >= 0 && idx[pos] == grid.resolution - 1) {
      idx[pos] = 0;
      flat[pos] = axis[0];
      --pos;
    }
    if (pos < 0) break;
    ++idx[pos];
    flat[pos] = axis[idx[pos]];
  }
  return OracleResult{NetworkParams::unflatten(arch, d, n_units, best_flat),
                      best_loss};
}

struct GradCheckReport {
  double max_rel_error = 0.0;
  int worst_point = -1;
  int worst_entry = -1;
  double threshold = 1e-6;
  bool passed = true;
};

// Central-difference validation of network_param_gradient at every dataset
// point; relative error is |analytic - numeric| / max(1, |analytic|, |numeric|).
inline GradCheckReport grad_check(const NetworkParams& params,
                                  const Activation& act, const Dataset& data,
                                  double h, double threshold = 1e-6) {
  if (!(h > 0.0)) throw OutOfRangeError("step h must be > 0");
  GradCheckReport report;
  report.threshold = threshold;
  Architecture arch = params.architecture();
  int d = params.input_dim();
  int n = params.unit_count();
  std::vector<double> x = params.flatten();
  for (int i = 0; i < data.size(); ++i) {
    auto analytic = network_param_gradient(params, act, data.point(i));
    for (std::size_t r = 0; r < x.size(); ++r) {
      std::vector<double> xp = x, xm = x;
      xp[r] += h;
      xm[r] -= h;
      double fp = network_eval(NetworkParams::unflatten(arch, d, n, xp), act,
                               data.point(i));
      double fm = network_eval(NetworkParams::unflatten(arch, d, n, xm), act,
                               data.point(i));
      double numeric = (fp - fm) / (2.0 * h);
      double rel = std::fabs(analytic[r] - numeric) /
                   std::max({1.0, std::fabs(analytic[r]), std::fabs(numeric)});
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_point = i;
        report.worst_entry = static_cast<int>(r);
      }
    }
  }
  report.passed = report.max_rel_error <= threshold;
  return report;
}

}  // namespace nnkkt
