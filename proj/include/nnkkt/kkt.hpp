#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nnkkt/deviation.hpp"
#include "nnkkt/errors.hpp"
#include "nnkkt/network.hpp"
#include "nnkkt/polytope.hpp"

namespace nnkkt {

// Constraint-gradient vector attached to one discretisation point:
// no_hidden -> (1, T) sigma'(w.T+w0); one_hidden -> stacked blocks
// a_j (1, T) sigma'_j for j = 1..n followed by the block (sigma_j)_j.
inline std::vector<double> generator(const NetworkParams& params,
                                     const Activation& act,
                                     const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != params.input_dim())
    throw DimensionMismatchError("point dimension does not match parameters");
  std::vector<double> g;
  g.reserve(params.flat_dim());
  if (params.architecture() == Architecture::no_hidden) {
    const HiddenUnit& u = params.units()[0];
    double slope = act.derivative(detail::dot_affine(u, point));
    g.push_back(slope);
    for (double tk : point) g.push_back(slope * tk);
    return g;
  }
  for (const auto& u : params.units()) {
    double slope = u.a * act.derivative(detail::dot_affine(u, point));
    g.push_back(slope);
    for (double tk : point) g.push_back(slope * tk);
  }
  for (const auto& u : params.units())
    g.push_back(act.eval(detail::dot_affine(u, point)));
  return g;
}

enum class VerdictStatus { satisfied, violated, degenerate };

inline const char* verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::satisfied: return "satisfied";
    case VerdictStatus::violated: return "violated";
    default: return "degenerate";
  }
}

struct HullWitness {
  std::vector<double> u_weights;  // over P generators
  std::vector<double> v_weights;  // over Nn generators
  std::vector<double> point;
};

struct SeparationCertificate {
  std::vector<double> a;
  double b = 0.0;
  double delta = 0.0;
};

struct OptimalityVerdict {
  VerdictStatus status = VerdictStatus::degenerate;
  std::optional<HullWitness> hull_witness;        // uniform Satisfied
  std::optional<std::vector<double>> zonotope_t;  // manhattan Satisfied
  std::optional<SeparationCertificate> separation;
  // Satisfied: witness equality defect. Violated: separation margin, or
  // ||s||_inf in the Manhattan singleton case. Degenerate: 0.
  double residual_norm = 0.0;
  std::string note;
};

struct Multipliers {
  std::vector<double> on_positive;   // aligned with classification.positive
  std::vector<double> on_negative;   // aligned with classification.negative
  std::vector<double> plus_on_zero;  // Manhattan only, aligned with .zero
  std::vector<double> minus_on_zero;
};

namespace detail {

inline std::vector<std::vector<double>> all_generators(
    const NetworkParams& params, const Activation& act, const Dataset& data,
    double* max_norm) {
  std::vector<std::vector<double>> gens(data.size());
  double c = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    gens[i] = generator(params, act, data.point(i));
    for (double v : gens[i]) c = std::max(c, std::fabs(v));
  }
  *max_norm = c;
  return gens;
}

inline std::vector<std::vector<double>> gather_scaled(
    const std::vector<std::vector<double>>& gens, const std::vector<int>& idx,
    double inv_scale) {
  std::vector<std::vector<double>> out;
  out.reserve(idx.size());
  for (int i : idx) {
    std::vector<double> g = gens[i];
    for (double& v : g) v *= inv_scale;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace detail

// Uniform-loss necessary condition: conv{G_i : i in P} and
// conv{G_i : i in Nn} must intersect. Generators are normalized by the
// largest generator magnitude before the LP; certificates are reported in
// the original scale. tol overrides the classification tolerance.
inline OptimalityVerdict check_uniform(const NetworkParams& params,
                                       const Activation& act,
                                       const Dataset& data,
                                       std::optional<double> tol = {}) {
  DeviationProfile profile = compute_residuals(params, act, data);
  double tau = tol ? *tol : default_uniform_tol(profile.z_max);
  PointClassification cls = classify(profile, LossMode::uniform, tau);
  double scale = 0.0;
  auto gens = detail::all_generators(params, act, data, &scale);
  if (scale <= 0.0) scale = 1.0;
  OptimalityVerdict verdict;
  if (cls.positive.empty() || cls.negative.empty()) {
    verdict.status = VerdictStatus::violated;
    SeparationCertificate sep;
    sep.a.assign(params.flat_dim(), 0.0);
    sep.b = cls.positive.empty() ? 1.0 : -1.0;
    sep.delta = 1.0;
    verdict.separation = std::move(sep);
    verdict.residual_norm = 1.0;
    verdict.note = "one-sided maximal deviation, hulls cannot intersect";
    return verdict;
  }
  auto U = detail::gather_scaled(gens, cls.positive, 1.0 / scale);
  auto V = detail::gather_scaled(gens, cls.negative, 1.0 / scale);
  try {
    HullIntersectionResult res = hull_intersect(U, V);
    if (auto* hit = std::get_if<HullIntersection>(&res)) {
      HullWitness w;
      w.u_weights = std::move(hit->u_weights);
      w.v_weights = std::move(hit->v_weights);
      w.point = std::move(hit->point);
      for (double& v : w.point) v *= scale;
      verdict.status = VerdictStatus::satisfied;
      verdict.residual_norm = hit->defect * scale;
      verdict.hull_witness = std::move(w);
    } else {
      auto& sep = std::get<HullSeparation>(res);
      verdict.status = VerdictStatus::violated;
      verdict.separation =
          SeparationCertificate{std::move(sep.a), sep.b * scale,
                                sep.delta * scale};
      verdict.residual_norm = sep.delta * scale;
    }
  } catch (const NotSeparableError& e) {
    verdict.status = VerdictStatus::degenerate;
    verdict.note = e.what();
  }
  return verdict;
}

// Manhattan-loss necessary condition: s = sum_P G_i - sum_Nn G_i must lie in
// the zonotope spanned by the zero-deviation generators; with C empty the
// condition collapses to s = 0.
inline OptimalityVerdict check_manhattan(const NetworkParams& params,
                                         const Activation& act,
                                         const Dataset& data,
                                         std::optional<double> tol = {}) {
  DeviationProfile profile = compute_residuals(params, act, data);
  double tau = tol ? *tol : kManhattanTol;
  PointClassification cls = classify(profile, LossMode::manhattan, tau);
  double scale = 0.0;
  auto gens = detail::all_generators(params, act, data, &scale);
  if (scale <= 0.0) scale = 1.0;
  int fd = params.flat_dim();
  std::vector<double> s(fd, 0.0);
  for (int i : cls.positive)
    for (int r = 0; r < fd; ++r) s[r] += gens[i][r];
  for (int i : cls.negative)
    for (int r = 0; r < fd; ++r) s[r] -= gens[i][r];
  double s_norm = 0.0;
  for (double v : s) s_norm = std::max(s_norm, std::fabs(v));

  OptimalityVerdict verdict;
  std::vector<double> s_scaled = s;
  for (double& v : s_scaled) v /= scale;

  if (cls.zero.empty()) {
    if (s_norm <= tau) {
      verdict.status = VerdictStatus::satisfied;
      verdict.zonotope_t = std::vector<double>();
      verdict.residual_norm = s_norm;
      return verdict;
    }
    auto res = zonotope_contains({}, s_scaled);
    auto& out = std::get<ZonotopeOutside>(res);
    verdict.status = VerdictStatus::violated;
    verdict.separation =
        SeparationCertificate{std::move(out.a), 0.0, out.gap * scale};
    verdict.residual_norm = s_norm;
    verdict.note = "generator sums differ with no zero-deviation points";
    return verdict;
  }

  auto Q = detail::gather_scaled(gens, cls.zero, 1.0 / scale);
  auto res = zonotope_contains(Q, s_scaled);
  if (auto* member = std::get_if<ZonotopeMember>(&res)) {
    for (double& t : member->t) t = std::clamp(t, -1.0, 1.0);
    double defect = 0.0;
    for (int r = 0; r < fd; ++r) {
      double v = -s[r];
      for (std::size_t j = 0; j < member->t.size(); ++j)
        v += member->t[j] * gens[cls.zero[j]][r];
      defect = std::max(defect, std::fabs(v));
    }
    verdict.status = VerdictStatus::satisfied;
    verdict.zonotope_t = std::move(member->t);
    verdict.residual_norm = defect;
    return verdict;
  }
  auto& out = std::get<ZonotopeOutside>(res);
  if (out.gap > kSeparationTol) {
    verdict.status = VerdictStatus::violated;
    verdict.separation =
        SeparationCertificate{std::move(out.a), 0.0, out.gap * scale};
    verdict.residual_norm = out.gap * scale;
  } else {
    verdict.status = VerdictStatus::degenerate;
    verdict.note = "zonotope margin inside the numerical band";
  }
  return verdict;
}

// Lagrange multipliers realizing a Satisfied verdict. Uniform: hull weights
// halved so they sum to 1 across both sides. Manhattan: 1 on P and Nn;
// zonotope coefficient t_i splits into (1-t)/2 and (1+t)/2 on C.
inline Multipliers multipliers_from_witness(const OptimalityVerdict& verdict,
                                            const PointClassification& cls,
                                            LossMode mode) {
  if (verdict.status != VerdictStatus::satisfied)
    throw NoWitnessError("verdict is not Satisfied");
  Multipliers mult;
  if (mode == LossMode::uniform) {
    if (!verdict.hull_witness)
      throw NoWitnessError("uniform verdict carries no hull witness");
    const HullWitness& w = *verdict.hull_witness;
    if (w.u_weights.size() != cls.positive.size() ||
        w.v_weights.size() != cls.negative.size())
      throw ShapeMismatchError("witness size does not match classification");
    for (double v : w.u_weights) mult.on_positive.push_back(0.5 * v);
    for (double v : w.v_weights) mult.on_negative.push_back(0.5 * v);
  } else {
    if (!verdict.zonotope_t)
      throw NoWitnessError("manhattan verdict carries no zonotope witness");
    const std::vector<double>& t = *verdict.zonotope_t;
    if (t.size() != cls.zero.size())
      throw ShapeMismatchError("witness size does not match classification");
    mult.on_positive.assign(cls.positive.size(), 1.0);
    mult.on_negative.assign(cls.negative.size(), 1.0);
    for (double ti : t) {
      double c = std::clamp(ti, -1.0, 1.0);
      mult.plus_on_zero.push_back(0.5 * (1.0 - c));
      mult.minus_on_zero.push_back(0.5 * (1.0 + c));
    }
  }
  return mult;
}

// Literal stationarity vector of the epigraph reformulation.
// Uniform (length flat_dim+1, z last):
//   rows w: sum_P lam G - sum_Nn lam G; row z: 1 - sum lam.
// Manhattan (length flat_dim+N, z_i rows in renumerated order P, Nn, C):
//   rows w: sum_P lam G - sum_Nn lam G + sum_C (lam+ - lam-) G;
//   row z_i: 1 - (active multiplier mass on point i).
inline std::pair<std::vector<double>, double> assemble_kkt_residual(
    const NetworkParams& params, const Activation& act, const Dataset& data,
    const PointClassification& cls, const Multipliers& mult, LossMode mode) {
  if (mult.on_positive.size() != cls.positive.size() ||
      mult.on_negative.size() != cls.negative.size())
    throw ShapeMismatchError("multiplier lists do not match classification");
  for (double v : mult.on_positive)
    if (v < 0.0) throw ShapeMismatchError("negative multiplier");
  for (double v : mult.on_negative)
    if (v < 0.0) throw ShapeMismatchError("negative multiplier");
  int fd = params.flat_dim();
  std::vector<double> vec;
  if (mode == LossMode::uniform) {
    vec.assign(fd + 1, 0.0);
    vec[fd] = 1.0;
    for (std::size_t k = 0; k < cls.positive.size(); ++k) {
      auto g = generator(params, act, data.point(cls.positive[k]));
      double lam = mult.on_positive[k];
      for (int r = 0; r < fd; ++r) vec[r] += lam * g[r];
      vec[fd] -= lam;
    }
    for (std::size_t k = 0; k < cls.negative.size(); ++k) {
      auto g = generator(params, act, data.point(cls.negative[k]));
      double lam = mult.on_negative[k];
      for (int r = 0; r < fd; ++r) vec[r] -= lam * g[r];
      vec[fd] -= lam;
    }
  } else {
    if (mult.plus_on_zero.size() != cls.zero.size() ||
        mult.minus_on_zero.size() != cls.zero.size())
      throw ShapeMismatchError("zero-set multipliers do not match");
    for (double v : mult.plus_on_zero)
      if (v < 0.0) throw ShapeMismatchError("negative multiplier");
    for (double v : mult.minus_on_zero)
      if (v < 0.0) throw ShapeMismatchError("negative multiplier");
    int n = data.size();
    vec.assign(fd + n, 0.0);
    for (int r = 0; r < n; ++r) vec[fd + r] = 1.0;
    int row = fd;
    for (std::size_t k = 0; k < cls.positive.size(); ++k, ++row) {
      auto g = generator(params, act, data.point(cls.positive[k]));
      double lam = mult.on_positive[k];
      for (int r = 0; r < fd; ++r) vec[r] += lam * g[r];
      vec[row] -= lam;
    }
    for (std::size_t k = 0; k < cls.negative.size(); ++k, ++row) {
      auto g = generator(params, act, data.point(cls.negative[k]));
      double lam = mult.on_negative[k];
      for (int r = 0; r < fd; ++r) vec[r] -= lam * g[r];
      vec[row] -= lam;
    }
    for (std::size_t k = 0; k < cls.zero.size(); ++k, ++row) {
      auto g = generator(params, act, data.point(cls.zero[k]));
      double plus = mult.plus_on_zero[k];
      double minus = mult.minus_on_zero[k];
      for (int r = 0; r < fd; ++r) vec[r] += (plus - minus) * g[r];
      vec[row] -= plus + minus;
    }
  }
  double norm = 0.0;
  for (double v : vec) norm = std::max(norm, std::fabs(v));
  return {std::move(vec), norm};
}

}  // namespace nnkkt
