#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nnkkt/activation.hpp"
#include "nnkkt/errors.hpp"

namespace nnkkt {

enum class Architecture { no_hidden, one_hidden };

inline const char* architecture_name(Architecture a) {
  return a == Architecture::no_hidden ? "no_hidden" : "one_hidden";
}

struct HiddenUnit {
  std::vector<double> w;
  double w0 = 0.0;
  double a = 1.0;
};

namespace detail {
inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}
}  // namespace detail

// Model parameters. no_hidden is a one_hidden network pinned to a single unit
// with output weight a = 1, so evaluation shares one code path.
class NetworkParams {
 public:
  static NetworkParams no_hidden(std::vector<double> w, double w0) {
    HiddenUnit unit{std::move(w), w0, 1.0};
    return NetworkParams(Architecture::no_hidden, {std::move(unit)});
  }

  static NetworkParams one_hidden(std::vector<HiddenUnit> units) {
    return NetworkParams(Architecture::one_hidden, std::move(units));
  }

  NetworkParams(Architecture arch, std::vector<HiddenUnit> units)
      : arch_(arch), units_(std::move(units)) {
    if (units_.empty()) throw DimensionMismatchError("no units");
    if (arch_ == Architecture::no_hidden) {
      if (units_.size() != 1)
        throw DimensionMismatchError("no_hidden requires exactly one unit");
      if (units_[0].a != 1.0)
        throw DimensionMismatchError("no_hidden requires a = 1");
    }
    std::size_t d = units_[0].w.size();
    if (d == 0) throw DimensionMismatchError("weight dimension must be >= 1");
    for (const auto& u : units_) {
      if (u.w.size() != d)
        throw DimensionMismatchError("units disagree on input dimension");
      if (!detail::all_finite(u.w) || !std::isfinite(u.w0) ||
          !std::isfinite(u.a))
        throw DimensionMismatchError("nonfinite parameter");
    }
  }

  Architecture architecture() const { return arch_; }
  int input_dim() const { return static_cast<int>(units_[0].w.size()); }
  int unit_count() const { return static_cast<int>(units_.size()); }
  const std::vector<HiddenUnit>& units() const { return units_; }

  // Length of the flattened decision vector: d+1 for no_hidden,
  // n(d+1)+n for one_hidden.
  int flat_dim() const {
    int d = input_dim();
    int n = unit_count();
    return arch_ == Architecture::no_hidden ? d + 1 : n * (d + 1) + n;
  }

  // Canonical order: per unit j the block (w_0^j, w_1^j, ..., w_d^j), then
  // the output weights a_1..a_n (one_hidden only).
  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(flat_dim());
    for (const auto& u : units_) {
      out.push_back(u.w0);
      out.insert(out.end(), u.w.begin(), u.w.end());
    }
    if (arch_ == Architecture::one_hidden)
      for (const auto& u : units_) out.push_back(u.a);
    return out;
  }

  static NetworkParams unflatten(Architecture arch, int d, int n,
                                 const std::vector<double>& flat) {
    if (d < 1 || n < 1) throw DimensionMismatchError("d and n must be >= 1");
    if (arch == Architecture::no_hidden && n != 1)
      throw DimensionMismatchError("no_hidden requires n = 1");
    std::size_t expect = (arch == Architecture::no_hidden)
                             ? std::size_t(d) + 1
                             : std::size_t(n) * (d + 1) + n;
    if (flat.size() != expect)
      throw DimensionMismatchError("flat vector has length " +
                                   std::to_string(flat.size()) + ", expected " +
                                   std::to_string(expect));
    std::vector<HiddenUnit> units(n);
    std::size_t k = 0;
    for (int j = 0; j < n; ++j) {
      units[j].w0 = flat[k++];
      units[j].w.assign(flat.begin() + k, flat.begin() + k + d);
      k += d;
    }
    if (arch == Architecture::one_hidden)
      for (int j = 0; j < n; ++j) units[j].a = flat[k++];
    else
      units[0].a = 1.0;
    return NetworkParams(arch, std::move(units));
  }

 private:
  Architecture arch_;
  std::vector<HiddenUnit> units_;
};

// Discretisation points T_i with target values f(T_i).
class Dataset {
 public:
  Dataset(std::vector<std::vector<double>> points, std::vector<double> targets)
      : points_(std::move(points)), targets_(std::move(targets)) {
    if (points_.empty()) throw EmptyDatasetError("dataset has no points");
    if (points_.size() != targets_.size())
      throw DimensionMismatchError("points/targets count mismatch");
    std::size_t d = points_[0].size();
    if (d == 0) throw DimensionMismatchError("point dimension must be >= 1");
    for (const auto& p : points_) {
      if (p.size() != d)
        throw DimensionMismatchError("ragged point dimensions");
      if (!detail::all_finite(p))
        throw DimensionMismatchError("nonfinite point coordinate");
    }
    if (!detail::all_finite(targets_))
      throw DimensionMismatchError("nonfinite target");
  }

  int size() const { return static_cast<int>(points_.size()); }
  int dim() const { return static_cast<int>(points_[0].size()); }
  const std::vector<double>& point(int i) const { return points_[i]; }
  double target(int i) const { return targets_[i]; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<double>& targets() const { return targets_; }

 private:
  std::vector<std::vector<double>> points_;
  std::vector<double> targets_;
};

namespace detail {
inline double dot_affine(const HiddenUnit& u, const std::vector<double>& t) {
  double s = u.w0;
  for (std::size_t k = 0; k < t.size(); ++k) s += u.w[k] * t[k];
  return s;
}
}  // namespace detail

// sigma(w.T + w0) for no_hidden, sum_j a_j sigma(w^j.T + w0^j) for one_hidden.
inline double network_eval(const NetworkParams& params, const Activation& act,
                           const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != params.input_dim())
    throw DimensionMismatchError("point dimension " +
                                 std::to_string(point.size()) +
                                 " does not match input dimension " +
                                 std::to_string(params.input_dim()));
  double value = 0.0;
  for (const auto& u : params.units())
    value += u.a * act.eval(detail::dot_affine(u, point));
  return value;
}

// Gradient of network_eval with respect to the flattened decision vector, in
// flatten() order: per unit a_j sigma'_j * (1, T), then sigma_j per output
// weight.
inline std::vector<double> network_param_gradient(
    const NetworkParams& params, const Activation& act,
    const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != params.input_dim())
    throw DimensionMismatchError("point dimension " +
                                 std::to_string(point.size()) +
                                 " does not match input dimension " +
                                 std::to_string(params.input_dim()));
  std::vector<double> grad;
  grad.reserve(params.flat_dim());
  for (const auto& u : params.units()) {
    double pre = detail::dot_affine(u, point);
    double slope = u.a * act.derivative(pre);
    grad.push_back(slope);
    for (double tk : point) grad.push_back(slope * tk);
  }
  if (params.architecture() == Architecture::one_hidden)
    for (const auto& u : params.units())
      grad.push_back(act.eval(detail::dot_affine(u, point)));
  return grad;
}

}  // namespace nnkkt
