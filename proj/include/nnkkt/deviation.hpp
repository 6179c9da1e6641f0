#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nnkkt/errors.hpp"
#include "nnkkt/network.hpp"

namespace nnkkt {

enum class LossMode { uniform, manhattan };

inline const char* loss_mode_name(LossMode m) {
  return m == LossMode::uniform ? "uniform" : "l1";
}

// Residual vector r_i = model(T_i) - f(T_i) with its max and L1 summaries.
struct DeviationProfile {
  std::vector<double> residuals;
  double z_max = 0.0;
  double l1_total = 0.0;

  static DeviationProfile from_residuals(std::vector<double> r) {
    DeviationProfile p;
    p.residuals = std::move(r);
    for (double v : p.residuals) {
      if (!std::isfinite(v)) throw DimensionMismatchError("nonfinite residual");
      p.z_max = std::max(p.z_max, std::fabs(v));
      p.l1_total += std::fabs(v);
    }
    return p;
  }
};

inline DeviationProfile compute_residuals(const NetworkParams& params,
                                          const Activation& act,
                                          const Dataset& data) {
  std::vector<double> r(data.size());
  for (int i = 0; i < data.size(); ++i)
    r[i] = network_eval(params, act, data.point(i)) - data.target(i);
  return DeviationProfile::from_residuals(std::move(r));
}

// Index partition after renumeration: positive / negative / zero deviation
// points. Indices are 0-based and ascending within each list.
struct PointClassification {
  LossMode mode = LossMode::uniform;
  std::vector<int> positive;  // P
  std::vector<int> negative;  // Nn
  std::vector<int> zero;      // C
  double tol = 0.0;

  int n1() const { return static_cast<int>(positive.size()); }
  int n2() const { return static_cast<int>(negative.size()); }
  int n3() const { return static_cast<int>(zero.size()); }
};

inline constexpr double kManhattanTol = 1e-8;

inline double default_uniform_tol(double z_max) {
  return std::max(1e-8, 1e-6 * z_max);
}

inline double default_tol(LossMode mode, double z_max) {
  return mode == LossMode::uniform ? default_uniform_tol(z_max)
                                   : kManhattanTol;
}

// Uniform: P/Nn hold the maximal-deviation points (|r_i| within tol of z_max)
// split by sign, everything else lands in C; exact zeros always land in C.
// Manhattan: split by sign against the +-tol band around zero.
inline PointClassification classify(const DeviationProfile& profile,
                                    LossMode mode, double tol) {
  if (!(tol > 0.0)) throw OutOfRangeError("classification tolerance must be > 0");
  PointClassification out;
  out.mode = mode;
  out.tol = tol;
  int n = static_cast<int>(profile.residuals.size());
  if (mode == LossMode::uniform) {
    if (profile.z_max <= tol)
      throw DegenerateProfileError(
          "max deviation " + std::to_string(profile.z_max) +
          " is within tolerance; every point has zero deviation");
    double cut = profile.z_max - tol;
    for (int i = 0; i < n; ++i) {
      double r = profile.residuals[i];
      if (r > 0.0 && std::fabs(r) >= cut)
        out.positive.push_back(i);
      else if (r < 0.0 && std::fabs(r) >= cut)
        out.negative.push_back(i);
      else
        out.zero.push_back(i);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double r = profile.residuals[i];
      if (r > tol)
        out.positive.push_back(i);
      else if (r < -tol)
        out.negative.push_back(i);
      else
        out.zero.push_back(i);
    }
  }
  return out;
}

}  // namespace nnkkt
