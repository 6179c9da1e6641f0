#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nnkkt/errors.hpp"

namespace nnkkt {

enum class ActivationKind { sigmoid, tanh, softplus };

// Univariate smooth, strictly increasing activation with an open image
// interval (range_low, range_high). All formulas are overflow-safe for any
// finite double argument.
class Activation {
 public:
  static Activation sigmoid() {
    return Activation(ActivationKind::sigmoid, 0.0, 1.0);
  }
  static Activation tanh() {
    return Activation(ActivationKind::tanh, -1.0, 1.0);
  }
  static Activation softplus() {
    return Activation(ActivationKind::softplus, 0.0,
                      std::numeric_limits<double>::infinity());
  }

  static Activation from_name(const std::string& name) {
    if (name == "sigmoid") return sigmoid();
    if (name == "tanh") return tanh();
    if (name == "softplus") return softplus();
    throw OutOfRangeError("unknown activation '" + name + "'");
  }

  ActivationKind kind() const { return kind_; }
  double range_low() const { return range_low_; }
  double range_high() const { return range_high_; }

  const char* name() const {
    switch (kind_) {
      case ActivationKind::sigmoid: return "sigmoid";
      case ActivationKind::tanh: return "tanh";
      default: return "softplus";
    }
  }

  double eval(double x) const {
    switch (kind_) {
      case ActivationKind::sigmoid: return logistic(x);
      case ActivationKind::tanh: return std::tanh(x);
      default: return std::fmax(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
    }
  }

  // sigma'(x); strictly positive for all finite x.
  double derivative(double x) const {
    switch (kind_) {
      case ActivationKind::sigmoid: {
        // sigma(x)sigma(-x) = t/(1+t)^2 with t = e^{-|x|}
        double t = std::exp(-std::fabs(x));
        double p = 1.0 + t;
        return t / (p * p);
      }
      case ActivationKind::tanh: {
        // sech^2(x) = 4t/(1+t)^2 with t = e^{-2|x|}
        double t = std::exp(-2.0 * std::fabs(x));
        double p = 1.0 + t;
        return 4.0 * t / (p * p);
      }
      default:
        return logistic(x);
    }
  }

  // Exact functional inverse on the open range.
  double inverse(double y) const {
    if (!(y > range_low_) || !(y < range_high_))
      throw OutOfRangeError("activation inverse argument " +
                            std::to_string(y) + " outside open range of " +
                            name());
    switch (kind_) {
      case ActivationKind::sigmoid:
        return std::log(y) - std::log1p(-y);
      case ActivationKind::tanh:
        return std::atanh(y);
      default:
        // log(e^y - 1); the large-y branch avoids overflow of expm1
        return (y > 34.0) ? y + std::log1p(-std::exp(-y))
                          : std::log(std::expm1(y));
    }
  }

 private:
  Activation(ActivationKind kind, double lo, double hi)
      : kind_(kind), range_low_(lo), range_high_(hi) {}

  static double logistic(double x) {
    double t = std::exp(-std::fabs(x));
    return (x >= 0.0) ? 1.0 / (1.0 + t) : t / (1.0 + t);
  }

  ActivationKind kind_;
  double range_low_;
  double range_high_;
};

}  // namespace nnkkt
