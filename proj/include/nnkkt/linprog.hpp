#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nnkkt/errors.hpp"

namespace nnkkt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Feasibility threshold applied after row equilibration.
inline constexpr double kLpFeasTol = 1e-9;

// Equality-constrained LP with box variables:
//   A x = b,  lower <= x <= upper,  minimize cost.x  (cost used by
//   lp_minimize only; lp_phase1_feasible ignores it).
struct StandardLP {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;  // row-major rows*cols
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> cost;

  static StandardLP make(int rows, int cols) {
    StandardLP lp;
    lp.rows = rows;
    lp.cols = cols;
    lp.entries.assign(std::size_t(rows) * cols, 0.0);
    lp.rhs.assign(rows, 0.0);
    lp.lower.assign(cols, 0.0);
    lp.upper.assign(cols, kInfinity);
    lp.cost.assign(cols, 0.0);
    return lp;
  }

  double& at(int r, int c) { return entries[std::size_t(r) * cols + c]; }
  double at(int r, int c) const { return entries[std::size_t(r) * cols + c]; }
};

struct LpFeasible {
  std::vector<double> x;
  double residual_inf = 0.0;  // ||Ax - b||_inf on the equilibrated system
};

// Farkas-style certificate: y.b exceeds the largest value y.(Ax) can take
// over the box by `gap`. `sign_defect` measures leakage of y.A along
// directions whose bound is infinite (must be ~0 for a valid certificate).
struct LpInfeasible {
  std::vector<double> farkas;  // ||.||_inf = 1, original row scale
  double gap = 0.0;
  double sign_defect = 0.0;
};

using Phase1Result = std::variant<LpFeasible, LpInfeasible>;

struct LpOptimum {
  std::vector<double> x;
  double objective = 0.0;
};

using LpSolveResult = std::variant<LpOptimum, LpInfeasible>;

namespace detail {

// Dense bounded-variable two-phase simplex with Bland's least-index rule.
// Row-equilibrated copy of the input; one artificial column per row.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const StandardLP& lp)
      : m_(lp.rows), n_(lp.cols), total_(lp.cols + lp.rows) {
    validate(lp);
    scale_.resize(m_);
    A_.resize(m_, total_);
    b_.resize(m_);
    lo_.assign(total_, 0.0);
    hi_.assign(total_, kInfinity);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s = std::max(s, std::fabs(lp.at(i, j)));
      if (s < 1e-30) s = 1.0;
      scale_[i] = s;
      for (int j = 0; j < n_; ++j) A_(i, j) = lp.at(i, j) / s;
      b_[i] = lp.rhs[i] / s;
    }
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.lower[j];
      hi_[j] = lp.upper[j];
    }
    x_ = Eigen::VectorXd::Zero(total_);
    state_.assign(total_, VarState::at_zero);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        state_[j] = VarState::at_lower;
        x_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        state_[j] = VarState::at_upper;
        x_[j] = hi_[j];
      }
    }
    A_.rightCols(m_).setZero();
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      double r = b_[i];
      for (int j = 0; j < n_; ++j) r -= A_(i, j) * x_[j];
      int col = n_ + i;
      A_(i, col) = (r >= 0.0) ? 1.0 : -1.0;
      basis_[i] = col;
      state_[col] = VarState::basic;
    }
    iter_limit_ = 50 * (m_ + n_);
    refresh_basic_values();
  }

  bool phase1() {
    cost_ = Eigen::VectorXd::Zero(total_);
    for (int i = 0; i < m_; ++i) cost_[n_ + i] = 1.0;
    run();
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas += std::fabs(x_[n_ + i]);
    return infeas <= kLpFeasTol;
  }

  // Requires a successful phase1. Pins artificials at zero, optimizes the
  // structural cost. Throws UnboundedError on an unbounded ray.
  void phase2(const std::vector<double>& cost) {
    for (int i = 0; i < m_; ++i) {
      int col = n_ + i;
      hi_[col] = 0.0;
      if (state_[col] != VarState::basic) {
        state_[col] = VarState::at_lower;
        x_[col] = 0.0;
      }
    }
    cost_ = Eigen::VectorXd::Zero(total_);
    for (int j = 0; j < n_; ++j) cost_[j] = cost[j];
    run();
  }

  std::vector<double> solution() const {
    return std::vector<double>(x_.data(), x_.data() + n_);
  }

  double scaled_residual() const {
    double r = 0.0;
    for (int i = 0; i < m_; ++i) {
      double v = -b_[i];
      for (int j = 0; j < n_; ++j) v += A_(i, j) * x_[j];
      r = std::max(r, std::fabs(v));
    }
    return r;
  }

  // Dual vector of the last optimality proof, mapped back to original row
  // scale and normalized to ||y||_inf = 1.
  std::vector<double> farkas() const {
    std::vector<double> y(m_);
    double nrm = 0.0;
    for (int i = 0; i < m_; ++i) {
      y[i] = y_[i] / scale_[i];
      nrm = std::max(nrm, std::fabs(y[i]));
    }
    if (nrm > 0.0)
      for (double& v : y) v /= nrm;
    return y;
  }

 private:
  enum class VarState : unsigned char { at_lower, at_upper, at_zero, basic };

  static void validate(const StandardLP& lp) {
    if (lp.rows < 1 || lp.cols < 1)
      throw DimensionMismatchError("LP needs at least one row and column");
    if (lp.entries.size() != std::size_t(lp.rows) * lp.cols ||
        lp.rhs.size() != std::size_t(lp.rows) ||
        lp.lower.size() != std::size_t(lp.cols) ||
        lp.upper.size() != std::size_t(lp.cols) ||
        lp.cost.size() != std::size_t(lp.cols))
      throw DimensionMismatchError("LP field sizes disagree");
    for (double v : lp.entries)
      if (!std::isfinite(v)) throw DimensionMismatchError("nonfinite LP entry");
    for (double v : lp.rhs)
      if (!std::isfinite(v))
        throw DimensionMismatchError("nonfinite LP right side");
    for (double v : lp.cost)
      if (!std::isfinite(v)) throw DimensionMismatchError("nonfinite LP cost");
    for (int j = 0; j < lp.cols; ++j) {
      if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) ||
          lp.lower[j] > lp.upper[j])
        throw DimensionMismatchError("inconsistent LP bounds");
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> factorize() const {
    Eigen::MatrixXd B(m_, m_);
    for (int i = 0; i < m_; ++i) B.col(i) = A_.col(basis_[i]);
    return Eigen::PartialPivLU<Eigen::MatrixXd>(B);
  }

  void refresh_basic_values() {
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < total_; ++j)
      if (state_[j] != VarState::basic && x_[j] != 0.0) rhs -= A_.col(j) * x_[j];
    Eigen::VectorXd xb = factorize().solve(rhs);
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
  }

  void run() {
    const double rc_tol = 1e-10;
    const double tie = 1e-10;
    for (int iter = 0;; ++iter) {
      if (iter > iter_limit_)
        throw IterationLimitError("simplex exceeded " +
                                  std::to_string(iter_limit_) + " pivots");
      auto lu = factorize();
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
      y_ = lu.transpose().solve(cb);

      // Entering column: least index with an improving reduced cost.
      int enter = -1;
      int dir = 0;
      for (int j = 0; j < total_ && enter < 0; ++j) {
        if (state_[j] == VarState::basic || lo_[j] == hi_[j]) continue;
        double rc = cost_[j] - y_.dot(A_.col(j));
        switch (state_[j]) {
          case VarState::at_lower:
            if (rc < -rc_tol) { enter = j; dir = +1; }
            break;
          case VarState::at_upper:
            if (rc > rc_tol) { enter = j; dir = -1; }
            break;
          case VarState::at_zero:
            if (rc < -rc_tol) { enter = j; dir = +1; }
            else if (rc > rc_tol) { enter = j; dir = -1; }
            break;
          default:
            break;
        }
      }
      if (enter < 0) return;

      Eigen::VectorXd d = lu.solve(A_.col(enter));

      // Largest step t along +-d before a basic variable or the entering
      // variable's own opposite bound is hit.
      double own_gap = (std::isfinite(lo_[enter]) && std::isfinite(hi_[enter]))
                           ? hi_[enter] - lo_[enter]
                           : kInfinity;
      double t_min = own_gap;
      for (int i = 0; i < m_; ++i) {
        double t = leave_step(i, dir * d[i]);
        if (t >= 0.0) t_min = std::min(t_min, t);
      }
      if (!std::isfinite(t_min))
        throw UnboundedError("unbounded improving ray");

      // Leaving row: smallest basic variable index among the ratio ties.
      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        double t = leave_step(i, dir * d[i]);
        if (t >= 0.0 && t <= t_min + tie &&
            (leave < 0 || basis_[i] < basis_[leave]))
          leave = i;
      }

      if (leave < 0) {
        state_[enter] = (dir > 0) ? VarState::at_upper : VarState::at_lower;
        x_[enter] = (dir > 0) ? hi_[enter] : lo_[enter];
        refresh_basic_values();
        continue;
      }

      int leaving_col = basis_[leave];
      double g = dir * d[leave];
      state_[leaving_col] = (g > 0.0) ? VarState::at_lower : VarState::at_upper;
      x_[leaving_col] = (g > 0.0) ? lo_[leaving_col] : hi_[leaving_col];
      state_[enter] = VarState::basic;
      basis_[leave] = enter;
      refresh_basic_values();
    }
  }

  // Step at which basic row i hits a bound when moving with slope g;
  // negative return = row does not limit the step.
  double leave_step(int i, double g) const {
    const double piv_tol = 1e-11;
    int bi = basis_[i];
    double t = -1.0;
    if (g > piv_tol) {
      if (!std::isfinite(lo_[bi])) return -1.0;
      t = (x_[bi] - lo_[bi]) / g;
    } else if (g < -piv_tol) {
      if (!std::isfinite(hi_[bi])) return -1.0;
      t = (x_[bi] - hi_[bi]) / g;
    } else {
      return -1.0;
    }
    return std::max(t, 0.0);
  }

  int m_, n_, total_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_, x_, cost_, y_;
  std::vector<double> lo_, hi_, scale_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  int iter_limit_ = 0;
};

}  // namespace detail

// Certificate quality of y against the raw LP by direct arithmetic:
//   gap = y.b - sum_j sup over [l_j, u_j] of (y.A_j) x_j
// where directions with an infinite bound contribute through the finite
// opposite bound (or zero) and feed sign_defect instead.
inline void farkas_certificate_quality(const StandardLP& lp,
                                       const std::vector<double>& y,
                                       double* gap, double* sign_defect) {
  double yb = 0.0;
  for (int i = 0; i < lp.rows; ++i) yb += y[i] * lp.rhs[i];
  double support = 0.0;
  double defect = 0.0;
  for (int j = 0; j < lp.cols; ++j) {
    double dj = 0.0;
    for (int i = 0; i < lp.rows; ++i) dj += y[i] * lp.at(i, j);
    double bound = (dj >= 0.0) ? lp.upper[j] : lp.lower[j];
    if (std::isfinite(bound)) {
      support += dj * bound;
    } else {
      defect = std::max(defect, std::fabs(dj));
      double other = (dj >= 0.0) ? lp.lower[j] : lp.upper[j];
      if (std::isfinite(other)) support += dj * other;
    }
  }
  *gap = yb - support;
  *sign_defect = defect;
}

inline Phase1Result lp_phase1_feasible(const StandardLP& lp) {
  detail::BoundedSimplex simplex(lp);
  if (simplex.phase1())
    return LpFeasible{simplex.solution(), simplex.scaled_residual()};
  LpInfeasible cert;
  cert.farkas = simplex.farkas();
  farkas_certificate_quality(lp, cert.farkas, &cert.gap, &cert.sign_defect);
  return cert;
}

inline LpSolveResult lp_minimize(const StandardLP& lp) {
  detail::BoundedSimplex simplex(lp);
  if (!simplex.phase1()) {
    LpInfeasible cert;
    cert.farkas = simplex.farkas();
    farkas_certificate_quality(lp, cert.farkas, &cert.gap, &cert.sign_defect);
    return cert;
  }
  simplex.phase2(lp.cost);
  LpOptimum opt;
  opt.x = simplex.solution();
  for (int j = 0; j < lp.cols; ++j) opt.objective += lp.cost[j] * opt.x[j];
  return opt;
}

}  // namespace nnkkt
