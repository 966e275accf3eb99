#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "fredholm/error.hpp"

namespace fredholm {

/// Radial nodes equispaced in tau = log r on [r_min, r_max].
class RadialGrid {
 public:
  RadialGrid(double r_min, double r_max, int n_r)
      : r_min_(r_min), r_max_(r_max), n_r_(n_r) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
      throw Error(ErrorCode::InvalidGrid, "need 0 < r_min < r_max < inf");
    }
    if (n_r < 16) throw Error(ErrorCode::InvalidGrid, "need at least 16 radial nodes");
    tau_min_ = std::log(r_min);
    step_ = (std::log(r_max) - tau_min_) / (n_r - 1);
    nodes_.resize(static_cast<std::size_t>(n_r));
    for (int i = 0; i < n_r; ++i) nodes_[i] = std::exp(tau_min_ + step_ * i);
    nodes_.front() = r_min;
    nodes_.back() = r_max;
  }

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  int size() const noexcept { return n_r_; }
  /// Uniform step in tau.
  double step() const noexcept { return step_; }
  double tau(int i) const noexcept { return tau_min_ + step_ * i; }
  double operator[](int i) const noexcept { return nodes_[static_cast<std::size_t>(i)]; }
  std::span<const double> nodes() const noexcept { return nodes_; }

  /// Same endpoints, tau step halved.
  RadialGrid refined() const { return RadialGrid(r_min_, r_max_, 2 * n_r_ - 1); }

  bool operator==(const RadialGrid& other) const noexcept {
    return r_min_ == other.r_min_ && r_max_ == other.r_max_ && n_r_ == other.n_r_;
  }

 private:
  double r_min_;
  double r_max_;
  int n_r_;
  double tau_min_ = 0.0;
  double step_ = 0.0;
  std::vector<double> nodes_;
};

/// Core exponent sigma and far-field exponent gamma.
struct WeightPair {
  double sigma = 0.0;
  double gamma = 0.0;

  WeightPair shifted(double ds, double dg) const { return {sigma + ds, gamma + dg}; }
};

/// Core weight: r below 1, 1 above 2. On [1,2] a quintic Hermite blend in
/// t = log r matching value and two t-derivatives at both ends, which keeps
/// 1 <= b <= r there.
inline double weight_b(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveRadius, "b(r) needs r > 0");
  if (r <= 1.0) return r;
  if (r >= 2.0) return 1.0;
  const double span = std::numbers::ln2;
  const double s = std::log(r) / span;
  const double one_minus = 1.0 - s;
  const double cube = one_minus * one_minus * one_minus;
  // b = 1 + L*H1(s) + L^2*H2(s) with H1 = s(1-s)^3(1+3s), H2 = s^2(1-s)^3/2.
  return 1.0 + span * s * cube * (1.0 + 3.0 * s) + 0.5 * span * span * s * s * cube;
}

/// <x> = (1 + |x|^2)^{1/2}.
inline double bracket(double x_norm) { return std::hypot(1.0, x_norm); }

/// b(r)^a <r>^c, computed through logs so extreme exponents stay finite.
inline double weight(double r, double core_exp, double far_exp) {
  return std::exp(core_exp * std::log(weight_b(r)) + far_exp * std::log(bracket(r)));
}

}  // namespace fredholm
