#pragma once

// Doubly weighted Sobolev norms, evaluated mode by mode. For u = sum_n u_n(r)
// e^{i n theta} the angular integral is exact (Parseval), so every order-j
// contribution reduces to a radial integral
//
//   2 pi sum_n int |D^j u|_n^2  w_j(r)^2  r dr,
//
// with |D^1 u|_n^2 = |u'|^2 + n^2|u|^2/r^2 and the Hessian (Frobenius) form
// |D^2 u|_n^2 = |u''|^2 + 2 n^2 |u'/r - u/r^2|^2 + |u'/r - n^2 u/r^2|^2.
// Radial integrals use the trapezoid rule in tau = log r (r dr = r^2 dtau).

#include <cmath>
#include <functional>
#include <numbers>

#include "fredholm/field.hpp"
#include "fredholm/grid.hpp"

namespace fredholm {

enum class SpaceFamily { M, H };

struct SpaceKind {
  SpaceFamily family = SpaceFamily::H;
  int s = 0;  // derivative order, 0..2; integrability is fixed at p = 2

  SpaceKind(SpaceFamily f, int order) : family(f), s(order) {
    if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "derivative order must be 0, 1 or 2");
  }
  static SpaceKind M(int order) { return {SpaceFamily::M, order}; }
  static SpaceKind H(int order) { return {SpaceFamily::H, order}; }
  static SpaceKind L2() { return {SpaceFamily::H, 0}; }
};

/// Restricts radial quadrature to nodes [margin, n_r - 1 - margin].
struct NormWindow {
  int margin = 0;
};

namespace detail {

/// Pointwise |D^order u|^2 for a single mode.
inline std::vector<double> derivative_density(const ModeFunction& m, const RadialGrid& grid, int order) {
  const std::size_t n = m.size();
  std::vector<double> out(n);
  const double nn = static_cast<double>(m.n) * m.n;
  if (order == 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(m.values[i]);
    return out;
  }
  const RadialDerivatives d = radial_derivatives(m, grid);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[static_cast<int>(i)];
    const complex u = m.values[i];
    if (order == 1) {
      out[i] = std::norm(d.first[i]) + nn * std::norm(u) / (r * r);
    } else {
      const complex mixed = d.first[i] / r - u / (r * r);
      const complex angular = d.first[i] / r - nn * u / (r * r);
      out[i] = std::norm(d.second[i]) + 2.0 * nn * std::norm(mixed) + std::norm(angular);
    }
  }
  return out;
}

/// 2 pi * trapezoid_tau( density * weight^2 * r^2 ).
inline double radial_integral(const std::vector<double>& density, const RadialGrid& grid, double core_exp,
                              double far_exp, NormWindow window) {
  const int lo = window.margin;
  const int hi = grid.size() - 1 - window.margin;
  if (hi <= lo) throw Error(ErrorCode::GridTooCoarse, "norm window is empty");
  double acc = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double r = grid[i];
    const double w = weight(r, core_exp, far_exp);
    double term = density[static_cast<std::size_t>(i)] * w * w * r * r;
    if (i == lo || i == hi) term *= 0.5;
    acc += term;
  }
  return 2.0 * std::numbers::pi * grid.step() * acc;
}

}  // namespace detail

/// || |D^order u| b^core_exp <x>^far_exp ||_{L^2(R^2)}, squared.
inline double order_norm_squared(const ModeFunction& m, const RadialGrid& grid, int order, double core_exp,
                                 double far_exp, NormWindow window = {}) {
  return detail::radial_integral(detail::derivative_density(m, grid, order), grid, core_exp, far_exp, window);
}

inline double order_norm(const ModeFunction& m, const RadialGrid& grid, int order, double core_exp,
                         double far_exp, NormWindow window = {}) {
  return std::sqrt(order_norm_squared(m, grid, order, core_exp, far_exp, window));
}

inline double order_norm(const Field2D& u, int order, double core_exp, double far_exp, NormWindow window = {}) {
  double acc = 0.0;
  for (const auto& m : u.modes()) {
    bool nonzero = false;
    for (const auto& v : m.values) {
      if (v != 0.0) {
        nonzero = true;
        break;
      }
    }
    if (nonzero) acc += order_norm_squared(m, u.grid(), order, core_exp, far_exp, window);
  }
  return std::sqrt(acc);
}

/// Exponents (core, far) attached to the order-j term of a space.
inline std::pair<double, double> order_exponents(SpaceKind kind, WeightPair w, int order) {
  const double far = kind.family == SpaceFamily::M ? w.gamma + order : w.gamma;
  return {w.sigma + order, far};
}

inline double weighted_norm(const ModeFunction& m, const RadialGrid& grid, SpaceKind kind, WeightPair w,
                            NormWindow window = {}) {
  double total = 0.0;
  for (int j = 0; j <= kind.s; ++j) {
    const auto [core, far] = order_exponents(kind, w, j);
    total += order_norm(m, grid, j, core, far, window);
  }
  return total;
}

inline double weighted_norm(const Field2D& u, SpaceKind kind, WeightPair w, NormWindow window = {}) {
  double total = 0.0;
  for (int j = 0; j <= kind.s; ++j) {
    const auto [core, far] = order_exponents(kind, w, j);
    total += order_norm(u, j, core, far, window);
  }
  return total;
}

/// Samples `profile` on `grid` and on its tau-refinement and throws
/// GridTooCoarse if the two norms differ by more than 1%.
inline double resolved_weighted_norm(const std::function<complex(double)>& profile, int mode,
                                     const RadialGrid& grid, SpaceKind kind, WeightPair w) {
  const auto coarse = ModeFunction::sample(mode, grid, profile);
  const RadialGrid fine_grid = grid.refined();
  const auto fine = ModeFunction::sample(mode, fine_grid, profile);
  const double a = weighted_norm(coarse, grid, kind, w);
  const double b = weighted_norm(fine, fine_grid, kind, w);
  if (std::abs(a - b) > 0.01 * std::max(std::abs(a), std::abs(b))) {
    throw Error(ErrorCode::GridTooCoarse, "norm changes by more than 1% under refinement");
  }
  return b;
}

}  // namespace fredholm
