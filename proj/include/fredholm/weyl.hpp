#pragma once

// Near-kernel sequences u_j = chi_j(tau) r^s e^{ik theta}. The cutoff chi_j
// rises over a tau-interval of length j, stays 1 for length j and falls over
// length j, so its derivatives are O(1/j). When r^s is a homogeneous solution
// sitting exactly on a weight threshold, ||L u_j|| / ||u_j|| = O(1/j).

#include <algorithm>
#include <bit>
#include <cmath>
#include <string_view>
#include <vector>

#include "fredholm/classify.hpp"
#include "fredholm/field.hpp"
#include "fredholm/norms.hpp"
#include "fredholm/operators.hpp"

namespace fredholm {

enum class WeylSide { interior, exterior };

inline constexpr std::string_view to_string(WeylSide s) { return s == WeylSide::interior ? "interior" : "exterior"; }

inline WeylSide parse_side(std::string_view s) {
  if (s == "interior") return WeylSide::interior;
  if (s == "exterior") return WeylSide::exterior;
  throw Error(ErrorCode::InvalidArgument, "side must be interior or exterior");
}

struct WeylParams {
  OperatorKind kind = OperatorKind::euler;
  int mode = 0;
  WeylSide side = WeylSide::interior;
  int j = 1;
};

/// Quintic smoothstep, C^2 at both ends.
inline double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

/// Cutoff on [0, 3j] in s = |tau|: ramp, plateau, ramp.
inline double weyl_cutoff(double s, int j) {
  const double jj = j;
  if (s <= 0.0 || s >= 3.0 * jj) return 0.0;
  if (s < jj) return smoothstep5(s / jj);
  if (s <= 2.0 * jj) return 1.0;
  return smoothstep5((3.0 * jj - s) / jj);
}

/// The homogeneous exponent +-nu of mode k whose membership threshold lies
/// closest to the relevant weight: r^s sits on the threshold at the origin
/// when sigma + 1 = -s and at infinity when gamma + 1 = -s.
inline double weyl_exponent(OperatorKind kind, int k, WeylSide side, WeightPair w) {
  const double nu = radial_order(kind, k);
  const double crit = -((side == WeylSide::interior ? w.sigma : w.gamma) + 1.0);
  return std::abs(crit - nu) <= std::abs(crit + nu) ? nu : -nu;
}

inline void check_weyl_params(const WeylParams& p, const RadialGrid& grid) {
  if (p.j < 1) throw Error(ErrorCode::InvalidArgument, "scale parameter j must be >= 1");
  if (p.mode < 0) throw Error(ErrorCode::InvalidArgument, "mode must be >= 0");
  if (p.kind != OperatorKind::euler && p.side == WeylSide::exterior) {
    throw Error(ErrorCode::InvalidArgument, "Helmholtz resonances are interior only");
  }
  const double reach = 3.0 * p.j;
  if (p.side == WeylSide::interior && grid.r_min() > std::exp(-reach)) {
    throw Error(ErrorCode::GridTooNarrow, "interior sequence needs r_min <= e^{-3j}");
  }
  if (p.side == WeylSide::exterior && grid.r_max() < std::exp(reach)) {
    throw Error(ErrorCode::GridTooNarrow, "exterior sequence needs r_max >= e^{3j}");
  }
}

/// u_j normalized to unit domain norm (M^{2,2} or H^2) for the weights w.
inline Field2D weyl_element(const WeylParams& p, WeightPair w, const RadialGrid& grid, int n_theta) {
  check_weyl_params(p, grid);
  const double s = weyl_exponent(p.kind, p.mode, p.side, w);
  const double sign = p.side == WeylSide::interior ? -1.0 : 1.0;
  auto m = ModeFunction::sample(p.mode, grid, [&](double r) {
    const double tau = std::log(r);
    return complex(weyl_cutoff(sign * tau, p.j) * std::exp(s * tau));
  });
  Field2D u = Field2D::from_mode(grid, n_theta, std::move(m));
  u *= 1.0 / weighted_norm(u, domain_space(p.kind), w);
  return u;
}

/// ||L u_j|| in the range space for the normalized u_j.
inline double weyl_ratio(const WeylParams& p, WeightPair w, const RadialGrid& grid, int n_theta) {
  const Field2D u = weyl_element(p, w, grid, n_theta);
  const WeightPair rw = range_weights(p.kind, w);
  return order_norm(apply_operator(p.kind, u), 0, rw.sigma, rw.gamma);
}

inline constexpr int kWeylNodesPerUnit = 64;

/// A grid that holds the j = jmax element with one unit of tau to spare.
inline RadialGrid weyl_grid(WeylSide side, int jmax) {
  const double reach = 3.0 * jmax + 1.0;
  const int n = static_cast<int>(kWeylNodesPerUnit * (reach + 1.0)) + 1;
  return side == WeylSide::interior ? RadialGrid(std::exp(-reach), std::exp(1.0), n)
                                    : RadialGrid(std::exp(-1.0), std::exp(reach), n);
}

struct WeylSample {
  int j;
  double ratio;
};

/// Ratios for j = 1, 2, 4, ..., jmax on a shared grid.
inline std::vector<WeylSample> weyl_ratios(OperatorKind kind, int k, WeylSide side, WeightPair w, int jmax) {
  const RadialGrid grid = weyl_grid(side, jmax);
  const int n_theta = std::max(4, static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * k + 2))));
  std::vector<WeylSample> out;
  for (int j = 1; j <= jmax; j *= 2) out.push_back({j, weyl_ratio({kind, k, side, j}, w, grid, n_theta)});
  return out;
}

}  // namespace fredholm
