#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "fredholm/bessel.hpp"
#include "fredholm/field.hpp"
#include "fredholm/norms.hpp"

namespace fredholm {

/// helmholtz: Delta - 1;  shifted_helmholtz: Delta - 1/r^2 - 1;  euler: Delta - 1/r^2.
enum class OperatorKind { helmholtz, shifted_helmholtz, euler };

inline constexpr std::string_view to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::helmholtz: return "helmholtz";
    case OperatorKind::shifted_helmholtz: return "shifted";
    case OperatorKind::euler: return "euler";
  }
  return "?";
}

inline OperatorKind parse_operator(std::string_view s) {
  if (s == "helmholtz") return OperatorKind::helmholtz;
  if (s == "shifted" || s == "shifted_helmholtz") return OperatorKind::shifted_helmholtz;
  if (s == "euler") return OperatorKind::euler;
  throw Error(ErrorCode::InvalidArgument, "unknown operator '" + std::string(s) + "'");
}

/// Effective radial order of the mode-n operator: in tau coordinates
/// r^2 L_n = d_tautau - order^2 - shift * r^2.
inline double radial_order(OperatorKind kind, int n) {
  return kind == OperatorKind::helmholtz ? static_cast<double>(std::abs(n)) : q_order(n);
}

inline double zeroth_order_shift(OperatorKind kind) { return kind == OperatorKind::euler ? 0.0 : 1.0; }

/// Domain family: H^2 for the Helmholtz kinds, M^{2,2} for the Euler operator.
inline SpaceKind domain_space(OperatorKind kind) {
  return kind == OperatorKind::euler ? SpaceKind::M(2) : SpaceKind::H(2);
}

/// Range L^2 weight exponents: L^2_{sigma+2, gamma} for the Helmholtz kinds,
/// L^2_{sigma+2, gamma+2} for the Euler operator.
inline WeightPair range_weights(OperatorKind kind, WeightPair w) {
  return kind == OperatorKind::euler ? w.shifted(2.0, 2.0) : w.shifted(2.0, 0.0);
}

inline constexpr int kMinOperatorNodes = 64;

/// Discrete mode operator in tau coordinates, fourth order in the tau step.
inline ModeFunction apply_mode_operator(OperatorKind kind, const ModeFunction& m, const RadialGrid& grid) {
  if (grid.size() < kMinOperatorNodes) {
    throw Error(ErrorCode::GridTooCoarse, "mode operator needs at least 64 radial nodes");
  }
  if (m.size() != static_cast<std::size_t>(grid.size())) {
    throw Error(ErrorCode::ShapeMismatch, "mode length does not match grid");
  }
  const double nu = radial_order(kind, m.n);
  const double shift = zeroth_order_shift(kind);
  const auto utt = d2_tau(std::span<const complex>(m.values), grid.step());
  ModeFunction out = ModeFunction::zero(m.n, grid);
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    out.values[i] = (utt[i] - nu * nu * m.values[i]) / (r * r) - shift * m.values[i];
  }
  return out;
}

inline Field2D apply_operator(OperatorKind kind, const Field2D& u) {
  Field2D out(u.grid(), u.n_theta());
  for (const auto& m : u.modes()) out.set_mode(apply_mode_operator(kind, m, u.grid()));
  return out;
}

inline constexpr int kInteriorMargin = 3;

/// sup_i |L u - f| / sup_i (|u_tautau|/r^2 + order^2 |u|/r^2 + shift |u| + |f|)
/// over interior nodes. Pass an empty f for the homogeneous residual.
inline double relative_residual(OperatorKind kind, const ModeFunction& u, const ModeFunction* f,
                                const RadialGrid& grid, int margin = kInteriorMargin) {
  const auto lu = apply_mode_operator(kind, u, grid);
  const auto utt = d2_tau(std::span<const complex>(u.values), grid.step());
  const double nu = radial_order(kind, u.n);
  const double shift = zeroth_order_shift(kind);
  double num = 0.0;
  double den = 0.0;
  for (int i = margin; i < grid.size() - margin; ++i) {
    const double r2 = grid[i] * grid[i];
    const complex rhs = f ? f->values[i] : complex{};
    num = std::max(num, std::abs(lu.values[i] - rhs));
    den = std::max(den, std::abs(utt[i]) / r2 + nu * nu * std::abs(u.values[i]) / r2 +
                            shift * std::abs(u.values[i]) + std::abs(rhs));
  }
  return den == 0.0 ? num : num / den;
}

}  // namespace fredholm
