#pragma once

// Per-mode inverses and the full-field driver.
//
// All Green's integrals have the form
//   C(tau_i) = int e^{Phi(tau_i) - Phi(tau)} g(tau) dtau
// with Phi chosen so the exponential factor is bounded along the direction of
// integration (e^{r - rho} for the I_nu term, (r/rho)^{+-q} for the Euler
// terms). They are accumulated one segment at a time with the endpoint
// corrected trapezoid rule
//   int_a^b phi = h/2 (phi_a + phi_b) - h^2/12 (phi'_b - phi'_a) + O(h^5),
// where phi' comes from the analytic Phi' and a fourth-order difference of g.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fredholm/bessel.hpp"
#include "fredholm/classify.hpp"
#include "fredholm/field.hpp"
#include "fredholm/norms.hpp"
#include "fredholm/operators.hpp"

namespace fredholm {

inline constexpr double kTailTolerance = 1e-8;

namespace detail {

enum class Direction { from_left, from_right };

/// Oriented integral from the start node (r_min or r_max) to each node:
///   out_i = int_{start}^{tau_i} e^{Phi_i - Phi(tau)} g(tau) dtau.
inline std::vector<complex> damped_cumulative(const std::vector<double>& phi, const std::vector<double>& dphi,
                                              const std::vector<complex>& g, double h, Direction dir,
                                              complex start = 0.0) {
  const std::size_t n = g.size();
  const auto dg = d_tau(std::span<const complex>(g), h);
  std::vector<complex> out(n);
  out[0] = start;
  // Segment [i, i+1] with the exponential anchored at node t.
  auto segment = [&](std::size_t i, std::size_t t) {
    const double ea = std::exp(phi[t] - phi[i]);
    const double eb = std::exp(phi[t] - phi[i + 1]);
    const complex fa = ea * g[i];
    const complex fb = eb * g[i + 1];
    const complex da = ea * (dg[i] - dphi[i] * g[i]);
    const complex db = eb * (dg[i + 1] - dphi[i + 1] * g[i + 1]);
    return 0.5 * h * (fa + fb) - h * h / 12.0 * (db - da);
  };
  if (dir == Direction::from_left) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      out[i + 1] = std::exp(phi[i + 1] - phi[i]) * out[i] + segment(i, i + 1);
    }
  } else {
    // Accumulate the positive integral to the right, then orient it.
    std::vector<complex> right(n);
    for (std::size_t i = n - 1; i-- > 0;) right[i] = std::exp(phi[i] - phi[i + 1]) * right[i + 1] + segment(i, i);
    for (std::size_t i = 0; i < n; ++i) out[i] = -right[i];
  }
  return out;
}

inline void check_tail(const ModeFunction& f) {
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  if (!std::isfinite(peak)) throw Error(ErrorCode::InvalidArgument, "right-hand side is not finite");
  if (std::abs(f.values.back()) > kTailTolerance * peak) {
    throw Error(ErrorCode::TailTruncation,
                "right-hand side is not negligible at r_max (mode " + std::to_string(f.n) + ")");
  }
}

inline void check_mode_input(const ModeFunction& f, const RadialGrid& grid) {
  if (f.size() != static_cast<std::size_t>(grid.size())) {
    throw Error(ErrorCode::ShapeMismatch, "mode length does not match grid");
  }
  if (grid.size() < kMinOperatorNodes) {
    throw Error(ErrorCode::GridTooCoarse, "solver needs at least 64 radial nodes");
  }
}

/// Green's inverse of d_rr + d_r/r - nu^2/r^2 - 1 with decay at infinity and
/// the I_nu-regular behaviour at the origin:
///   u = -I(r) int_r^inf K f rho drho - K(r) int_0^r I f rho drho.
inline ModeFunction bessel_green(double nu, const ModeFunction& f, const RadialGrid& grid) {
  check_mode_input(f, grid);
  check_tail(f);
  const BesselOrder order(nu);
  const int n = grid.size();
  std::vector<double> rho(n), minus_rho(n), i_s(n), k_s(n);
  for (int i = 0; i < n; ++i) {
    rho[i] = grid[i];
    minus_rho[i] = -grid[i];
    i_s[i] = bessel_i_scaled(order, grid[i]);
    k_s[i] = bessel_k_scaled(order, grid[i]);
  }
  std::vector<complex> gk(n), gi(n);
  for (int i = 0; i < n; ++i) {
    const double r2 = rho[i] * rho[i];
    gk[i] = k_s[i] * f.values[i] * r2;
    gi[i] = i_s[i] * f.values[i] * r2;
  }
  // e^{r} K = k_s, so I(r) K(rho) = i_s(r) k_s(rho) e^{r - rho}: Phi = rho.
  const auto outer = damped_cumulative(rho, rho, gk, grid.step(), Direction::from_right);
  // K(r) I(rho) = k_s(r) i_s(rho) e^{rho - r}: Phi = -rho. The piece of the
  // inner integral below r_min is taken with I ~ rho^nu and f ~ rho^|n|.
  const complex core = gi[0] / (nu + std::abs(f.n) + 2.0);
  const auto inner = damped_cumulative(minus_rho, minus_rho, gi, grid.step(), Direction::from_left, core);
  ModeFunction u = ModeFunction::zero(f.n, grid);
  // outer is oriented (r_max -> r), i.e. minus the integral over [r, r_max].
  for (int i = 0; i < n; ++i) u.values[i] = i_s[i] * outer[i] - k_s[i] * inner[i];
  return u;
}

}  // namespace detail

inline ModeFunction solve_helmholtz_mode(int n, const ModeFunction& f, const RadialGrid& grid) {
  return detail::bessel_green(static_cast<double>(std::abs(n)), f, grid);
}

inline ModeFunction solve_shifted_helmholtz_mode(int n, const ModeFunction& f, const RadialGrid& grid) {
  return detail::bessel_green(q_order(n), f, grid);
}

/// Endpoint for each of the two Euler variation-of-constants integrals.
struct EulerEndpoints {
  detail::Direction decaying;  // coefficient of r^{-q}, moment against rho^{q}
  detail::Direction growing;   // coefficient of r^{+q}, moment against rho^{-q}
};

/// Chooses the endpoints so the particular solution satisfies the membership
/// condition at both ends whenever one exists. r^{-q} is admissible at 0 iff
/// sigma+1 > q and at infinity iff gamma+1 < q; r^{+q} at 0 iff sigma+1 > -q
/// and at infinity iff gamma+1 < -q.
inline EulerEndpoints euler_endpoints(double q, WeightPair w) {
  using detail::Direction;
  const double s1 = w.sigma + 1.0;
  const double g1 = w.gamma + 1.0;
  EulerEndpoints e{};
  const bool minus_ok_at_zero = s1 > q;
  const bool minus_ok_at_inf = g1 < q;
  e.decaying = (minus_ok_at_zero && !minus_ok_at_inf) ? Direction::from_right : Direction::from_left;
  const bool plus_ok_at_zero = s1 > -q;
  const bool plus_ok_at_inf = g1 < -q;
  e.growing = (plus_ok_at_inf && !plus_ok_at_zero) ? Direction::from_left : Direction::from_right;
  return e;
}

inline void check_euler_resonance(int n, WeightPair w) {
  const double q = q_order(n);
  for (double t : {w.sigma + 1.0 - q, w.sigma + 1.0 + q, w.gamma + 1.0 - q, w.gamma + 1.0 + q}) {
    if (std::abs(t) <= kResonanceTolerance) {
      throw Error(ErrorCode::ResonantWeight, "weights are resonant for mode " + std::to_string(std::abs(n)));
    }
  }
}

/// u = (1/2q) [ r^{q} int^{r} rho^{-q} f rho drho - r^{-q} int^{r} rho^{q} f rho drho ].
inline ModeFunction solve_euler_mode(int n, const ModeFunction& f, WeightPair w, const RadialGrid& grid) {
  detail::check_mode_input(f, grid);
  check_euler_resonance(n, w);
  detail::check_tail(f);
  const double q = q_order(n);
  const EulerEndpoints ends = euler_endpoints(q, w);
  const int nr = grid.size();
  std::vector<double> plus(nr), minus(nr), dplus(nr, q), dminus(nr, -q);
  std::vector<complex> g(nr);
  for (int i = 0; i < nr; ++i) {
    plus[i] = q * grid.tau(i);
    minus[i] = -plus[i];
    g[i] = f.values[i] * grid[i] * grid[i];
  }
  const auto grow = detail::damped_cumulative(plus, dplus, g, grid.step(), ends.growing);
  const auto decay = detail::damped_cumulative(minus, dminus, g, grid.step(), ends.decaying);
  ModeFunction u = ModeFunction::zero(f.n, grid);
  for (int i = 0; i < nr; ++i) u.values[i] = (grow[i] - decay[i]) / (2.0 * q);
  return u;
}

inline ModeFunction solve_mode(OperatorKind kind, int n, const ModeFunction& f, WeightPair w,
                               const RadialGrid& grid) {
  switch (kind) {
    case OperatorKind::helmholtz: return solve_helmholtz_mode(n, f, grid);
    case OperatorKind::shifted_helmholtz: return solve_shifted_helmholtz_mode(n, f, grid);
    case OperatorKind::euler: return solve_euler_mode(n, f, w, grid);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown operator kind");
}

/// Unweighted radial L^2 inner product int a conj(b) rho drho (trapezoid in tau).
inline complex radial_inner(const std::vector<complex>& a, const std::vector<complex>& b, const RadialGrid& grid) {
  complex acc = 0.0;
  const int n = grid.size();
  for (int i = 0; i < n; ++i) {
    complex t = a[i] * std::conj(b[i]) * grid[i] * grid[i];
    if (i == 0 || i == n - 1) t *= 0.5;
    acc += t;
  }
  return grid.step() * acc;
}

/// Removes from a mode the component along the given radial profiles, so the
/// result is L^2-orthogonal to each of them over the grid annulus.
inline ModeFunction project_out_profiles(ModeFunction u, const std::vector<std::vector<complex>>& profiles,
                                         const RadialGrid& grid) {
  const auto m = static_cast<Eigen::Index>(profiles.size());
  if (m == 0) return u;
  Eigen::MatrixXcd gram(m, m);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs(i) = radial_inner(u.values, profiles[i], grid);
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = radial_inner(profiles[j], profiles[i], grid);
  }
  const Eigen::VectorXcd c = gram.colPivHouseholderQr().solve(rhs);
  for (Eigen::Index j = 0; j < m; ++j)
    for (int i = 0; i < grid.size(); ++i) u.values[i] -= c(j) * profiles[j][i];
  return u;
}

/// Radial profiles of the admissible kernel elements of mode |n|.
inline std::vector<std::vector<complex>> kernel_profiles(const FredholmReport& rep, int n, const RadialGrid& grid) {
  std::vector<std::vector<complex>> out;
  for (const auto& e : rep.kernel_basis) {
    if (e.mode != std::abs(n) || e.parity != Parity::cos || !e.admissible) continue;
    out.push_back(ModeFunction::sample(n, grid, [&](double r) { return complex(e.radial(r)); }).values);
  }
  return out;
}

/// Removes the admissible kernel component from every mode of u, using the same
/// radial L^2 projection as solve_field.
inline Field2D project_out_kernel(const FredholmReport& rep, Field2D u) {
  for (auto& m : u.modes()) {
    auto profiles = kernel_profiles(rep, m.n, u.grid());
    if (!profiles.empty()) m = project_out_profiles(std::move(m), profiles, u.grid());
  }
  return u;
}

struct SolveResult {
  Field2D solution;
  double residual_norm = 0.0;           // ||L u - f|| in the range space, interior nodes
  double relative_residual = 0.0;       // residual_norm / ||f||
  std::vector<Defect> solvability_defects;
  std::map<std::string, double> norms;
  FredholmReport regime;
  std::vector<std::string> warnings;
  bool solvable = true;
};

/// Mode-wise solve of L u = f. Modes are solved independently (on up to
/// `threads` workers) and assembled in mode order; the kernel component of
/// every mode is projected out; defects are the pairings of f with the
/// cokernel basis.
inline SolveResult solve_field(OperatorKind kind, const Field2D& f, WeightPair w, int threads = 1) {
  FredholmReport rep = classify(kind, w);
  require_fredholm(rep);
  const RadialGrid& grid = f.grid();
  SolveResult res{Field2D(grid, f.n_theta()), 0.0, 0.0, {}, {}, rep, {}, true};
  if (rep.resonance_distance < kIllConditionedBand) {
    res.warnings.push_back("weights are within 1e-3 of a resonance; the solve is ill-conditioned");
  }

  std::vector<const ModeFunction*> work;
  for (const auto& fm : f.modes()) {
    bool zero = true;
    for (const auto& v : fm.values) zero = zero && v == 0.0;
    if (!zero) work.push_back(&fm);
  }
  std::vector<ModeFunction> solved(work.size());
  std::vector<std::optional<Error>> failed(work.size());
  auto solve_one = [&](std::size_t k) {
    const ModeFunction& fm = *work[k];
    try {
      ModeFunction u = solve_mode(kind, fm.n, fm, w, grid);
      solved[k] = project_out_profiles(std::move(u), kernel_profiles(rep, fm.n, grid), grid);
    } catch (const Error& e) {
      failed[k] = e;
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), work.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < work.size(); ++k) solve_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < work.size(); k = next++) solve_one(k);
      });
    }
  }

  std::string failures;
  ErrorCode first_code = ErrorCode::InvalidArgument;
  for (std::size_t k = 0; k < work.size(); ++k) {
    if (failed[k]) {
      if (failures.empty()) first_code = failed[k]->code();
      failures += (failures.empty() ? "" : "; ") + std::string("mode ") + std::to_string(work[k]->n) + ": " +
                  failed[k]->what();
    } else {
      res.solution.set_mode(std::move(solved[k]));
    }
  }
  if (!failures.empty()) throw Error(first_code, failures);

  const WeightPair rw = range_weights(kind, w);
  const NormWindow window{kInteriorMargin};
  const Field2D residual = apply_operator(kind, res.solution) - f;
  res.residual_norm = order_norm(residual, 0, rw.sigma, rw.gamma, window);
  const double fnorm = order_norm(f, 0, rw.sigma, rw.gamma, window);
  res.relative_residual = fnorm > 0.0 ? res.residual_norm / fnorm : res.residual_norm;
  res.norms["solution_domain"] = weighted_norm(res.solution, domain_space(kind), w);
  res.norms["rhs_range"] = order_norm(f, 0, rw.sigma, rw.gamma);
  res.solvability_defects = solvability_defect(rep, f);
  res.solvable = !violates_solvability(res.solvability_defects);
  return res;
}

}  // namespace fredholm
