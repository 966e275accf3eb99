#pragma once

// Weight-regime classification of the three operators.
//
// Each angular mode k contributes two homogeneous solutions. For the
// Helmholtz kinds the decaying one is K_nu(r), nu = k or q(k), and it enters
//   the kernel    when sigma > nu - 1   (K_nu ~ r^{-nu} is weighted-L^2 at 0),
//   the cokernel  when sigma < -nu - 1  (pairing with K_nu is bounded),
// with resonances exactly on those thresholds. For the Euler operator the
// solutions r^{+-q(k)} are sorted by the same one-end thresholds:
//   kernel:   r^{-q} if sigma+1 > q,   r^{+q} if gamma+1 < -q
//   cokernel: r^{+q} if gamma+1 > q,   r^{-q} if sigma+1 < -q.
// Every element also records whether it satisfies the membership condition at
// the opposite end of the half line (`admissible`); this only fails in the
// mixed quadrants sigma > -2, gamma > 0 and sigma < -2, gamma < 0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <utility>
#include <string>
#include <vector>

#include "fredholm/bessel.hpp"
#include "fredholm/field.hpp"
#include "fredholm/norms.hpp"
#include "fredholm/operators.hpp"

namespace fredholm {

inline constexpr double kResonanceTolerance = 1e-9;
inline constexpr double kIllConditionedBand = 1e-3;

enum class Parity { cos, sin };
enum class Side { kernel, cokernel };
enum class Status { fredholm, resonant };

inline constexpr std::string_view to_string(Parity p) { return p == Parity::cos ? "cos" : "sin"; }
inline constexpr std::string_view to_string(Side s) { return s == Side::kernel ? "kernel" : "cokernel"; }
inline constexpr std::string_view to_string(Status s) { return s == Status::fredholm ? "fredholm" : "resonant"; }

/// bessel_K(order) or power(exponent).
struct RadialForm {
  enum class Type { bessel_k, power } type = Type::power;
  double parameter = 0.0;

  static RadialForm bessel_k(double order) { return {Type::bessel_k, order}; }
  static RadialForm power(double exponent) { return {Type::power, exponent}; }

  double operator()(double r) const {
    if (type == Type::power) return std::pow(r, parameter);
    // e^{-r} * (e^{r} K) so large radii underflow quietly to zero.
    return std::exp(-r) * bessel_k_scaled(BesselOrder(parameter), r);
  }

  std::string label() const {
    return (type == Type::bessel_k ? "bessel_K(" : "power(") + std::to_string(parameter) + ")";
  }
};

struct BasisElement {
  int mode = 0;
  Parity parity = Parity::cos;
  RadialForm radial;
  Side side = Side::kernel;
  bool admissible = true;

  std::string label() const {
    return std::string(to_string(side)) + ":" + radial.label() + "*" + std::string(to_string(parity)) + "(" +
           std::to_string(mode) + "theta)";
  }
};

struct FredholmReport {
  OperatorKind kind = OperatorKind::helmholtz;
  WeightPair weights;
  Status status = Status::fredholm;
  std::vector<BasisElement> kernel_basis;
  std::vector<BasisElement> cokernel_basis;
  int index = 0;
  std::vector<int> resonant_modes;

  /// Smallest distance from a threshold, over modes 0..64.
  double resonance_distance = 0.0;
};

namespace detail {

inline void push_pair(std::vector<BasisElement>& out, int k, RadialForm form, Side side, bool admissible) {
  out.push_back({k, Parity::cos, form, side, admissible});
  if (k >= 1) out.push_back({k, Parity::sin, form, side, admissible});
}

inline constexpr int kMaxClassifiedMode = 64;

}  // namespace detail

inline FredholmReport classify(OperatorKind kind, WeightPair w) {
  FredholmReport rep;
  rep.kind = kind;
  rep.weights = w;
  std::set<int> resonant;
  double distance = std::numeric_limits<double>::infinity();
  const double s1 = w.sigma + 1.0;
  const double g1 = w.gamma + 1.0;

  for (int k = 0; k <= detail::kMaxClassifiedMode; ++k) {
    if (kind == OperatorKind::euler) {
      const double q = q_order(k);
      for (double t : {s1 - q, s1 + q, g1 - q, g1 + q}) {
        distance = std::min(distance, std::abs(t));
        if (std::abs(t) <= kResonanceTolerance) resonant.insert(k);
      }
      if (s1 > q) detail::push_pair(rep.kernel_basis, k, RadialForm::power(-q), Side::kernel, g1 < q);
      if (g1 < -q) detail::push_pair(rep.kernel_basis, k, RadialForm::power(q), Side::kernel, s1 > -q);
      if (g1 > q) detail::push_pair(rep.cokernel_basis, k, RadialForm::power(q), Side::cokernel, s1 < q);
      if (s1 < -q) detail::push_pair(rep.cokernel_basis, k, RadialForm::power(-q), Side::cokernel, g1 > -q);
    } else {
      const double nu = radial_order(kind, k);
      for (double t : {w.sigma - (nu - 1.0), w.sigma + nu + 1.0}) {
        distance = std::min(distance, std::abs(t));
        if (std::abs(t) <= kResonanceTolerance) resonant.insert(k);
      }
      if (w.sigma > nu - 1.0) detail::push_pair(rep.kernel_basis, k, RadialForm::bessel_k(nu), Side::kernel, true);
      if (w.sigma < -nu - 1.0)
        detail::push_pair(rep.cokernel_basis, k, RadialForm::bessel_k(nu), Side::cokernel, true);
    }
  }

  rep.resonance_distance = distance;
  if (!resonant.empty()) {
    rep.status = Status::resonant;
    rep.kernel_basis.clear();
    rep.cokernel_basis.clear();
    rep.resonant_modes.assign(resonant.begin(), resonant.end());
  }
  rep.index = static_cast<int>(rep.kernel_basis.size()) - static_cast<int>(rep.cokernel_basis.size());
  return rep;
}

inline void require_fredholm(const FredholmReport& rep) {
  if (rep.status == Status::resonant) {
    std::string modes;
    for (int k : rep.resonant_modes) modes += (modes.empty() ? "" : ",") + std::to_string(k);
    throw Error(ErrorCode::ResonantWeight, "weights are resonant for mode(s) " + modes);
  }
}

/// The element as a field: radial(r) * cos(k theta) or sin(k theta).
inline Field2D basis_field(const BasisElement& e, const RadialGrid& grid, int n_theta) {
  Field2D f(grid, n_theta);
  if (e.mode > f.max_mode()) {
    throw Error(ErrorCode::ShapeMismatch, "basis mode exceeds angular resolution");
  }
  auto profile = ModeFunction::sample(e.mode, grid, [&](double r) { return complex(e.radial(r)); });
  if (e.mode == 0) {
    if (e.parity == Parity::sin) throw Error(ErrorCode::InvalidArgument, "sin(0 theta) vanishes identically");
    f.set_mode(std::move(profile));
    return f;
  }
  // cos = (e^{ik} + e^{-ik}) / 2,  sin = (e^{ik} - e^{-ik}) / (2i)
  const complex plus = e.parity == Parity::cos ? complex(0.5) : complex(0.0, -0.5);
  const complex minus = e.parity == Parity::cos ? complex(0.5) : complex(0.0, 0.5);
  ModeFunction neg = profile;
  neg.n = -e.mode;
  f.set_mode(plus * profile);
  f.set_mode(minus * neg);
  return f;
}

/// Natural norm of a basis element: the domain norm for kernel elements, the
/// dual-range L^2 norm (negated exponents) for cokernel elements.
inline double natural_norm(const Field2D& h, Side side, OperatorKind kind, WeightPair w) {
  if (side == Side::kernel) return weighted_norm(h, domain_space(kind), w);
  const WeightPair rw = range_weights(kind, w);
  return order_norm(h, 0, -rw.sigma, -rw.gamma);
}

namespace detail {

inline std::vector<Field2D> sampled_basis(const FredholmReport& rep, const std::vector<BasisElement>& elems,
                                          const RadialGrid& grid, int n_theta, bool normalize) {
  require_fredholm(rep);
  std::vector<Field2D> out;
  out.reserve(elems.size());
  for (const auto& e : elems) {
    Field2D h = basis_field(e, grid, n_theta);
    if (normalize) h *= 1.0 / natural_norm(h, e.side, rep.kind, rep.weights);
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace detail

inline std::vector<Field2D> kernel_basis_field(const FredholmReport& rep, const RadialGrid& grid, int n_theta,
                                               bool normalize = true) {
  return detail::sampled_basis(rep, rep.kernel_basis, grid, n_theta, normalize);
}

inline std::vector<Field2D> cokernel_basis_field(const FredholmReport& rep, const RadialGrid& grid, int n_theta,
                                                 bool normalize = true) {
  return detail::sampled_basis(rep, rep.cokernel_basis, grid, n_theta, normalize);
}

/// Unweighted L^2(R^2) pairing <f, h> = int f h dA for a real h, computed
/// mode-wise: angular integrals exactly, radial trapezoid in tau.
inline complex pairing(const Field2D& f, const Field2D& h) {
  const RadialGrid& grid = f.grid();
  complex acc = 0.0;
  for (const auto& fm : f.modes()) {
    // int f h dtheta picks up h's mode -n against f's mode n.
    const auto& hm = h.mode(-fm.n);
    for (int i = 0; i < grid.size(); ++i) {
      const double r = grid[i];
      complex term = fm.values[i] * hm.values[i] * r * r;
      if (i == 0 || i == grid.size() - 1) term *= 0.5;
      acc += term;
    }
  }
  return 2.0 * std::numbers::pi * grid.step() * acc;
}

inline double l2_norm(const Field2D& f) { return order_norm(f, 0, 0.0, 0.0); }

struct Defect {
  BasisElement element;
  complex pairing;
  double relative = 0.0;  // |<f,h>| / (||f|| ||h||)
};

inline constexpr double kSolvabilityTolerance = 1e-6;

/// Pairings of f with every cokernel element (raw, unnormalized profiles).
inline std::vector<Defect> solvability_defect(const FredholmReport& rep, const Field2D& f) {
  std::vector<Defect> out;
  if (rep.status == Status::resonant) return out;
  const double fnorm = l2_norm(f);
  for (const auto& e : rep.cokernel_basis) {
    if (e.mode > f.max_mode()) {
      out.push_back({e, 0.0, 0.0});
      continue;
    }
    const Field2D h = basis_field(e, f.grid(), f.n_theta());
    const complex p = pairing(f, h);
    const double scale = fnorm * l2_norm(h);
    out.push_back({e, p, scale == 0.0 ? 0.0 : std::abs(p) / scale});
  }
  return out;
}

inline std::vector<Defect> solvability_defect(OperatorKind kind, const Field2D& f, WeightPair w) {
  return solvability_defect(classify(kind, w), f);
}

/// True when some genuine obstruction (an admissible cokernel element) pairs
/// with f above tolerance.
inline bool violates_solvability(const std::vector<Defect>& defects) {
  return std::any_of(defects.begin(), defects.end(), [](const Defect& d) {
    return d.element.admissible && d.relative > kSolvabilityTolerance;
  });
}

/// Oblique projection: f - sum_j c_j d_j with sum_j <d_j, h_i> c_j = <f, h_i>,
/// so the result pairs to zero with every test function h_i.
inline Field2D project_out(const Field2D& f, const std::vector<Field2D>& tests,
                           const std::vector<Field2D>& directions) {
  const auto m = static_cast<Eigen::Index>(tests.size());
  if (m == 0) return f;
  if (directions.size() != tests.size()) throw Error(ErrorCode::ShapeMismatch, "need one direction per test");
  Eigen::MatrixXcd gram(m, m);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs(i) = pairing(f, tests[i]);
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = pairing(directions[j], tests[i]);
  }
  const Eigen::VectorXcd c = gram.colPivHouseholderQr().solve(rhs);
  Field2D out = f;
  for (Eigen::Index j = 0; j < m; ++j) {
    Field2D scaled = directions[j];
    scaled *= c(j);
    out -= scaled;
  }
  return out;
}

/// Makes f solvable by removing its pairings with the admissible cokernel
/// elements. Cokernel profiles need not decay, so the correction is taken
/// along localized directions r^{k+2m} e^{-r^2} trig(k theta), m counting
/// the elements that share a mode and parity.
inline Field2D project_out_cokernel(const FredholmReport& rep, const Field2D& f) {
  std::vector<Field2D> tests;
  std::vector<Field2D> directions;
  std::vector<std::pair<int, Parity>> seen;
  for (const auto& e : rep.cokernel_basis) {
    if (!e.admissible || e.mode > f.max_mode()) continue;
    const auto slot = std::pair{e.mode, e.parity};
    const auto m = std::count(seen.begin(), seen.end(), slot);
    seen.push_back(slot);
    tests.push_back(basis_field(e, f.grid(), f.n_theta()));
    BasisElement d = e;
    d.radial = RadialForm::power(e.mode + 2.0 * static_cast<double>(m));
    Field2D dir = basis_field(d, f.grid(), f.n_theta());
    for (auto& mode : dir.modes())
      for (int i = 0; i < f.grid().size(); ++i) mode.values[i] *= std::exp(-f.grid()[i] * f.grid()[i]);
    directions.push_back(std::move(dir));
  }
  return project_out(f, tests, directions);
}

}  // namespace fredholm
