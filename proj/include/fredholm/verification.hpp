#pragma once

// Manufactured solutions, the two a priori ratios, and empirical solution
// operator norms over a fixed-seed random corpus.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fredholm/bessel.hpp"
#include "fredholm/classify.hpp"
#include "fredholm/field.hpp"
#include "fredholm/green.hpp"
#include "fredholm/norms.hpp"
#include "fredholm/operators.hpp"

namespace fredholm {

// ---------------------------------------------------------------------------
// Manufactured solutions

enum class Family { gaussian_power, bessel_damped, annulus_bump };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::gaussian_power: return "gaussian_power";
    case Family::bessel_damped: return "bessel_damped";
    case Family::annulus_bump: return "annulus_bump";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "gaussian_power") return Family::gaussian_power;
  if (s == "bessel_damped") return Family::bessel_damped;
  if (s == "annulus_bump") return Family::annulus_bump;
  throw Error(ErrorCode::UnknownFamily, "unknown manufactured family '" + std::string(s) + "'");
}

/// Optional family parameters. gaussian_power: "a" (default: the radial order,
/// which cancels the r^{a-2} term). bessel_damped: "c" (default 2), the centre
/// of the Gaussian factor. annulus_bump: "r1", "r2" (default 1, 2).
using FamilyParams = std::map<std::string, double>;

struct ManufacturedCase {
  ModeFunction u;
  ModeFunction f;
};

/// Closed-form u and its profile derivatives (u, u_r, u_rr) at r.
struct RadialJet {
  double u = 0.0, du = 0.0, ddu = 0.0;
};

namespace detail {

inline double param(const FamilyParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

/// r^a e^{-r^2}.
inline RadialJet gaussian_power_jet(double a, double r) {
  const double u = std::pow(r, a) * std::exp(-r * r);
  const double l1 = a / r - 2.0 * r;        // (log u)'
  const double l2 = -a / (r * r) - 2.0;     // (log u)''
  return {u, l1 * u, (l2 + l1 * l1) * u};
}

/// K_nu(r) psi(r), psi = (r^2/(1+r^2))^{nu+1} e^{-(r-c)^2}; regular (~ r^{nu+2}) at 0.
inline RadialJet bessel_damped_jet(double nu, double c, double r) {
  const BesselOrder order(nu);
  // K' = -K_{nu+1} + (nu/r) K, with K_{nu+1} from the recurrence partner.
  const auto [ks, ks1] = detail::k_pair_scaled(order.nu(), r);
  const double k = std::exp(-r) * ks;
  const double k1 = std::exp(-r) * ks1;
  const double dk = -k1 + nu / r * k;
  const double ddk = k - dk / r + nu * nu / (r * r) * k;  // Bessel equation
  const double r2 = r * r;
  const double chi = (nu + 1.0) * (2.0 * std::log(r) - std::log1p(r2)) - (r - c) * (r - c);
  const double dchi = (nu + 1.0) * (2.0 / r - 2.0 * r / (1.0 + r2)) - 2.0 * (r - c);
  const double ddchi = (nu + 1.0) * (-2.0 / r2 - 2.0 * (1.0 - r2) / ((1.0 + r2) * (1.0 + r2))) - 2.0;
  const double psi = std::exp(chi);
  const double dpsi = dchi * psi;
  const double ddpsi = (ddchi + dchi * dchi) * psi;
  return {k * psi, dk * psi + k * dpsi, ddk * psi + 2.0 * dk * dpsi + k * ddpsi};
}

/// exp(-1/((r-r1)(r2-r))) on (r1, r2), zero elsewhere.
inline RadialJet annulus_bump_jet(double r1, double r2, double r) {
  if (r <= r1 || r >= r2) return {};
  const double p = (r - r1) * (r2 - r);
  const double dp = r1 + r2 - 2.0 * r;
  const double ddp = -2.0;
  const double u = std::exp(-1.0 / p);
  const double l1 = dp / (p * p);
  const double l2 = ddp / (p * p) - 2.0 * dp * dp / (p * p * p);
  return {u, l1 * u, (l2 + l1 * l1) * u};
}

}  // namespace detail

inline RadialJet manufactured_jet(OperatorKind kind, int n, Family family, const FamilyParams& params, double r) {
  const double nu = radial_order(kind, n);
  switch (family) {
    case Family::gaussian_power: return detail::gaussian_power_jet(detail::param(params, "a", nu), r);
    case Family::bessel_damped: return detail::bessel_damped_jet(nu, detail::param(params, "c", 2.0), r);
    case Family::annulus_bump:
      return detail::annulus_bump_jet(detail::param(params, "r1", 1.0), detail::param(params, "r2", 2.0), r);
  }
  throw Error(ErrorCode::UnknownFamily, "unknown manufactured family");
}

/// u in closed form and f = L_n u by exact differentiation:
/// L_n u = u'' + u'/r - (nu^2/r^2 + shift) u.
inline ManufacturedCase manufactured_case(OperatorKind kind, int n, Family family, const RadialGrid& grid,
                                          const FamilyParams& params = {}) {
  const double nu = radial_order(kind, n);
  const double shift = zeroth_order_shift(kind);
  if (family == Family::annulus_bump) {
    const double r1 = detail::param(params, "r1", 1.0);
    const double r2 = detail::param(params, "r2", 2.0);
    if (!(r1 > 0.0) || !(r2 > r1)) throw Error(ErrorCode::InvalidArgument, "annulus needs 0 < r1 < r2");
  }
  ManufacturedCase c{ModeFunction::zero(n, grid), ModeFunction::zero(n, grid)};
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const RadialJet j = manufactured_jet(kind, n, family, params, r);
    c.u.values[i] = j.u;
    c.f.values[i] = j.ddu + j.du / r - (nu * nu / (r * r) + shift) * j.u;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Deterministic randomness: raw mt19937_64 output mapped by hand, since the
// standard distributions are not reproducible across library implementations.

inline constexpr std::uint64_t kCorpusSeed = 0x5eed'f00d'2024ULL;

class CorpusRng {
 public:
  explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

/// Gaussian bump in tau: exp(-(tau - center)^2 / (2 width^2)).
struct TauBump {
  double center;
  double width;
  double operator()(double r) const {
    const double d = (std::log(r) - center) / width;
    return std::exp(-0.5 * d * d);
  }
};

struct BumpTerm {
  int mode;
  complex amplitude;
  TauBump bump;
};

/// Real field sum_t Re(amplitude e^{i mode theta}) bump(r), stored as the
/// conjugate pair of modes.
inline Field2D bump_field(const std::vector<BumpTerm>& terms, const RadialGrid& grid, int n_theta) {
  Field2D u(grid, n_theta);
  for (const auto& t : terms) {
    auto profile = ModeFunction::sample(t.mode, grid, t.bump);
    if (t.mode == 0) {
      profile *= complex(t.amplitude.real());
      u.mode(0) += profile;
      continue;
    }
    ModeFunction neg = profile;
    neg.n = -t.mode;
    profile *= 0.5 * t.amplitude;
    neg *= 0.5 * std::conj(t.amplitude);
    u.mode(t.mode) += profile;
    u.mode(-t.mode) += neg;
  }
  return u;
}

/// Keeps a bump's e-folding tails below 1e-9 of its peak at both grid ends.
inline constexpr double kBumpClearance = 6.5;

struct CorpusSpec {
  int count = 50;
  int max_mode = 4;
  int max_terms = 3;
  double min_width = 0.25;
  double max_width = 0.6;
  std::uint64_t seed = kCorpusSeed;
};

/// Band-limited random bumps with centres in the interior of the tau range.
inline std::vector<std::vector<BumpTerm>> bump_corpus(const CorpusSpec& spec, const RadialGrid& grid) {
  CorpusRng rng(spec.seed);
  const double lo = std::log(grid.r_min());
  const double hi = std::log(grid.r_max());
  std::vector<std::vector<BumpTerm>> out;
  for (int s = 0; s < spec.count; ++s) {
    std::vector<BumpTerm> terms;
    const int n_terms = rng.integer(1, spec.max_terms);
    for (int t = 0; t < n_terms; ++t) {
      const int mode = rng.integer(0, spec.max_mode);
      const double width = rng.uniform(spec.min_width, spec.max_width);
      const double margin = kBumpClearance * width;
      const double center = rng.uniform(std::max(lo + margin, -4.0), std::min(hi - margin, 2.5));
      const complex amp(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      terms.push_back({mode, amp, {center, width}});
    }
    out.push_back(std::move(terms));
  }
  return out;
}

// ---------------------------------------------------------------------------
// A priori ratios

inline Field2D laplacian(const Field2D& u) {
  Field2D out(u.grid(), u.n_theta());
  for (const auto& m : u.modes()) {
    // Delta_n = apply(euler) + 1/r^2, without the extra 1/r^2 of the Euler kind.
    ModeFunction lm = apply_mode_operator(OperatorKind::helmholtz, m, u.grid());
    for (int i = 0; i < u.grid().size(); ++i) lm.values[i] += m.values[i];
    out.set_mode(std::move(lm));
  }
  return out;
}

struct RatioResult {
  double value = 0.0;
  bool defined = true;  // false when the denominator vanishes
};

/// ||D^2 u||_{L^2_{s+2,g+2}} / (||Delta u||_{L^2_{s+2,g+2}} + ||D u||_{L^2_{s+1,g+1}}).
inline double interpolation_ratio(const Field2D& u, WeightPair w) {
  const double num = order_norm(u, 2, w.sigma + 2.0, w.gamma + 2.0);
  const double den = order_norm(laplacian(u), 0, w.sigma + 2.0, w.gamma + 2.0) +
                     order_norm(u, 1, w.sigma + 1.0, w.gamma + 1.0);
  if (den == 0.0) throw Error(ErrorCode::ZeroDenominator, "interpolation ratio undefined: denominator is zero");
  return num / den;
}

/// ||u||_{H^2_{s,g}} / (||(Delta - 1) u||_{L^2_{s+2,g}} + ||u||_{L^2_{s,g}}).
inline double helmholtz_apriori_ratio(const Field2D& u, WeightPair w) {
  const double num = weighted_norm(u, SpaceKind::H(2), w);
  const double den = order_norm(apply_operator(OperatorKind::helmholtz, u), 0, w.sigma + 2.0, w.gamma) +
                     order_norm(u, 0, w.sigma, w.gamma);
  if (den == 0.0) throw Error(ErrorCode::ZeroDenominator, "a priori ratio undefined: denominator is zero");
  return num / den;
}

/// Non-throwing wrappers reporting an undefined ratio instead.
template <class Ratio>
RatioResult safe_ratio(Ratio&& ratio, const Field2D& u, WeightPair w) {
  try {
    return {ratio(u, w), true};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroDenominator) throw;
    return {std::numeric_limits<double>::infinity(), false};
  }
}

enum class LemmaRatio { interpolation, helmholtz_apriori };

/// Maximum of a ratio over the bump corpus.
inline double corpus_max_ratio(LemmaRatio which, WeightPair w, const RadialGrid& grid, const CorpusSpec& spec = {},
                               int n_theta = 16) {
  double best = 0.0;
  for (const auto& terms : bump_corpus(spec, grid)) {
    const Field2D u = bump_field(terms, grid, n_theta);
    const double r = which == LemmaRatio::interpolation ? interpolation_ratio(u, w) : helmholtz_apriori_ratio(u, w);
    best = std::max(best, r);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Empirical solution-operator norm

struct BoundOptions {
  RadialGrid grid = RadialGrid(1e-4, 40.0, 1024);
  int n_theta = 64;
  int max_mode = 4;
  std::uint64_t seed = kCorpusSeed;
};

struct BoundEstimate {
  double estimate = 0.0;
  std::optional<double> envelope;  // max(1/|gamma|, 1/(sigma+2)) where it applies
  int samples = 0;
};

/// max of ||solve(f)||_domain / ||f||_range over f = bump(r) cos(n theta),
/// for sample_count fixed-seed radial bumps and every mode n <= max_mode.
/// f is made solvable first; the solver projects out the kernel.
inline BoundEstimate bound_constant_estimate(OperatorKind kind, WeightPair w, int sample_count,
                                             const BoundOptions& opt = {}) {
  const FredholmReport rep = classify(kind, w);
  require_fredholm(rep);
  if (opt.max_mode > opt.n_theta / 2 - 1) throw Error(ErrorCode::ShapeMismatch, "max_mode exceeds n_theta/2 - 1");
  CorpusSpec spec;
  spec.count = sample_count;
  spec.max_mode = 0;
  spec.max_terms = 1;
  spec.seed = opt.seed;
  const WeightPair rw = range_weights(kind, w);
  BoundEstimate out;
  for (const auto& terms : bump_corpus(spec, opt.grid)) {
    for (int n = 0; n <= opt.max_mode; ++n) {
      Field2D f = bump_field({{n, 1.0, terms.front().bump}}, opt.grid, opt.n_theta);
      if (!rep.cokernel_basis.empty()) f = project_out_cokernel(rep, f);
      const SolveResult s = solve_field(kind, f, w);
      const double ratio = weighted_norm(s.solution, domain_space(kind), w) / order_norm(f, 0, rw.sigma, rw.gamma);
      out.estimate = std::max(out.estimate, ratio);
      ++out.samples;
    }
  }
  if (kind == OperatorKind::euler && w.sigma > -2.0 && w.gamma < 0.0) {
    out.envelope = std::max(1.0 / std::abs(w.gamma), 1.0 / (w.sigma + 2.0));
  }
  return out;
}

}  // namespace fredholm
