#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fredholm/bessel.hpp"
#include "fredholm/norms.hpp"

using namespace fredholm;

TEST(RadialGrid, EndpointsAndUniformLogSpacing) {
  const RadialGrid g(1e-4, 40.0, 1024);
  EXPECT_EQ(g[0], 1e-4);
  EXPECT_EQ(g[1023], 40.0);
  for (int i = 1; i < g.size(); ++i) {
    EXPECT_NEAR(std::log(g[i] / g[i - 1]), g.step(), 1e-12 * g.step() * 1e3);
    EXPECT_GT(g[i], g[i - 1]);
  }
}

TEST(RadialGrid, RejectsBadSpecs) {
  EXPECT_THROW(RadialGrid(0.0, 1.0, 100), Error);
  EXPECT_THROW(RadialGrid(2.0, 1.0, 100), Error);
  EXPECT_THROW(RadialGrid(1e-3, 1.0, 15), Error);
  try {
    RadialGrid(1e-3, 1.0, 8);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGrid);
  }
}

TEST(RadialGrid, RefinementHalvesTheStep) {
  const RadialGrid g(1e-2, 10.0, 100);
  const RadialGrid f = g.refined();
  EXPECT_EQ(f.size(), 199);
  EXPECT_NEAR(f.step(), g.step() / 2, 1e-15);
  for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(f[2 * i], g[i], 1e-12 * g[i]);
}

TEST(WeightB, PiecesAndBlend) {
  EXPECT_EQ(weight_b(0.5), 0.5);
  EXPECT_EQ(weight_b(3.0), 1.0);
  EXPECT_EQ(weight_b(1.0), 1.0);
  EXPECT_EQ(weight_b(2.0), 1.0);
  // Frozen regression value of the blend.
  EXPECT_NEAR(weight_b(1.5), 1.0857349468547328, 1e-14);
  for (int i = 0; i <= 1000; ++i) {
    const double r = 1.0 + i / 1000.0;
    EXPECT_GE(weight_b(r), 1.0 - 1e-15);
    EXPECT_LE(weight_b(r), r + 1e-15);
  }
  EXPECT_THROW(weight_b(0.0), Error);
  EXPECT_THROW(weight_b(-1.0), Error);
}

TEST(WeightB, TwiceContinuouslyDifferentiableAtTheJoins) {
  // One-sided second differences in t = log r agree across r = 1 and r = 2.
  auto b_of_t = [](double t) { return weight_b(std::exp(t)); };
  const double h = 2e-5;
  for (double t0 : {0.0, std::numbers::ln2}) {
    const double left1 = (b_of_t(t0) - b_of_t(t0 - h)) / h;
    const double right1 = (b_of_t(t0 + h) - b_of_t(t0)) / h;
    EXPECT_NEAR(left1, right1, 1e-3);
    const double left2 = (b_of_t(t0) - 2 * b_of_t(t0 - h) + b_of_t(t0 - 2 * h)) / (h * h);
    const double right2 = (b_of_t(t0 + 2 * h) - 2 * b_of_t(t0 + h) + b_of_t(t0)) / (h * h);
    EXPECT_NEAR(left2, right2, 5e-3);
  }
}

TEST(Bracket, Values) {
  EXPECT_EQ(bracket(0.0), 1.0);
  EXPECT_NEAR(bracket(1.0), std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(bracket(1e8) / 1e8, 1.0, 1e-15);
}

TEST(SpaceKind, OrderRange) {
  EXPECT_THROW(SpaceKind::H(3), Error);
  EXPECT_THROW(SpaceKind::M(-1), Error);
  EXPECT_EQ(SpaceKind::L2().s, 0);
}

TEST(WeightedNorm, ZeroAndHomogeneity) {
  const RadialGrid g(1e-4, 40.0, 512);
  EXPECT_EQ(weighted_norm(ModeFunction::zero(2, g), g, SpaceKind::M(2), {0.3, -0.4}), 0.0);
  auto u = ModeFunction::sample(2, g, [](double r) { return complex(r * r * std::exp(-r)); });
  const double a = weighted_norm(u, g, SpaceKind::M(2), {0.3, -0.4});
  auto v = complex(-3.0, 4.0) * u;
  EXPECT_NEAR(weighted_norm(v, g, SpaceKind::M(2), {0.3, -0.4}), 5.0 * a, 1e-13 * a);
}

TEST(WeightedNorm, TriangleInequalityOnRandomPairs) {
  const RadialGrid g(1e-3, 20.0, 256);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c1 = U(rng), c2 = U(rng), s = U(rng), t = 1.0 + U(rng);
    auto a = ModeFunction::sample(1, g, [&](double r) { return complex(c1 * r * std::exp(-t * r * r)); });
    auto b = ModeFunction::sample(1, g, [&](double r) { return complex(0.0, c2 * r * std::exp(-r)); });
    const WeightPair w{s, -s};
    const double lhs = weighted_norm(a + b, g, SpaceKind::H(2), w);
    EXPECT_LE(lhs, weighted_norm(a, g, SpaceKind::H(2), w) + weighted_norm(b, g, SpaceKind::H(2), w) + 1e-12);
  }
}

TEST(WeightedNorm, FarSupportIgnoresCoreExponent) {
  // b = 1 for r >= 2, so sigma has no effect on functions supported there.
  const RadialGrid g(1e-4, 40.0, 2048);
  auto u = ModeFunction::sample(0, g, [](double r) {
    if (r <= 3.0 || r >= 4.0) return complex(0.0);
    return complex(std::exp(-1.0 / ((r - 3.0) * (4.0 - r))));
  });
  const double base = weighted_norm(u, g, SpaceKind::L2(), {0.0, 0.5});
  for (double s : {-3.0, 3.0}) EXPECT_DOUBLE_EQ(weighted_norm(u, g, SpaceKind::L2(), {s, 0.5}), base);
}

TEST(WeightedNorm, CoreWeightIsAPowerBelowOne) {
  // u = e^{-(log r + 9)^2}: supported well inside r < 1 where b = r.
  // ||u b^s||^2 = 2 pi int e^{-2(t+9)^2} e^{(2s+2) t} dt in closed form.
  const RadialGrid g(1e-8, 1.0, 2048);
  auto u = ModeFunction::sample(0, g, [](double r) { return complex(std::exp(-std::pow(std::log(r) + 9.0, 2))); });
  for (double s : {-2.0, 0.0, 1.5}) {
    const double c = 2 * s + 2;
    const double exact = 2 * std::numbers::pi * std::sqrt(std::numbers::pi / 2) * std::exp(-9 * c + c * c / 8);
    EXPECT_NEAR(order_norm_squared(u, g, 0, s, 0.0) / exact, 1.0, 1e-10) << s;
  }
}

TEST(WeightedNorm, BesselK1MatchesAdaptiveQuadrature) {
  // Unweighted L^2 norm of K_1(r) e^{i theta} over [r_min, r_max]:
  // 2 pi int K_1^2 r dr.
  const RadialGrid g(1e-4, 40.0, 1024);
  auto u = ModeFunction::sample(1, g, [](double r) { return complex(bessel_k(BesselOrder(1), r)); });
  const double ours = weighted_norm(u, g, SpaceKind::H(0), {0.0, 0.0});
  const double oracle = std::sqrt(2 * std::numbers::pi *
                                  boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                      [](double t) {
                                        const double r = std::exp(t);
                                        const double k = boost::math::cyl_bessel_k(1, r);
                                        return k * k * r * r;
                                      },
                                      std::log(1e-4), std::log(40.0), 20, 1e-12));
  EXPECT_NEAR(ours / oracle, 1.0, 0.005);
}

TEST(WeightedNorm, AnalyticPowerNormIsReproduced) {
  // u = r^2 e^{-r^2} mode 0, L^2 with sigma = gamma = 0:
  // 2 pi int r^5 e^{-2 r^2} dr = 2 pi * 1/8 = pi/4.
  const RadialGrid g(1e-4, 40.0, 1024);
  auto u = ModeFunction::sample(0, g, [](double r) { return complex(r * r * std::exp(-r * r)); });
  EXPECT_NEAR(order_norm_squared(u, g, 0, 0.0, 0.0), std::numbers::pi / 4, 1e-9);
}

TEST(WeightedNorm, GradientDensityMatchesClosedForm) {
  // u = r e^{-r^2} e^{i theta}: |Du|^2 = |u'|^2 + |u|^2/r^2
  // = ((1 - 2r^2)^2 + 1) e^{-2r^2}; 2 pi int ... r dr = 2 pi (1/4 - 1/4 + 1/4 + 1/4) = pi.
  const RadialGrid g(1e-4, 40.0, 2048);
  auto u = ModeFunction::sample(1, g, [](double r) { return complex(r * std::exp(-r * r)); });
  EXPECT_NEAR(order_norm_squared(u, g, 1, 0.0, 0.0), std::numbers::pi, 1e-7);
}

TEST(WeightedNorm, BesselKMembershipThresholdAtOrigin) {
  // K_1 e^{i theta} in H^2_{sigma,gamma}: bounded under r_min -> 0 iff sigma > 0.
  auto norm_at = [](double r_min, double sigma) {
    const int n = static_cast<int>(64 * (std::log(40.0) - std::log(r_min))) + 1;
    const RadialGrid g(r_min, 40.0, n);
    auto u = ModeFunction::sample(1, g, [](double r) { return complex(bessel_k(BesselOrder(1), r)); });
    return weighted_norm(u, g, SpaceKind::H(2), {sigma, 0.0});
  };
  const double in_a = norm_at(1e-4, 0.5), in_b = norm_at(1e-8, 0.5);
  const double out_a = norm_at(1e-4, -0.5), out_b = norm_at(1e-8, -0.5);
  EXPECT_NEAR(in_b / in_a, 1.0, 1e-3);
  EXPECT_GT(out_b / out_a, 10.0);
}

TEST(WeightedNorm, EulerKernelMembershipThresholds) {
  // r^{-q} e^{ik theta} bounded under r_min refinement iff sigma+1 > q;
  // r^{q} under r_max refinement iff gamma+1 < -q.
  const int k = 1;
  const double q = q_order(k);
  auto at_zero = [&](double r_min, double sigma) {
    const RadialGrid g(r_min, 1.0, static_cast<int>(64 * -std::log(r_min)) + 1);
    auto u = ModeFunction::sample(k, g, [&](double r) { return complex(std::pow(r, -q)); });
    return weighted_norm(u, g, SpaceKind::M(2), {sigma, 0.0}, NormWindow{0});
  };
  EXPECT_NEAR(at_zero(1e-8, q - 1 + 0.3) / at_zero(1e-4, q - 1 + 0.3), 1.0, 1e-2);
  EXPECT_GT(at_zero(1e-8, q - 1 - 0.3) / at_zero(1e-4, q - 1 - 0.3), 5.0);

  auto at_inf = [&](double r_max, double gamma) {
    const RadialGrid g(1.0, r_max, static_cast<int>(64 * std::log(r_max)) + 1);
    auto u = ModeFunction::sample(k, g, [&](double r) { return complex(std::pow(r, q)); });
    return weighted_norm(u, g, SpaceKind::M(2), {0.0, gamma});
  };
  EXPECT_NEAR(at_inf(1e8, -q - 1 - 0.3) / at_inf(1e4, -q - 1 - 0.3), 1.0, 1e-2);
  EXPECT_GT(at_inf(1e8, -q - 1 + 0.3) / at_inf(1e4, -q - 1 + 0.3), 5.0);
}

TEST(WeightedNorm, ResolvedNormDetectsUnderResolution) {
  const RadialGrid coarse(1e-4, 40.0, 64);
  const auto spiky = [](double r) { return complex(std::exp(-std::pow((r - 3.0) / 0.3, 2))); };
  EXPECT_THROW(resolved_weighted_norm(spiky, 0, coarse, SpaceKind::H(2), {0.0, 0.0}), Error);
  const RadialGrid fine(1e-4, 40.0, 1024);
  const auto smooth = [](double r) { return complex(std::exp(-r * r)); };
  EXPECT_NO_THROW(resolved_weighted_norm(smooth, 0, fine, SpaceKind::H(2), {0.0, 0.0}));
}
