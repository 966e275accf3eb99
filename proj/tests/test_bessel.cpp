#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fredholm/bessel.hpp"

using namespace fredholm;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// I_nu(z) = (1/pi) int_0^pi e^{z cos t} cos(nu t) dt
//         - (sin(nu pi)/pi) int_0^inf e^{-z cosh t - nu t} dt
double i_integral(double nu, double z) {
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::exp_sinh;
  const double a = gauss_kronrod<double, 61>::integrate(
      [&](double t) { return std::exp(z * std::cos(t)) * std::cos(nu * t); }, 0.0, kPi, 15, 1e-15);
  exp_sinh<double> tail;
  const double b = tail.integrate([&](double t) { return std::exp(-z * std::cosh(t) - nu * t); }, 0.0,
                                  std::numeric_limits<double>::infinity());
  return a / kPi - std::sin(nu * kPi) / kPi * b;
}

// K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt
double k_integral(double nu, double z) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(
      [&](double t) {
        const double e = z * std::cosh(t);
        if (e > 700.0) return 0.0;
        return 0.5 * (std::exp(-e + nu * t) + std::exp(-e - nu * t));
      },
      0.0, std::numeric_limits<double>::infinity());
}

// Ascending series for I_{+-nu} in long double.
long double i_series(long double nu, long double z) {
  const long double half = z / 2;
  long double term = std::pow(half, nu) / std::tgamma(nu + 1);
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= half * half / (k * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

double k_connection(double nu, double z) {
  return static_cast<double>(kPi / 2 * (i_series(-nu, z) - i_series(nu, z)) / std::sin(nu * kPi));
}

// Richardson-extrapolated central difference.
template <class F>
double richardson(F&& f, double z, double h) {
  auto d = [&](double s) { return (f(z + s) - f(z - s)) / (2 * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}

template <class F>
double boost_or_inf(F&& f) {
  try {
    return f();
  } catch (const std::overflow_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

TEST(BesselOrder, ValidatesAndFlagsIntegers) {
  EXPECT_TRUE(BesselOrder(3.0).is_integer());
  EXPECT_TRUE(BesselOrder(3.0 + 1e-13).is_integer());
  EXPECT_FALSE(BesselOrder(std::sqrt(2.0)).is_integer());
  EXPECT_THROW(BesselOrder(-0.5), Error);
  EXPECT_THROW(BesselOrder(64.5), Error);
  EXPECT_THROW(BesselOrder(std::nan("")), Error);
  try {
    BesselOrder(65.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderOutOfRange);
  }
}

TEST(BesselI, SmallArgumentLimits) {
  EXPECT_NEAR(bessel_i(BesselOrder(0), 1e-12), 1.0, 1e-15);
  EXPECT_LE(rel(bessel_i(BesselOrder(1), 1e-4), 5e-5), 1e-8);
}

TEST(BesselI, MatchesIntegralRepresentation) {
  for (double nu : {0.0, 1.0, std::sqrt(2.0), std::sqrt(5.0), 3.5}) {
    for (double z : {1.0, 4.0, 12.0}) {
      EXPECT_LE(rel(bessel_i(BesselOrder(nu), z), i_integral(nu, z)), 1e-10) << "nu=" << nu << " z=" << z;
    }
    // The integral form cancels badly for small z; the series is exact there.
    EXPECT_LE(rel(bessel_i(BesselOrder(nu), 0.1), static_cast<double>(i_series(nu, 0.1L))), 1e-12) << nu;
  }
  EXPECT_LE(rel(bessel_i(BesselOrder(std::sqrt(2.0)), 1.0), i_integral(std::sqrt(2.0), 1.0)), 1e-12);
}

TEST(BesselK, SmallArgumentLimits) {
  EXPECT_LE(rel(bessel_k(BesselOrder(1), 1e-4), 1e4), 1e-6);
  // K_0(z) / (-log z) decreases to 1 as z -> 0.
  double previous = std::numeric_limits<double>::infinity();
  for (double z : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const double ratio = bessel_k(BesselOrder(0), z) / -std::log(z);
    EXPECT_GT(ratio, 1.0);
    EXPECT_LT(ratio, previous);
    previous = ratio;
  }
  EXPECT_LT(previous, 1.01);
}

TEST(BesselK, MatchesConnectionFormula) {
  const double nu = std::sqrt(2.0);
  EXPECT_LE(rel(bessel_k(BesselOrder(nu), 1.0), k_connection(nu, 1.0)), 1e-12);
  for (double z : {0.01, 0.3, 2.0, 5.0}) {
    for (double n2 : {std::sqrt(5.0), 0.4, 2.7}) {
      EXPECT_LE(rel(bessel_k(BesselOrder(n2), z), k_connection(n2, z)), 1e-10) << "nu=" << n2 << " z=" << z;
    }
  }
}

TEST(BesselK, MatchesIntegralRepresentation) {
  for (double nu : {0.0, 1.0, std::sqrt(2.0), 5.0, std::sqrt(26.0)}) {
    for (double z : {0.05, 1.0, 7.0, 30.0}) {
      EXPECT_LE(rel(bessel_k(BesselOrder(nu), z), k_integral(nu, z)), 1e-10) << "nu=" << nu << " z=" << z;
    }
  }
}

TEST(Bessel, AgreesWithBoostAcrossSupportedRange) {
  double worst_i = 0.0;
  double worst_k = 0.0;
  for (double nu : {0.0, 0.5, 1.0, std::sqrt(2.0), 2.0, std::sqrt(5.0), 5.0, std::sqrt(26.0), 17.3, 40.0, 64.0}) {
    for (int i = 0; i <= 60; ++i) {
      const double z = 1e-6 * std::pow(6e7, i / 60.0);
      const double ib = boost_or_inf([&] { return boost::math::cyl_bessel_i(nu, z); });
      const double kb = boost_or_inf([&] { return boost::math::cyl_bessel_k(nu, z); });
      if (ib > 1e-300 && std::isfinite(ib)) worst_i = std::max(worst_i, rel(bessel_i(BesselOrder(nu), z), ib));
      if (kb > 1e-300 && std::isfinite(kb)) worst_k = std::max(worst_k, rel(bessel_k(BesselOrder(nu), z), kb));
    }
  }
  EXPECT_LE(worst_i, 1e-10);
  EXPECT_LE(worst_k, 1e-10);
}

TEST(Bessel, ScaledVariantsStayFiniteWhereUnscaledCannot) {
  const BesselOrder nu(2.0);
  EXPECT_THROW(bessel_i(nu, 800.0), Error);
  EXPECT_THROW(bessel_k(nu, 800.0), Error);
  EXPECT_NEAR(bessel_i_scaled(nu, 800.0) * std::sqrt(2 * kPi * 800.0), 1.0, 1e-2);
  EXPECT_NEAR(bessel_k_scaled(nu, 800.0) / std::sqrt(kPi / 1600.0), 1.0, 1e-2);
}

TEST(Bessel, RejectsNonPositiveArguments) {
  for (double z : {0.0, -1.0}) {
    try {
      bessel_k(BesselOrder(1), z);
      FAIL() << "no throw";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonPositiveArgument);
    }
    EXPECT_THROW(bessel_i(BesselOrder(1), z), Error);
  }
}

TEST(BesselDerivatives, IntegerOrderIdentities) {
  EXPECT_LE(rel(bessel_i_prime(BesselOrder(0), 2.0), bessel_i(BesselOrder(1), 2.0)), 1e-14);
  EXPECT_LE(rel(bessel_k_prime(BesselOrder(0), 2.0), -bessel_k(BesselOrder(1), 2.0)), 1e-14);
  const auto fi = [](double z) { return bessel_i(BesselOrder(0), z); };
  const auto fk = [](double z) { return bessel_k(BesselOrder(0), z); };
  EXPECT_LE(rel(bessel_i_prime(BesselOrder(0), 2.0), richardson(fi, 2.0, 1e-3)), 1e-8);
  EXPECT_LE(rel(bessel_k_prime(BesselOrder(0), 2.0), richardson(fk, 2.0, 1e-3)), 1e-8);
}

TEST(BesselDerivatives, MatchExtrapolatedDifferences) {
  for (double nu : {std::sqrt(2.0), 1.0, 4.0, std::sqrt(10.0)}) {
    const BesselOrder order(nu);
    for (double z : {0.1, 0.5, 3.0, 12.0, 30.0}) {
      const double h = 1e-3 * z;
      const double di = richardson([&](double x) { return bessel_i(order, x); }, z, h);
      const double dk = richardson([&](double x) { return bessel_k(order, x); }, z, h);
      EXPECT_LE(rel(bessel_i_prime(order, z), di), 1e-8) << nu << " " << z;
      EXPECT_LE(rel(bessel_k_prime(order, z), dk), 1e-8) << nu << " " << z;
    }
  }
}

TEST(BesselDerivatives, LogarithmicDerivativesScaleLikeOneOverZ) {
  for (double nu : {1.0, std::sqrt(2.0), 5.0}) {
    const BesselOrder order(nu);
    const double z = 1e-5;
    EXPECT_NEAR(z * bessel_i_prime(order, z) / bessel_i(order, z), nu, 1e-6);
    EXPECT_NEAR(z * bessel_k_prime(order, z) / bessel_k(order, z), -nu, 1e-6);
  }
}

TEST(Wronskian, PointExamples) {
  EXPECT_LE(wronskian_residual(BesselOrder(0), 1.0), 1e-10);
  EXPECT_LE(wronskian_residual(BesselOrder(5), 1e-3), 1e-10);
  EXPECT_LE(wronskian_residual(BesselOrder(std::sqrt(10.0)), 25.0), 1e-10);
}

TEST(Wronskian, HoldsOverSupportedOrders) {
  double worst = 0.0;
  for (double nu = 0.0; nu <= 64.0; nu += 0.75) {
    for (int i = 0; i < 100; ++i) {
      const double z = 1e-3 * std::pow(3e4, i / 99.0);
      worst = std::max(worst, wronskian_residual(BesselOrder(nu), z));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Bessel, MonotoneInArgument) {
  for (double nu : {0.0, std::sqrt(2.0), 3.0}) {
    const BesselOrder order(nu);
    double pi = 0.0;
    double pk = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
      const double z = 1e-3 * std::pow(5e4, i / 199.0);
      const double iv = bessel_i(order, z);
      const double kv = bessel_k(order, z);
      EXPECT_GT(iv, pi);
      EXPECT_LT(kv, pk);
      pi = iv;
      pk = kv;
    }
  }
}

TEST(Bessel, IntegerRecurrenceCloses) {
  for (int n = 1; n <= 12; ++n) {
    for (double z : {0.01, 0.7, 5.0, 25.0}) {
      const double im = bessel_i(BesselOrder(n - 1), z);
      const double i0 = bessel_i(BesselOrder(n), z);
      const double ip = bessel_i(BesselOrder(n + 1), z);
      EXPECT_LE(std::abs(im - ip - 2.0 * n / z * i0), 1e-9 * im) << n << " " << z;
    }
  }
}

TEST(Bessel, LeadingOrderFormsAtTheEnds) {
  // Small argument: all orders within 1%. Large argument: only orders with
  // |4 nu^2 - 1| / (8 z) well below 1% can meet that at z = 40.
  for (double nu : {1.0, 2.0, 5.0, std::sqrt(2.0), std::sqrt(5.0), std::sqrt(26.0)}) {
    EXPECT_LE(rel(bessel_i(BesselOrder(nu), 1e-4), asymptotic::i_small(nu, 1e-4)), 0.01);
    EXPECT_LE(rel(bessel_k(BesselOrder(nu), 1e-4), asymptotic::k_small(nu, 1e-4)), 0.01);
  }
  for (double nu : {0.0, 1.0}) {
    EXPECT_LE(rel(bessel_i(BesselOrder(nu), 40.0), asymptotic::i_large(40.0)), 0.01);
    EXPECT_LE(rel(bessel_k(BesselOrder(nu), 40.0), asymptotic::k_large(40.0)), 0.01);
  }
  // The first correction term accounts for the remaining gap.
  const double nu = std::sqrt(26.0);
  const double corr = 1.0 + (4 * nu * nu - 1) / (8 * 40.0);
  EXPECT_LE(rel(bessel_k(BesselOrder(nu), 40.0), asymptotic::k_large(40.0) * corr), 0.05);
}
