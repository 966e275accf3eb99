#pragma once

// Modified Bessel functions I_nu and K_nu of real order nu >= 0 and real
// argument z > 0.
//
//   I_nu : ascending power series for z <= max(30, nu^2), Hankel asymptotic
//          expansion beyond. All series terms are positive, so the series is
//          accurate to a few ulps wherever it is used.
//   K_nu : Temme's series (z <= 2) or Steed's continued fraction (z > 2) for
//          the fractional order mu = nu - round(nu), followed by forward
//          recurrence in the order, which is stable for K.
//
// The two routes share no code, which is what makes the Wronskian residual a
// meaningful check.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "fredholm/error.hpp"

namespace fredholm {

inline constexpr double kMaxBesselOrder = 64.0;

/// q(k) = sqrt(k^2 + 1), the effective order of the operators carrying 1/r^2.
inline double q_order(int k) { return std::sqrt(static_cast<double>(k) * k + 1.0); }

class BesselOrder {
 public:
  explicit BesselOrder(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu < 0.0) {
      throw Error(ErrorCode::OrderOutOfRange, "order must be finite and >= 0");
    }
    if (nu > kMaxBesselOrder) {
      throw Error(ErrorCode::OrderOutOfRange, "order exceeds the supported cap of 64");
    }
    is_integer_ = std::abs(nu - std::round(nu)) <= 1e-12;
  }

  double nu() const noexcept { return nu_; }
  bool is_integer() const noexcept { return is_integer_; }

 private:
  double nu_;
  bool is_integer_;
};

namespace detail {

inline void check_argument(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::NonPositiveArgument, "argument must be finite and > 0");
  }
}

// Taylor coefficients of 1/Gamma(x) = sum_k c_k x^k (Abramowitz & Stegun 6.1.34).
inline constexpr std::array<double, 26> kInvGammaCoeffs = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

struct TemmeGammas {
  double gam1;   // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
  double gam2;   // (1/G(1-mu) + 1/G(1+mu)) / 2
  double gampl;  // 1/G(1+mu)
  double gammi;  // 1/G(1-mu)
};

// 1/Gamma(1+x) = sum_k c_{k+1} x^k; split into even and odd parts so gam1
// carries no cancellation as mu -> 0.
inline TemmeGammas temme_gammas(double mu) {
  double even = 0.0;  // sum over k odd index (c_1, c_3, ...) times mu^(k-1)
  double odd = 0.0;   // sum over c_2, c_4, ... times mu^(k-2)
  const double mu2 = mu * mu;
  double p = 1.0;
  for (std::size_t k = 0; k < kInvGammaCoeffs.size(); k += 2) {
    even += kInvGammaCoeffs[k] * p;
    if (k + 1 < kInvGammaCoeffs.size()) odd += kInvGammaCoeffs[k + 1] * p;
    p *= mu2;
  }
  TemmeGammas g;
  g.gam2 = even;
  g.gam1 = -odd;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  return g;
}

/// e^{-z} I_nu(z) from the ascending series.
inline double i_series_scaled(double nu, double z) {
  const double half = 0.5 * z;
  const double quarter_sq = half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 2000; ++k) {
    term *= quarter_sq / (k * (nu + k));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  const double lead = nu * std::log(half) - std::lgamma(nu + 1.0) - z;
  return std::exp(lead) * sum;
}

/// Hankel expansion of e^{-z} I_nu(z) (sign = -1) or e^{z} K_nu(z) * sqrt(2z/pi)
/// companion (sign = +1). Summed until terms stop decreasing.
inline double hankel_series(double nu, double z, double sign) {
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 500; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu4 - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag >= prev) break;
    sum += term;
    prev = mag;
    if (mag < std::abs(sum) * 1e-17) break;
  }
  return sum;
}

inline double i_hankel_scaled(double nu, double z) {
  return hankel_series(nu, z, -1.0) / std::sqrt(2.0 * std::numbers::pi * z);
}

inline double k_hankel_scaled(double nu, double z) {
  return hankel_series(nu, z, 1.0) * std::sqrt(std::numbers::pi / (2.0 * z));
}

/// The I-series/asymptotic switch point.
inline bool i_uses_series(double nu, double z) {
  return z <= 700.0 && (z <= 30.0 || z < nu * nu);
}

/// Returns {e^z K_nu(z), e^z K_{nu+1}(z)}.
inline std::pair<double, double> k_pair_scaled(double nu, double z) {
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / z;
  const double xi2 = 2.0 * xi;
  double k_mu = 0.0;
  double k_mu1 = 0.0;

  if (z < 2.0) {
    const double x2 = 0.5 * z;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= max_iter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= (i - mu);
      q /= (i + mu);
      const double del = c * ff;
      sum += del;
      const double del1 = c * (p - i * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    const double ez = std::exp(z);
    k_mu = sum * ez;
    k_mu1 = sum1 * xi2 * ez;
  } else {
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= max_iter; ++i) {
      a -= 2.0 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    k_mu = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
    k_mu1 = k_mu * (mu + z + 0.5 - h) * xi;
  }

  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * xi2 * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = next;
  }
  return {k_mu, k_mu1};
}

inline double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::Overflow, std::string(what) + " not representable; use the scaled variant");
  }
  return value;
}

}  // namespace detail

/// e^{-z} I_nu(z).
inline double bessel_i_scaled(BesselOrder order, double z) {
  detail::check_argument(z);
  const double nu = order.nu();
  return detail::i_uses_series(nu, z) ? detail::i_series_scaled(nu, z)
                                      : detail::i_hankel_scaled(nu, z);
}

/// e^{z} K_nu(z).
inline double bessel_k_scaled(BesselOrder order, double z) {
  detail::check_argument(z);
  return detail::k_pair_scaled(order.nu(), z).first;
}

inline double bessel_i(BesselOrder order, double z) {
  detail::check_argument(z);
  const double nu = order.nu();
  if (detail::i_uses_series(nu, z) && z < 700.0) {
    // Unscaled series directly; avoids exp(-z) * exp(z) round trip.
    const double half = 0.5 * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 2000; ++k) {
      term *= half * half / (k * (nu + k));
      sum += term;
      if (term < sum * 1e-17) break;
    }
    const double lead = nu * std::log(half) - std::lgamma(nu + 1.0);
    return detail::checked(std::exp(lead) * sum, "I_nu(z)");
  }
  return detail::checked(bessel_i_scaled(order, z) * std::exp(z), "I_nu(z)");
}

inline double bessel_k(BesselOrder order, double z) {
  detail::check_argument(z);
  const double value = detail::k_pair_scaled(order.nu(), z).first * std::exp(-z);
  if (value == 0.0) {
    throw Error(ErrorCode::Overflow, "K_nu(z) underflows; use the scaled variant");
  }
  return detail::checked(value, "K_nu(z)");
}

/// I'_nu = I_{nu+1} + (nu/z) I_nu.
inline double bessel_i_prime(BesselOrder order, double z) {
  detail::check_argument(z);
  const double nu = order.nu();
  // Order nu+1 may exceed the public cap by one; evaluate through detail.
  const double i_next = detail::i_uses_series(nu + 1.0, z)
                            ? detail::i_series_scaled(nu + 1.0, z)
                            : detail::i_hankel_scaled(nu + 1.0, z);
  const double i_nu = bessel_i_scaled(order, z);
  return detail::checked((i_next + nu / z * i_nu) * std::exp(z), "I'_nu(z)");
}

/// K'_nu = -K_{nu+1} + (nu/z) K_nu.
inline double bessel_k_prime(BesselOrder order, double z) {
  detail::check_argument(z);
  const auto [k_nu, k_next] = detail::k_pair_scaled(order.nu(), z);
  return detail::checked((-k_next + order.nu() / z * k_nu) * std::exp(-z), "K'_nu(z)");
}

/// |z (I'_nu K_nu - I_nu K'_nu) - 1|, evaluated with scaled products so the
/// exponentials cancel exactly.
inline double wronskian_residual(BesselOrder order, double z) {
  detail::check_argument(z);
  const double nu = order.nu();
  const double i_nu = bessel_i_scaled(order, z);
  const double i_next = detail::i_uses_series(nu + 1.0, z) ? detail::i_series_scaled(nu + 1.0, z)
                                                           : detail::i_hankel_scaled(nu + 1.0, z);
  const auto [k_nu, k_next] = detail::k_pair_scaled(nu, z);
  const double ip = i_next + nu / z * i_nu;
  const double kp = -k_next + nu / z * k_nu;
  const double w = z * (ip * k_nu - i_nu * kp);
  if (!std::isfinite(w)) throw Error(ErrorCode::Overflow, "Wronskian products not representable");
  return std::abs(w - 1.0);
}

// Leading-order forms: small-z and large-z limits of I_nu and K_nu.
namespace asymptotic {

inline double i_small(double nu, double z) {
  return std::pow(0.5 * z, nu) / std::tgamma(nu + 1.0);
}

inline double k_small(double nu, double z) {
  if (nu == 0.0) return -std::log(z);
  return 0.5 * std::tgamma(nu) * std::pow(0.5 * z, -nu);
}

inline double i_large(double z) { return std::exp(z) / std::sqrt(2.0 * std::numbers::pi * z); }

inline double k_large(double z) { return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z); }

}  // namespace asymptotic

}  // namespace fredholm
