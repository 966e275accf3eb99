#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "fredholm/error.hpp"
#include "fredholm/grid.hpp"

namespace fredholm {

using complex = std::complex<double>;

/// One angular Fourier mode u_n(r) e^{i n theta}, sampled on a RadialGrid.
struct ModeFunction {
  int n = 0;
  std::vector<complex> values;

  ModeFunction() = default;
  ModeFunction(int mode, std::vector<complex> samples) : n(mode), values(std::move(samples)) {}

  static ModeFunction zero(int mode, const RadialGrid& grid) {
    return {mode, std::vector<complex>(static_cast<std::size_t>(grid.size()))};
  }

  /// Samples g(r_i) of a real radial profile.
  template <class Profile>
  static ModeFunction sample(int mode, const RadialGrid& grid, Profile&& g) {
    ModeFunction m = zero(mode, grid);
    for (int i = 0; i < grid.size(); ++i) m.values[i] = g(grid[i]);
    return m;
  }

  std::size_t size() const noexcept { return values.size(); }

  ModeFunction& operator+=(const ModeFunction& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  ModeFunction& operator-=(const ModeFunction& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  ModeFunction& operator*=(complex c) {
    for (auto& v : values) v *= c;
    return *this;
  }
  friend ModeFunction operator+(ModeFunction a, const ModeFunction& b) { return a += b; }
  friend ModeFunction operator-(ModeFunction a, const ModeFunction& b) { return a -= b; }
  friend ModeFunction operator*(complex c, ModeFunction a) { return a *= c; }
};

/// Samples on the polar tensor grid, row-major in (radius, angle):
/// values[i * n_theta + j] = u(r_i, 2 pi j / n_theta).
struct PolarSamples {
  RadialGrid grid;
  int n_theta;
  std::vector<complex> values;

  complex& at(int i, int j) { return values[static_cast<std::size_t>(i) * n_theta + j]; }
  complex at(int i, int j) const { return values[static_cast<std::size_t>(i) * n_theta + j]; }

  template <class Fn>
  static PolarSamples sample(const RadialGrid& grid, int n_theta, Fn&& u) {
    PolarSamples s{grid, n_theta, std::vector<complex>(static_cast<std::size_t>(grid.size()) * n_theta)};
    for (int i = 0; i < grid.size(); ++i)
      for (int j = 0; j < n_theta; ++j) s.at(i, j) = u(grid[i], 2.0 * std::numbers::pi * j / n_theta);
    return s;
  }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// A function on the polar grid stored as its stack of angular modes
/// n = -n_theta/2+1 .. n_theta/2-1.
class Field2D {
 public:
  Field2D(RadialGrid grid, int n_theta) : grid_(std::move(grid)), n_theta_(n_theta) {
    if (!is_power_of_two(n_theta) || n_theta < 2) {
      throw Error(ErrorCode::ShapeMismatch, "n_theta must be a power of two >= 2");
    }
    modes_.reserve(static_cast<std::size_t>(n_theta - 1));
    for (int n = min_mode(); n <= max_mode(); ++n) modes_.push_back(ModeFunction::zero(n, grid_));
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  int n_theta() const noexcept { return n_theta_; }
  int max_mode() const noexcept { return n_theta_ / 2 - 1; }
  int min_mode() const noexcept { return -max_mode(); }

  bool has_mode(int n) const noexcept { return n >= min_mode() && n <= max_mode(); }

  ModeFunction& mode(int n) {
    check_mode(n);
    return modes_[static_cast<std::size_t>(n - min_mode())];
  }
  const ModeFunction& mode(int n) const {
    check_mode(n);
    return modes_[static_cast<std::size_t>(n - min_mode())];
  }

  std::span<ModeFunction> modes() noexcept { return modes_; }
  std::span<const ModeFunction> modes() const noexcept { return modes_; }

  /// Places a single mode into the field; the mode's index selects the slot.
  void set_mode(ModeFunction m) {
    if (m.size() != static_cast<std::size_t>(grid_.size())) {
      throw Error(ErrorCode::ShapeMismatch, "mode length does not match grid");
    }
    mode(m.n) = std::move(m);
  }

  static Field2D from_mode(const RadialGrid& grid, int n_theta, ModeFunction m) {
    Field2D f(grid, n_theta);
    f.set_mode(std::move(m));
    return f;
  }

  Field2D& operator+=(const Field2D& o) {
    for (std::size_t k = 0; k < modes_.size(); ++k) modes_[k] += o.modes_[k];
    return *this;
  }
  Field2D& operator-=(const Field2D& o) {
    for (std::size_t k = 0; k < modes_.size(); ++k) modes_[k] -= o.modes_[k];
    return *this;
  }
  Field2D& operator*=(complex c) {
    for (auto& m : modes_) m *= c;
    return *this;
  }
  friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
  friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
  friend Field2D operator*(complex c, Field2D a) { return a *= c; }

 private:
  void check_mode(int n) const {
    if (!has_mode(n)) throw Error(ErrorCode::ShapeMismatch, "mode index outside angular resolution");
  }

  RadialGrid grid_;
  int n_theta_;
  std::vector<ModeFunction> modes_;
};

/// Discrete angular Fourier coefficients c_n = (1/N) sum_j u_j e^{-i n theta_j}.
/// The Nyquist coefficient is dropped.
inline Field2D decompose(const PolarSamples& samples) {
  if (samples.values.size() != static_cast<std::size_t>(samples.grid.size()) * samples.n_theta) {
    throw Error(ErrorCode::ShapeMismatch, "sample count does not match grid x n_theta");
  }
  Field2D field(samples.grid, samples.n_theta);
  const int nt = samples.n_theta;
  std::vector<complex> twiddle(static_cast<std::size_t>(nt));
  for (int j = 0; j < nt; ++j) twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * j / nt);
  for (int n = field.min_mode(); n <= field.max_mode(); ++n) {
    auto& out = field.mode(n).values;
    for (int i = 0; i < samples.grid.size(); ++i) {
      complex acc = 0.0;
      for (int j = 0; j < nt; ++j) {
        const int idx = ((n * j) % nt + nt) % nt;
        acc += samples.at(i, j) * twiddle[idx];
      }
      out[i] = acc / static_cast<double>(nt);
    }
  }
  return field;
}

inline PolarSamples reconstruct(const Field2D& field) {
  const int nt = field.n_theta();
  PolarSamples s{field.grid(), nt,
                 std::vector<complex>(static_cast<std::size_t>(field.grid().size()) * nt)};
  std::vector<complex> twiddle(static_cast<std::size_t>(nt));
  for (int j = 0; j < nt; ++j) twiddle[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / nt);
  for (const auto& m : field.modes()) {
    for (int i = 0; i < field.grid().size(); ++i) {
      const complex c = m.values[i];
      if (c == 0.0) continue;
      for (int j = 0; j < nt; ++j) s.at(i, j) += c * twiddle[((m.n * j) % nt + nt) % nt];
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Fourth-order finite differences in tau on the uniform log grid. Interior
// nodes use 5-point centred stencils; the two nodes at each end use one-sided
// stencils of the same order.

template <class T>
std::vector<T> d_tau(std::span<const T> u, double h) {
  const std::size_t n = u.size();
  std::vector<T> d(n);
  const double c = 1.0 / (12.0 * h);
  if (n < 6) throw Error(ErrorCode::GridTooCoarse, "need at least 6 nodes for tau stencils");
  d[0] = c * (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]);
  d[1] = c * (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = c * (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]);
  }
  d[n - 2] = c * (3.0 * u[n - 1] + 10.0 * u[n - 2] - 18.0 * u[n - 3] + 6.0 * u[n - 4] - u[n - 5]);
  d[n - 1] = c * (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] - 16.0 * u[n - 4] + 3.0 * u[n - 5]);
  return d;
}

template <class T>
std::vector<T> d2_tau(std::span<const T> u, double h) {
  const std::size_t n = u.size();
  std::vector<T> d(n);
  const double c = 1.0 / (12.0 * h * h);
  if (n < 6) throw Error(ErrorCode::GridTooCoarse, "need at least 6 nodes for tau stencils");
  d[0] = c * (45.0 * u[0] - 154.0 * u[1] + 214.0 * u[2] - 156.0 * u[3] + 61.0 * u[4] - 10.0 * u[5]);
  d[1] = c * (10.0 * u[0] - 15.0 * u[1] - 4.0 * u[2] + 14.0 * u[3] - 6.0 * u[4] + u[5]);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = c * (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]);
  }
  d[n - 2] = c * (10.0 * u[n - 1] - 15.0 * u[n - 2] - 4.0 * u[n - 3] + 14.0 * u[n - 4] - 6.0 * u[n - 5] + u[n - 6]);
  d[n - 1] = c * (45.0 * u[n - 1] - 154.0 * u[n - 2] + 214.0 * u[n - 3] - 156.0 * u[n - 4] + 61.0 * u[n - 5] -
                  10.0 * u[n - 6]);
  return d;
}

/// Radial derivatives u_r and u_rr of a mode profile, via tau derivatives:
/// u_r = u_tau / r, u_rr = (u_tautau - u_tau) / r^2.
struct RadialDerivatives {
  std::vector<complex> first;
  std::vector<complex> second;
};

inline RadialDerivatives radial_derivatives(const ModeFunction& m, const RadialGrid& grid) {
  const std::span<const complex> u(m.values);
  auto ut = d_tau(u, grid.step());
  auto utt = d2_tau(u, grid.step());
  RadialDerivatives d{std::vector<complex>(u.size()), std::vector<complex>(u.size())};
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    d.first[i] = ut[i] / r;
    d.second[i] = (utt[i] - ut[i]) / (r * r);
  }
  return d;
}

}  // namespace fredholm
