#pragma once

// Self-check suites behind `verify`. Each check records the measured value,
// its limit and the verdict; nothing here depends on time or thread count,
// so reports are reproducible byte for byte.

#include <string>
#include <vector>

#include "fredholm/bessel.hpp"
#include "fredholm/classify.hpp"
#include "fredholm/green.hpp"
#include "fredholm/io.hpp"
#include "fredholm/verification.hpp"
#include "fredholm/weyl.hpp"

namespace fredholm {

struct Check {
  std::string name;
  double value;
  double limit;
  bool passed;
};

inline Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, std::isfinite(value) && value <= limit};
}

inline Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value, limit, std::isfinite(value) && value >= limit};
}

inline const std::vector<double>& reference_orders() {
  static const std::vector<double> orders{0.0, 1.0, 2.0, 5.0, std::sqrt(2.0), std::sqrt(5.0), std::sqrt(26.0)};
  return orders;
}

inline std::vector<Check> bessel_suite() {
  std::vector<Check> out;
  for (double nu : reference_orders()) {
    const BesselOrder order(nu);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double z = 1e-3 * std::pow(3e4, i / 199.0);
      worst = std::max(worst, wronskian_residual(order, z));
    }
    out.push_back(at_most("wronskian nu=" + format_double(nu), worst, 1e-10));
  }
  for (double nu : {1.0, 2.0, 5.0}) {
    const BesselOrder order(nu);
    const double z = 1e-4;
    out.push_back(at_most("small-z I ratio nu=" + format_double(nu),
                          std::abs(bessel_i(order, z) / asymptotic::i_small(nu, z) - 1.0), 0.01));
    out.push_back(at_most("small-z K ratio nu=" + format_double(nu),
                          std::abs(bessel_k(order, z) / asymptotic::k_small(nu, z) - 1.0), 0.01));
  }
  return out;
}

inline std::vector<Check> green_suite() {
  std::vector<Check> out;
  const RadialGrid grid(1e-4, 40.0, 1024);
  for (auto kind : {OperatorKind::helmholtz, OperatorKind::shifted_helmholtz, OperatorKind::euler}) {
    const WeightPair w = kind == OperatorKind::euler ? WeightPair{-0.5, -0.5} : WeightPair{0.5, 0.0};
    for (int n : {0, 1, 2, 5}) {
      const auto mc = manufactured_case(kind, n, Family::gaussian_power, grid);
      const auto u = solve_mode(kind, n, mc.f, w, grid);
      const SpaceKind space = domain_space(kind);
      const double err = weighted_norm(u - mc.u, grid, space, w) / weighted_norm(mc.u, grid, space, w);
      out.push_back(at_most(std::string(to_string(kind)) + " recovery n=" + std::to_string(n), err, 1e-4));
    }
  }
  double previous = 0.0;
  for (double g : {-0.4, -0.2, -0.1, -0.05}) {
    const double est = bound_constant_estimate(OperatorKind::euler, {-0.5, g}, 20).estimate;
    out.push_back(at_least("euler bound constant gamma=" + format_double(g), est, previous));
    previous = est;
  }
  return out;
}

struct ClassifyExpectation {
  OperatorKind kind;
  WeightPair w;
  int kernel;
  int cokernel;
  bool resonant;
};

inline std::vector<Check> classify_suite() {
  const std::vector<ClassifyExpectation> table{
      {OperatorKind::helmholtz, {0.5, 7.0}, 3, 0, false},
      {OperatorKind::helmholtz, {-2.5, 0.0}, 0, 3, false},
      {OperatorKind::helmholtz, {2.0, 0.0}, 0, 0, true},
      {OperatorKind::euler, {-0.5, -0.5}, 0, 0, false},
      {OperatorKind::euler, {1.0, 1.0}, 3, 3, false},
      {OperatorKind::euler, {std::sqrt(2.0) - 1.0, 0.3}, 0, 0, true},
  };
  std::vector<Check> out;
  for (const auto& t : table) {
    const FredholmReport rep = classify(t.kind, t.w);
    const bool ok = (rep.status == Status::resonant) == t.resonant &&
                    static_cast<int>(rep.kernel_basis.size()) == t.kernel &&
                    static_cast<int>(rep.cokernel_basis.size()) == t.cokernel;
    out.push_back({std::string(to_string(t.kind)) + " sigma=" + format_double(t.w.sigma) +
                       " gamma=" + format_double(t.w.gamma),
                   static_cast<double>(rep.index), static_cast<double>(t.kernel - t.cokernel), ok});
  }
  // Rounding in the tau second difference grows like 1/r^2, so the
  // homogeneous residual is measured away from tiny radii.
  const RadialGrid grid(1e-2, 40.0, 1024);
  for (const auto& t : table) {
    if (t.resonant) continue;
    const FredholmReport rep = classify(t.kind, t.w);
    double worst = 0.0;
    for (const auto& e : rep.kernel_basis) {
      const auto h = ModeFunction::sample(e.mode, grid, [&](double r) { return complex(e.radial(r)); });
      worst = std::max(worst, relative_residual(t.kind, h, nullptr, grid));
    }
    out.push_back(at_most(std::string(to_string(t.kind)) + " kernel residual sigma=" + format_double(t.w.sigma),
                          worst, 1e-6));
  }
  return out;
}

inline std::vector<Check> weyl_suite() {
  std::vector<Check> out;
  const WeightPair resonant{std::sqrt(2.0) - 1.0, 0.3};
  const auto seq = weyl_ratios(OperatorKind::euler, 1, WeylSide::interior, resonant, 8);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    out.push_back(at_most("euler k=1 interior r_" + std::to_string(seq[i + 1].j) + "/r_" + std::to_string(seq[i].j),
                          seq[i + 1].ratio / seq[i].ratio, 0.7));
  }
  const auto ext = weyl_ratios(OperatorKind::euler, 1, WeylSide::exterior, {0.0, std::sqrt(2.0) - 1.0}, 8);
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
    out.push_back(at_most("euler k=1 exterior r_" + std::to_string(ext[i + 1].j) + "/r_" + std::to_string(ext[i].j),
                          ext[i + 1].ratio / ext[i].ratio, 0.7));
  }
  const auto helm = weyl_ratios(OperatorKind::helmholtz, 1, WeylSide::interior, {0.0, 0.0}, 8);
  for (std::size_t i = 0; i + 1 < helm.size(); ++i) {
    out.push_back(at_most("helmholtz k=1 interior r_" + std::to_string(helm[i + 1].j) + "/r_" +
                              std::to_string(helm[i].j),
                          helm[i + 1].ratio / helm[i].ratio, 0.7));
  }
  return out;
}

inline std::vector<Check> lemmas_suite() {
  std::vector<Check> out;
  const RadialGrid grid(1e-4, 40.0, 1024);
  const RadialGrid fine = grid.refined();
  for (WeightPair w : {WeightPair{0.0, 0.0}, WeightPair{-1.5, 2.0}, WeightPair{1.0, 1.0}}) {
    for (auto which : {LemmaRatio::interpolation, LemmaRatio::helmholtz_apriori}) {
      const double a = corpus_max_ratio(which, w, grid);
      const double b = corpus_max_ratio(which, w, fine);
      const std::string name = std::string(which == LemmaRatio::interpolation ? "interpolation" : "apriori") +
                               " sigma=" + format_double(w.sigma) + " gamma=" + format_double(w.gamma);
      out.push_back(at_most(name + " refinement change", std::abs(a - b) / b, 0.05));
    }
  }
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bessel", "green", "classify", "weyl", "lemmas"};
  return names;
}

inline std::vector<Check> run_suite(const std::string& name) {
  if (name == "bessel") return bessel_suite();
  if (name == "green") return green_suite();
  if (name == "classify") return classify_suite();
  if (name == "weyl") return weyl_suite();
  if (name == "lemmas") return lemmas_suite();
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
}

inline Json suite_report(const std::vector<std::string>& names, bool& all_passed) {
  Json suites = Json::array();
  all_passed = true;
  for (const auto& name : names) {
    Json checks = Json::array();
    bool passed = true;
    for (const auto& c : run_suite(name)) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}});
      passed = passed && c.passed;
    }
    suites.push_back({{"suite", name}, {"passed", passed}, {"checks", checks}});
    all_passed = all_passed && passed;
  }
  return suites;
}

}  // namespace fredholm
