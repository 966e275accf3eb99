#pragma once

// JSON reports and CSV mode profiles. Numbers are written with
// std::to_chars, so output does not depend on the locale and is
// byte-identical for identical input.

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fredholm/classify.hpp"
#include "fredholm/field.hpp"
#include "fredholm/green.hpp"
#include "fredholm/weyl.hpp"

namespace fredholm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "fredholm-disk/1";

inline Json to_json(const RadialForm& f) {
  return {{"type", f.type == RadialForm::Type::bessel_k ? "bessel_K" : "power"}, {"parameter", f.parameter}};
}

inline Json to_json(const BasisElement& e) {
  return {{"mode", e.mode},
          {"parity", std::string(to_string(e.parity))},
          {"radial_form", to_json(e.radial)},
          {"admissible", e.admissible}};
}

inline Json to_json(const FredholmReport& rep) {
  Json kernel = Json::array();
  Json cokernel = Json::array();
  for (const auto& e : rep.kernel_basis) kernel.push_back(to_json(e));
  for (const auto& e : rep.cokernel_basis) cokernel.push_back(to_json(e));
  return {{"operator", std::string(to_string(rep.kind))},
          {"sigma", rep.weights.sigma},
          {"gamma", rep.weights.gamma},
          {"status", std::string(to_string(rep.status))},
          {"index", rep.index},
          {"kernel_dim", rep.kernel_basis.size()},
          {"cokernel_dim", rep.cokernel_basis.size()},
          {"kernel", kernel},
          {"cokernel", cokernel},
          {"resonant_modes", rep.resonant_modes},
          {"resonance_distance", rep.resonance_distance}};
}

inline Json to_json(const complex& c) { return Json::array({c.real(), c.imag()}); }

inline Json to_json(const SolveResult& s) {
  Json defects = Json::array();
  for (const auto& d : s.solvability_defects) {
    defects.push_back({{"element", to_json(d.element)},
                       {"id", d.element.label()},
                       {"pairing", to_json(d.pairing)},
                       {"relative", d.relative}});
  }
  Json norms = Json::object();
  for (const auto& [k, v] : s.norms) norms[k] = v;
  return {{"residual_norm", s.residual_norm},
          {"relative_residual", s.relative_residual},
          {"solvable", s.solvable},
          {"solvability_defects", defects},
          {"norms", norms},
          {"warnings", s.warnings},
          {"regime", to_json(s.regime)}};
}

inline Json to_json(const RadialGrid& g, int n_theta) {
  return {{"r_min", g.r_min()}, {"r_max", g.r_max()}, {"n_r", g.size()}, {"n_theta", n_theta}};
}

/// Pretty-printed with a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// CSV profiles: header "mode,r,re,im", one row per (mode, node).

inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string profiles_csv(const Field2D& u, bool skip_zero_modes = true) {
  std::string out = "mode,r,re,im\n";
  for (const auto& m : u.modes()) {
    bool zero = true;
    for (const auto& v : m.values) zero = zero && v == 0.0;
    if (zero && skip_zero_modes) continue;
    for (int i = 0; i < u.grid().size(); ++i) {
      out += std::to_string(m.n) + ',' + format_double(u.grid()[i]) + ',' + format_double(m.values[i].real()) + ',' +
             format_double(m.values[i].imag()) + '\n';
    }
  }
  return out;
}

namespace detail {

inline double parse_double(std::string_view s) {
  double v = 0.0;
  while (!s.empty() && (s.front() == ' ' || s.front() == '+')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(s) + "' in CSV");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

/// Reads mode profiles written by profiles_csv. Radii must coincide with the
/// grid nodes (relative 1e-9); missing modes are zero.
inline Field2D parse_profiles_csv(const std::string& text, const RadialGrid& grid, int n_theta) {
  Field2D f(grid, n_theta);
  std::map<int, int> next_node;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      if (line.rfind("mode", 0) == 0) continue;
    }
    const auto cols = detail::split(line, ',');
    if (cols.size() != 4) {
      throw Error(ErrorCode::InvalidArgument, "CSV line " + std::to_string(line_no) + ": expected 4 columns");
    }
    const int mode = static_cast<int>(detail::parse_double(cols[0]));
    const double r = detail::parse_double(cols[1]);
    int& i = next_node[mode];
    if (i >= grid.size() || std::abs(r - grid[i]) > 1e-9 * grid[i]) {
      throw Error(ErrorCode::ShapeMismatch,
                  "CSV line " + std::to_string(line_no) + ": radius does not match grid node " + std::to_string(i));
    }
    f.mode(mode).values[i] = complex(detail::parse_double(cols[2]), detail::parse_double(cols[3]));
    ++i;
  }
  for (const auto& [mode, count] : next_node) {
    if (count != grid.size()) {
      throw Error(ErrorCode::ShapeMismatch, "CSV mode " + std::to_string(mode) + " does not cover the grid");
    }
  }
  return f;
}

inline std::string weyl_csv(const std::vector<WeylSample>& samples) {
  std::string out = "j,ratio\n";
  for (const auto& s : samples) out += std::to_string(s.j) + ',' + format_double(s.ratio) + '\n';
  return out;
}

}  // namespace fredholm
