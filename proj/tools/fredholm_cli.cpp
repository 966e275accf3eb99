// fredholm: command-line driver.
//
//   fredholm classify --op euler --sigma 1 --gamma 1 [--out report.json]
//   fredholm solve    --op helmholtz --sigma 0.5 --gamma 0 --rhs manufactured:gaussian_power:n=1
//                     [--out report.json] [--profiles out.csv]
//   fredholm kernel   --op helmholtz --sigma 0.5 --gamma 0 [--out report.json] [--profiles prefix]
//   fredholm weyl     --op euler --mode 1 --side interior --sigma 0.41421356 --gamma 0.3 --jmax 8 --out ratios.csv
//   fredholm verify   --suite all --out results.json
//   fredholm bessel   --nu 2 --z 0.5 --z 10 [--out values.json]
//
// Exit codes: 0 ok, 1 usage, 2 resonant weight, 3 solvability violated,
// 4 numerical failure. Errors go to stderr as one JSON object.

#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fredholm/fredholm.hpp"
#include "fredholm/io.hpp"
#include "fredholm/suites.hpp"

namespace {

using namespace fredholm;

enum Exit { kOk = 0, kUsage = 1, kResonant = 2, kUnsolvable = 3, kNumerical = 4 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ResonantWeight: return kResonant;
    case ErrorCode::SolvabilityViolated: return kUnsolvable;
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownFamily:
    case ErrorCode::InvalidGrid: return kUsage;
    default: return kNumerical;
  }
}

struct GridConfig {
  double r_min = 1e-4;
  double r_max = 40.0;
  int n_r = 1024;
  int n_theta = 64;
};

struct Options {
  std::string config;
  std::string op = "helmholtz";
  double sigma = 0.0;
  double gamma = 0.0;
  std::string out;
  std::string profiles;
  std::string rhs;
  int mode = 0;
  std::string side = "interior";
  int jmax = 8;
  std::string suite = "all";
  double nu = 0.0;
  std::vector<double> z;
  std::optional<double> r_min, r_max;
  std::optional<int> n_r, n_theta;
};

GridConfig grid_config(const Options& o) {
  GridConfig g;
  if (!o.config.empty()) {
    const Json j = Json::parse(read_text(o.config));
    g.r_min = j.value("r_min", g.r_min);
    g.r_max = j.value("r_max", g.r_max);
    g.n_r = j.value("n_r", g.n_r);
    g.n_theta = j.value("n_theta", g.n_theta);
  }
  if (o.r_min) g.r_min = *o.r_min;
  if (o.r_max) g.r_max = *o.r_max;
  if (o.n_r) g.n_r = *o.n_r;
  if (o.n_theta) g.n_theta = *o.n_theta;
  return g;
}

int threads_from_env() {
  const char* s = std::getenv("FREDHOLM_THREADS");
  if (!s) return 1;
  const int n = std::atoi(s);
  return n > 0 ? n : 1;
}

Json header(const std::string& command) { return {{"schema", kSchema}, {"command", command}}; }

/// The payload goes to --out (or stdout); run information that may differ
/// between identical runs goes to <out>.meta.json.
void emit(const Options& o, const Json& payload, const std::string& command) {
  if (o.out.empty()) {
    std::cout << dump(payload);
    return;
  }
  write_text(o.out, dump(payload));
  const Json meta = {{"schema", kSchema},
                     {"command", command},
                     {"threads", threads_from_env()},
                     {"unix_time", static_cast<long long>(std::time(nullptr))}};
  write_text(o.out + ".meta.json", dump(meta));
}

/// The one-line summary; kept off stdout when stdout carries the payload.
std::ostream& human(const Options& o) { return o.out.empty() ? std::cerr : std::cout; }

// ---------------------------------------------------------------------------

int cmd_classify(const Options& o) {
  const FredholmReport rep = classify(parse_operator(o.op), {o.sigma, o.gamma});
  Json j = header("classify");
  j["report"] = to_json(rep);
  emit(o, j, "classify");
  human(o) << "classify " << o.op << " sigma=" << o.sigma << " gamma=" << o.gamma << ": " << to_string(rep.status)
            << ", kernel " << rep.kernel_basis.size() << ", cokernel " << rep.cokernel_basis.size() << ", index "
            << rep.index << "\n";
  return rep.status == Status::resonant ? kResonant : kOk;
}

struct Rhs {
  Field2D f;
  std::optional<Field2D> exact;
};

/// "manufactured:<family>[:n=<mode>,a=...,c=...]" or "csv:<path>".
Rhs parse_rhs(const std::string& spec, OperatorKind kind, const RadialGrid& grid, int n_theta) {
  const auto colon = spec.find(':');
  const std::string scheme = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (scheme == "csv") return {parse_profiles_csv(read_text(rest), grid, n_theta), std::nullopt};
  if (scheme != "manufactured") throw Error(ErrorCode::InvalidArgument, "rhs must be manufactured:... or csv:...");
  const auto colon2 = rest.find(':');
  const Family family = parse_family(rest.substr(0, colon2));
  FamilyParams params;
  int n = 0;
  if (colon2 != std::string::npos) {
    std::stringstream ss(rest.substr(colon2 + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bad rhs parameter '" + item + "'");
      const std::string key = item.substr(0, eq);
      double value = 0.0;
      try {
        value = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad rhs parameter '" + item + "'");
      }
      if (key == "n") {
        n = static_cast<int>(value);
      } else {
        params[key] = value;
      }
    }
  }
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "mode n must be >= 0");
  const ManufacturedCase mc = manufactured_case(kind, n, family, grid, params);
  // Real field profile(r) cos(n theta).
  Field2D f(grid, n_theta);
  Field2D u(grid, n_theta);
  const complex half = n == 0 ? 1.0 : 0.5;
  for (int sign : {1, -1}) {
    if (n == 0 && sign < 0) break;
    ModeFunction fm = mc.f, um = mc.u;
    fm.n = um.n = sign * n;
    fm *= half;
    um *= half;
    f.set_mode(std::move(fm));
    u.set_mode(std::move(um));
  }
  return {std::move(f), std::move(u)};
}

int cmd_solve(const Options& o) {
  if (o.rhs.empty()) throw Error(ErrorCode::InvalidArgument, "--rhs is required");
  const GridConfig gc = grid_config(o);
  const RadialGrid grid(gc.r_min, gc.r_max, gc.n_r);
  const OperatorKind kind = parse_operator(o.op);
  const WeightPair w{o.sigma, o.gamma};
  const Rhs rhs = parse_rhs(o.rhs, kind, grid, gc.n_theta);
  SolveResult res = solve_field(kind, rhs.f, w, threads_from_env());
  Json j = header("solve");
  j["grid"] = to_json(grid, gc.n_theta);
  j["rhs"] = o.rhs;
  j["result"] = to_json(res);
  if (rhs.exact) {
    const SpaceKind space = domain_space(kind);
    // The solver returns the representative orthogonal to the kernel.
    const Field2D exact = project_out_kernel(res.regime, *rhs.exact);
    const double err = weighted_norm(res.solution - exact, space, w) / weighted_norm(exact, space, w);
    j["result"]["recovery_error"] = err;
  }
  emit(o, j, "solve");
  if (!o.profiles.empty()) write_text(o.profiles, profiles_csv(res.solution));
  human(o) << "solve " << o.op << " sigma=" << o.sigma << " gamma=" << o.gamma
            << ": relative residual " << res.relative_residual << ", " << res.solvability_defects.size()
            << " cokernel pairing(s)" << (res.solvable ? "" : ", SOLVABILITY VIOLATED") << "\n";
  for (const auto& wmsg : res.warnings) std::cerr << "warning: " << wmsg << "\n";
  return res.solvable ? kOk : kUnsolvable;
}

int cmd_kernel(const Options& o) {
  const GridConfig gc = grid_config(o);
  const RadialGrid grid(gc.r_min, gc.r_max, gc.n_r);
  const OperatorKind kind = parse_operator(o.op);
  const FredholmReport rep = classify(kind, {o.sigma, o.gamma});
  require_fredholm(rep);
  Json j = header("kernel");
  j["grid"] = to_json(grid, gc.n_theta);
  j["report"] = to_json(rep);
  const auto kernel = kernel_basis_field(rep, grid, gc.n_theta);
  const auto cokernel = cokernel_basis_field(rep, grid, gc.n_theta);
  Json residuals = Json::array();
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const auto& e = rep.kernel_basis[i];
    residuals.push_back(relative_residual(kind, kernel[i].mode(e.mode), nullptr, grid));
    if (!o.profiles.empty()) write_text(o.profiles + ".kernel." + std::to_string(i) + ".csv", profiles_csv(kernel[i]));
  }
  for (std::size_t i = 0; i < cokernel.size(); ++i) {
    if (!o.profiles.empty()) {
      write_text(o.profiles + ".cokernel." + std::to_string(i) + ".csv", profiles_csv(cokernel[i]));
    }
  }
  j["kernel_residuals"] = residuals;
  emit(o, j, "kernel");
  human(o) << "kernel " << o.op << ": " << kernel.size() << " kernel and " << cokernel.size()
            << " cokernel element(s) sampled\n";
  return kOk;
}

int cmd_weyl(const Options& o) {
  const OperatorKind kind = parse_operator(o.op);
  const WeylSide side = parse_side(o.side);
  if (o.jmax < 1) throw Error(ErrorCode::InvalidArgument, "--jmax must be >= 1");
  const auto samples = weyl_ratios(kind, o.mode, side, {o.sigma, o.gamma}, o.jmax);
  const std::string csv = weyl_csv(samples);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out, csv);
  }
  human(o) << "weyl " << o.op << " mode " << o.mode << " " << o.side << ": r_" << samples.back().j << " = "
            << samples.back().ratio << "\n";
  return kOk;
}

int cmd_verify(const Options& o) {
  std::vector<std::string> names;
  if (o.suite == "all") {
    names = suite_names();
  } else {
    names = {o.suite};
  }
  bool passed = false;
  Json j = header("verify");
  j["suites"] = suite_report(names, passed);
  j["passed"] = passed;
  emit(o, j, "verify");
  human(o) << "verify " << o.suite << ": " << (passed ? "all checks passed" : "FAILED") << "\n";
  return passed ? kOk : kNumerical;
}

int cmd_bessel(const Options& o) {
  const BesselOrder order(o.nu);
  Json rows = Json::array();
  for (double z : o.z) {
    rows.push_back({{"z", z},
                    {"I", bessel_i(order, z)},
                    {"K", bessel_k(order, z)},
                    {"I_scaled", bessel_i_scaled(order, z)},
                    {"K_scaled", bessel_k_scaled(order, z)},
                    {"I_prime", bessel_i_prime(order, z)},
                    {"K_prime", bessel_k_prime(order, z)},
                    {"wronskian_residual", wronskian_residual(order, z)}});
  }
  Json j = header("bessel");
  j["nu"] = o.nu;
  j["values"] = rows;
  emit(o, j, "bessel");
  return kOk;
}

void report_error(const std::string& code, const std::string& message) {
  std::cerr << Json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fredholm analysis of Helmholtz and Euler operators in weighted spaces"};
  app.require_subcommand(1);
  Options o;

  auto weights = [&](CLI::App* sub) {
    sub->add_option("--op", o.op, "helmholtz | shifted | euler")->required();
    sub->add_option("--sigma", o.sigma, "core weight exponent")->required();
    sub->add_option("--gamma", o.gamma, "far-field weight exponent")->required();
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON file with r_min, r_max, n_r, n_theta");
    sub->add_option("--r-min", o.r_min);
    sub->add_option("--r-max", o.r_max);
    sub->add_option("--n-r", o.n_r);
    sub->add_option("--n-theta", o.n_theta);
  };

  auto* classify_cmd = app.add_subcommand("classify", "Fredholm classification of a weight pair");
  weights(classify_cmd);
  classify_cmd->add_option("--out", o.out, "report JSON");
  classify_cmd->add_option("--config", o.config, "accepted for uniformity; unused");

  auto* solve_cmd = app.add_subcommand("solve", "solve L u = f mode by mode");
  weights(solve_cmd);
  grid(solve_cmd);
  solve_cmd->add_option("--rhs", o.rhs, "manufactured:<family>[:n=..,a=..] | csv:<path>")->required();
  solve_cmd->add_option("--out", o.out, "report JSON");
  solve_cmd->add_option("--profiles", o.profiles, "solution profiles CSV");

  auto* kernel_cmd = app.add_subcommand("kernel", "sample kernel and cokernel bases");
  weights(kernel_cmd);
  grid(kernel_cmd);
  kernel_cmd->add_option("--out", o.out, "report JSON");
  kernel_cmd->add_option("--profiles", o.profiles, "prefix for per-element CSV profiles");

  auto* weyl_cmd = app.add_subcommand("weyl", "near-kernel sequence ratios");
  weights(weyl_cmd);
  weyl_cmd->add_option("--mode", o.mode, "angular mode k")->required();
  weyl_cmd->add_option("--side", o.side, "interior | exterior");
  weyl_cmd->add_option("--jmax", o.jmax, "largest scale j (powers of two from 1)");
  weyl_cmd->add_option("--out", o.out, "ratios CSV");

  auto* verify_cmd = app.add_subcommand("verify", "run self-check suites");
  verify_cmd->add_option("--suite", o.suite, "bessel | green | classify | weyl | lemmas | all");
  verify_cmd->add_option("--out", o.out, "results JSON");

  auto* bessel_cmd = app.add_subcommand("bessel", "evaluate I_nu and K_nu");
  bessel_cmd->add_option("--nu", o.nu, "order in [0, 64]")->required();
  bessel_cmd->add_option("--z", o.z, "argument(s) > 0")->required();
  bessel_cmd->add_option("--out", o.out, "values JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(o);
    if (*solve_cmd) return cmd_solve(o);
    if (*kernel_cmd) return cmd_kernel(o);
    if (*weyl_cmd) return cmd_weyl(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*bessel_cmd) return cmd_bessel(o);
  } catch (const Error& e) {
    report_error(std::string(to_string(e.code())), e.what());
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    report_error("InvalidConfig", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    report_error("Internal", e.what());
    return kNumerical;
  }
  return kUsage;
}
