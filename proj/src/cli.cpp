#include "polarsl/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "polarsl/csv.hpp"
#include "polarsl/error.hpp"
#include "polarsl/laplacian.hpp"

namespace fs = std::filesystem;

namespace polarsl::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = first + t.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + t + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected an integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + t + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, item));
  return out;
}

using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections read_sections(std::istream& in) {
  Sections sections;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value' inside a section");
    }
    const std::string key = trim(line.substr(0, eq));
    if (sections[section].count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key " + section + "." + key);
    }
    sections[section][key] = trim(line.substr(eq + 1));
  }
  return sections;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"measure", {"kind", "dim", "normalize", "profile"}},
      {"problem", {"r0", "b", "f"}},
      {"solver", {"method", "L", "n", "bc", "d", "slope", "tol", "newton_tol"}},
      {"reduce", {"r_min", "r_max", "points"}},
      {"verify", {"L_list", "linear_nodes", "endpoint_samples", "divergence_threshold",
                  "small_ratio_threshold", "large_ratio_threshold"}},
  };
  return keys;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

std::vector<std::vector<double>> read_columns(const std::string& path, std::size_t width) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file '" + path + "'");
  std::vector<std::vector<double>> cols(width);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    std::vector<double> row;
    double v;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number");
    if (row.empty()) continue;
    if (row.size() != width) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) + " columns");
    }
    for (std::size_t i = 0; i < width; ++i) cols[i].push_back(row[i]);
  }
  return cols;
}

void require_params(const FunctionSpec& spec, std::size_t count, const char* what) {
  if (spec.params.size() != count) {
    throw ConfigError(std::string(what) + " '" + spec.name + "' takes " + std::to_string(count) + " argument(s)");
  }
}

ScalarMap build_coefficient(const FunctionSpec& spec) {
  if (spec.name == "constant") {
    require_params(spec, 1, "b");
    if (!(spec.params[0] > 0.0)) throw ConfigError("b: constant must be positive");
    return constant_coefficient(spec.params[0]);
  }
  if (spec.name == "gaussian") {
    require_params(spec, 1, "b");
    if (!(spec.params[0] > 0.0)) throw ConfigError("b: gaussian sigma must be positive");
    return gaussian_coefficient(spec.params[0]);
  }
  if (spec.name == "power") {
    require_params(spec, 1, "b");
    return power_coefficient(spec.params[0]);
  }
  if (spec.name == "table") {
    auto cols = read_columns(spec.path, 2);
    try {
      return tabulated_coefficient(std::move(cols[0]), std::move(cols[1]));
    } catch (const FormatError& e) {
      throw ConfigError(spec.path + ": " + e.what());
    }
  }
  throw ConfigError("b: unknown coefficient '" + spec.name + "' (constant, gaussian, power, table)");
}

Nonlinearity build_nonlinearity(const FunctionSpec& spec) {
  if (spec.name == "power") {
    require_params(spec, 1, "f");
    if (!(spec.params[0] > 0.0)) throw ConfigError("f: power exponent must be positive");
    return power_nonlinearity(spec.params[0]);
  }
  if (spec.name == "logpower") {
    require_params(spec, 1, "f");
    if (!(spec.params[0] > 0.0)) throw ConfigError("f: logpower exponent must be positive");
    return log_power_nonlinearity(spec.params[0]);
  }
  if (spec.name == "table") {
    auto cols = read_columns(spec.path, 3);
    try {
      return tabulated_nonlinearity(std::move(cols[0]), std::move(cols[1]), std::move(cols[2]));
    } catch (const FormatError& e) {
      throw ConfigError(spec.path + ": " + e.what());
    }
  }
  throw ConfigError("f: unknown nonlinearity '" + spec.name + "' (power, logpower, table)");
}

void validate(const RunConfig& c) {
  if (c.measure_kind == "profile") {
    if (c.profile_path.empty()) throw ConfigError("measure.profile is required when kind = profile");
    if (!fs::exists(c.profile_path)) throw ConfigError("profile file '" + c.profile_path + "' does not exist");
  } else {
    try {
      parse_measure_kind(c.measure_kind);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("measure.kind: ") + e.what());
    }
    if (c.dim < 2 || c.dim > 64) throw ConfigError("measure.dim must lie in [2, 64]");
  }
  for (const FunctionSpec* spec : {&c.b, &c.f}) {
    if (spec->name == "table" && !fs::exists(spec->path)) {
      throw ConfigError("table file '" + spec->path + "' does not exist");
    }
  }
  if (!(c.L > 0.0)) throw ConfigError("solver.L must be positive");
  if (c.n < 16 || c.n > 10'000'000) throw ConfigError("solver.n must lie in [16, 1e7]");
  if (!(c.bc >= 0.0)) throw ConfigError("solver.bc must be nonnegative");
  if (!(c.d > 0.0)) throw ConfigError("solver.d must be positive");
  if (!(c.cv_tol > 1e-14 && c.cv_tol < 1e-2)) throw ConfigError("solver.tol must lie in (1e-14, 1e-2)");
  if (!(c.newton_tol > 0.0)) throw ConfigError("solver.newton_tol must be positive");
  static const std::set<std::string> methods = {"green", "shooting", "shooting_bvp", "collocation"};
  if (!methods.count(c.method)) throw ConfigError("solver.method: unknown method '" + c.method + "'");
  if (!(c.reduce_r_min < c.reduce_r_max)) throw ConfigError("reduce.r_min must be below reduce.r_max");
  if (c.reduce_points < 2) throw ConfigError("reduce.points must be >= 2");
  const auto& Ls = c.verify.L_list;
  if (Ls.size() < 3) throw ConfigError("verify.L_list needs at least 3 values");
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    if (!(Ls[i] > 0.0) || (i && !(Ls[i] > Ls[i - 1]))) {
      throw ConfigError("verify.L_list must be positive and increasing");
    }
  }
  if (c.verify.linear_nodes < 16) throw ConfigError("verify.linear_nodes must be >= 16");
}

}  // namespace

FunctionSpec parse_function_spec(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw ConfigError("expected name(args), got '" + t + "'");
  }
  FunctionSpec spec;
  spec.name = trim(t.substr(0, open));
  const std::string args = trim(t.substr(open + 1, t.size() - open - 2));
  if (spec.name == "table") {
    if (args.empty()) throw ConfigError("table() needs a file path");
    spec.path = args;
  } else if (!args.empty()) {
    spec.params = to_list(spec.name, args);
  }
  return spec;
}

RunConfig parse_config(std::istream& in, const std::string& base_dir) {
  const Sections sections = read_sections(in);
  const auto& known = known_keys();
  for (const auto& [section, entries] : sections) {
    auto it = known.find(section);
    if (it == known.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : entries) {
      if (!it->second.count(key)) throw ConfigError("unknown config key " + section + "." + key);
    }
  }
  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    auto s = sections.find(section);
    if (s == sections.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  };

  RunConfig c;
  if (auto v = get("measure", "kind")) c.measure_kind = *v;
  if (auto v = get("measure", "dim")) c.dim = to_int("measure.dim", *v);
  if (auto v = get("measure", "normalize")) c.normalize = to_bool("measure.normalize", *v);
  if (auto v = get("measure", "profile")) c.profile_path = resolve(base_dir, *v);
  if (auto v = get("problem", "r0")) c.r0 = to_double("problem.r0", *v);
  if (auto v = get("problem", "b")) c.b = parse_function_spec(*v);
  if (auto v = get("problem", "f")) c.f = parse_function_spec(*v);
  c.b.path = resolve(base_dir, c.b.path);
  c.f.path = resolve(base_dir, c.f.path);
  if (auto v = get("solver", "method")) c.method = *v;
  if (auto v = get("solver", "L")) c.L = to_double("solver.L", *v);
  if (auto v = get("solver", "n")) c.n = to_int("solver.n", *v);
  if (auto v = get("solver", "bc")) c.bc = to_double("solver.bc", *v);
  if (auto v = get("solver", "d")) c.d = to_double("solver.d", *v);
  if (auto v = get("solver", "slope")) c.slope = to_double("solver.slope", *v);
  if (auto v = get("solver", "tol")) c.cv_tol = to_double("solver.tol", *v);
  if (auto v = get("solver", "newton_tol")) c.newton_tol = to_double("solver.newton_tol", *v);
  if (auto v = get("reduce", "r_min")) c.reduce_r_min = to_double("reduce.r_min", *v);
  if (auto v = get("reduce", "r_max")) c.reduce_r_max = to_double("reduce.r_max", *v);
  if (auto v = get("reduce", "points")) c.reduce_points = to_int("reduce.points", *v);
  if (auto v = get("verify", "L_list")) c.verify.L_list = to_list("verify.L_list", *v);
  if (auto v = get("verify", "linear_nodes")) c.verify.linear_nodes = to_int("verify.linear_nodes", *v);
  if (auto v = get("verify", "endpoint_samples")) {
    c.verify.endpoint_samples = to_int("verify.endpoint_samples", *v);
  }
  if (auto v = get("verify", "divergence_threshold")) {
    c.verify.divergence_threshold = to_double("verify.divergence_threshold", *v);
  }
  if (auto v = get("verify", "small_ratio_threshold")) {
    c.verify.small_ratio_threshold = to_double("verify.small_ratio_threshold", *v);
  }
  if (auto v = get("verify", "large_ratio_threshold")) {
    c.verify.large_ratio_threshold = to_double("verify.large_ratio_threshold", *v);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const std::string dir = fs::path(path).parent_path().string();
  return parse_config(in, dir.empty() ? "." : dir);
}

Pipeline build_pipeline(const RunConfig& cfg) {
  try {
    GeodesicMeasure measure =
        cfg.measure_kind == "profile"
            ? measure_from_profile(reparametrize_arc_length(read_profile_file(cfg.profile_path)))
            : builtin_measure(parse_measure_kind(cfg.measure_kind), cfg.dim, cfg.normalize);
    ChangeOfVariables cv = build_change_of_variables(measure, cfg.r0, cfg.cv_tol);
    ScalarMap b = build_coefficient(cfg.b);
    Nonlinearity f = build_nonlinearity(cfg.f);
    ReducedProblem rp = assemble_reduced(cv, b, f);
    return Pipeline{std::move(measure), cv, std::move(b), std::move(f), std::move(rp),
                    TruncatedDomain{cfg.L, cfg.n, cfg.bc}};
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

std::string config_help() {
  return R"(Configuration file: sections with `key = value` lines; `#` or `;` start comments.
Relative paths are resolved against the config file's directory.

[measure]
  kind        euclidean | sphere | hyperbolic | flat_cylinder | profile   (euclidean)
  dim         manifold dimension n >= 2                                    (2)
  normalize   multiply phi by |S^{n-1}|: true | false                      (false)
  profile     profile curve file, one `t x z` triple per line, `#` comments,
              t strictly increasing (required for kind = profile)
[problem]
  r0          base point of s = J(r), inside the measure domain            (1.0)
  b           constant(c) | gaussian(sigma) | power(p) | table(file: `r b` rows)   (constant(1))
  f           power(p) | logpower(p) | table(file: `z f df` rows)          (power(0.5))
[solver]
  method      green | shooting | shooting_bvp | collocation                (collocation)
  L           half-width of the truncated s-domain [-L, L]                 (4)
  n           interior grid nodes, >= 16                                   (401)
  bc          Dirichlet value at s = +-L, >= 0                             (0.1)
  d, slope    shooting initial data z(0) = d > 0, z'(0) = slope            (1, 0)
  tol         change-of-variables quadrature tolerance in (1e-14, 1e-2)    (1e-10)
  newton_tol  collocation residual tolerance                               (1e-10)
[reduce]
  r_min, r_max, points   r-grid of the `reduce` table                     (0.5, 2, 16)
[verify]
  L_list                 comma-separated truncation lengths, >= 3 values  (4, 8, 16)
  linear_nodes           interior nodes of each linear solve              (401)
  endpoint_samples       geometric steps toward each end of the domain    (60)
  divergence_threshold   |J| needed to call an end divergent              (25)
  small_ratio_threshold  f(q)/q target as q -> 0+                         (1e3)
  large_ratio_threshold  f(q)/q target as q -> inf                        (1e-3)

Outputs (written to --output DIR):
  reduce    reduce.csv            r,s,phi,q
  solve     solution.csv          s,r,z,dz_ds
            solution_r.csv        r,u,du_dr
  verify    report.txt            key: value blocks
            evidence_h1.csv, evidence_h2.csv, evidence_h3.csv
  residual  residual.csv          r,u,residual,excluded_flag

Exit codes: 0 ok, 2 configuration error, 3 numeric or convergence failure,
4 hypotheses fail (with --require-hypotheses).
)";
}

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
  return out;
}

int cmd_measures(std::ostream& out) {
  out << "kind           domain      phi(r)\n"
      << "euclidean      (0, inf)    k r^(n-1)\n"
      << "sphere         (0, pi)     k sin(r)^(n-1)\n"
      << "hyperbolic     (0, inf)    k sinh(r)^(n-1)\n"
      << "flat_cylinder  (-inf, inf) k\n"
      << "profile        (t0, t1)    x(t) of an arc-length profile curve\n"
      << "k = 1, or |S^(n-1)| with normalize = true\n";
  return kOk;
}

int cmd_reduce(const RunConfig& cfg, const Pipeline& p, const fs::path& dir, std::ostream& out) {
  auto file = open_output(dir, "reduce.csv");
  CsvWriter csv(file, {"r", "s", "phi", "q"});
  const int n = cfg.reduce_points;
  for (int i = 0; i < n; ++i) {
    const double r = cfg.reduce_r_min + (cfg.reduce_r_max - cfg.reduce_r_min) * i / (n - 1);
    const double s = p.cv.forward(r);
    const double phi = p.measure.eval(r);
    csv.row({r, s, phi, p.b(r) * phi * phi});
  }
  out << "wrote " << (dir / "reduce.csv").string() << '\n';
  return kOk;
}

HypothesisReport write_verification(const RunConfig& cfg, const Pipeline& p, const fs::path& dir) {
  const HypothesisReport report = verify_all(p.rp, cfg.verify);
  auto file = open_output(dir, "report.txt");
  write_report(file, report);
  const std::pair<const char*, const CheckResult*> checks[] = {
      {"evidence_h1.csv", &report.h1}, {"evidence_h2.csv", &report.h2}, {"evidence_h3.csv", &report.h3}};
  for (const auto& [name, check] : checks) {
    auto ev = open_output(dir, name);
    write_evidence_csv(ev, *check);
  }
  return report;
}

int cmd_verify(const RunConfig& cfg, const Pipeline& p, const fs::path& dir, bool require,
               std::ostream& out) {
  const HypothesisReport report = write_verification(cfg, p, dir);
  out << "h1: " << to_string(report.h1.verdict) << "\nh2: " << to_string(report.h2.verdict)
      << "\nh3: " << to_string(report.h3.verdict) << "\noverall: " << to_string(report.overall)
      << '\n';
  if (require && report.overall == Verdict::fails) return kHypothesesFail;
  return kOk;
}

int cmd_solve(const RunConfig& cfg, const Pipeline& p, const fs::path& dir, bool require,
              std::ostream& out, std::ostream& err) {
  if (require) {
    // f alone decides hypothesis (iii); reject such configurations up front.
    const CheckResult h3 = check_nonlinearity_limits(p.f, cfg.verify);
    if (h3.verdict == Verdict::fails) {
      err << "error: f = " << p.f.label
          << " violates the limits of f(q)/q required by --require-hypotheses\n";
      return kConfigError;
    }
    const HypothesisReport report = verify_all(p.rp, cfg.verify);
    if (report.overall == Verdict::fails) {
      err << "error: hypotheses fail (h1 " << to_string(report.h1.verdict) << ", h2 "
          << to_string(report.h2.verdict) << ", h3 " << to_string(report.h3.verdict) << ")\n";
      return kHypothesesFail;
    }
  }

  SolutionProfile z;
  if (cfg.method == "green") {
    z = solve_linear(p.rp.q, p.domain);
  } else if (cfg.method == "shooting") {
    z = solve_shooting(p.rp, cfg.d, cfg.slope, p.domain);
  } else if (cfg.method == "shooting_bvp") {
    z = solve_shooting_bvp(p.rp, p.domain, cfg.d, cfg.slope);
  } else {
    CollocationOptions opt;
    opt.tol = cfg.newton_tol;
    z = solve_collocation(p.rp, p.domain, std::nullopt, opt);
  }
  {
    auto file = open_output(dir, "solution.csv");
    write_solution_csv(file, z, &p.cv);
  }
  {
    auto file = open_output(dir, "solution_r.csv");
    write_lifted_csv(file, lift(p.cv, z));
  }
  out << "method: " << cfg.method << "\nconverged: " << (z.converged ? "yes" : "no")
      << "\niterations: " << z.iterations << "\nresidual: " << format_double(z.residual) << '\n';
  if (!z.converged) {
    err << "error: solver did not converge: " << z.message << '\n';
    return kNumericError;
  }
  return kOk;
}

int cmd_residual(const Pipeline& p, const std::string& solution_path, const fs::path& dir,
                 std::ostream& out) {
  std::ifstream in(solution_path);
  if (!in) throw ConfigError("cannot open solution file '" + solution_path + "'");
  SolutionProfile z;
  try {
    z = read_solution_csv(in);
  } catch (const FormatError& e) {
    throw ConfigError(solution_path + ": " + e.what());
  }
  const SolutionProfile u = lift(p.cv, z);
  RadialFunction rf{u.grid, u.values, u.derivs};
  const ResidualReport report = divergence_residual(p.measure, p.b, p.f, rf);
  auto file = open_output(dir, "residual.csv");
  write_residual_csv(file, report);
  out << "scaled_sup_norm_interior_90: " << format_double(report.scaled_sup_norm(0.9)) << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial reduction and solution of semi-linear elliptic problems"};
  app.require_subcommand(1);
  app.footer(config_help());

  std::string config_path;
  std::string output_dir = ".";
  std::string solution_path;
  bool require = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "configuration file")->required();
    sub->add_option("-o,--output", output_dir, "output directory");
  };
  auto* reduce = app.add_subcommand("reduce", "tabulate r, s = J(r), phi(r), q");
  add_common(reduce);
  auto* solve = app.add_subcommand("solve", "solve the reduced problem and lift the solution");
  add_common(solve);
  solve->add_flag("--require-hypotheses", require, "refuse to solve when the hypotheses fail");
  auto* verify = app.add_subcommand("verify", "check the existence hypotheses");
  add_common(verify);
  verify->add_flag("--require-hypotheses", require, "exit 4 when the hypotheses fail");
  auto* residual = app.add_subcommand("residual", "lift a stored s-solution and evaluate the PDE residual");
  add_common(residual);
  residual->add_option("-s,--solution", solution_path, "solution CSV (s,r,z,dz_ds)")->required();
  app.add_subcommand("measures", "list the built-in measures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  if (app.got_subcommand("measures")) return cmd_measures(out);

  RunConfig cfg;
  std::optional<Pipeline> pipeline;
  try {
    cfg = load_config(config_path);
    pipeline.emplace(build_pipeline(cfg));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const fs::path dir(output_dir);
  try {
    if (app.got_subcommand("reduce")) return cmd_reduce(cfg, *pipeline, dir, out);
    if (app.got_subcommand("solve")) return cmd_solve(cfg, *pipeline, dir, require, out, err);
    if (app.got_subcommand("verify")) return cmd_verify(cfg, *pipeline, dir, require, out);
    if (app.got_subcommand("residual")) return cmd_residual(*pipeline, solution_path, dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  }
  return kConfigError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace polarsl::cli
