// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <sys/wait.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polarsl/csv.hpp"
#include "polarsl/hypotheses.hpp"
#include "polarsl/laplacian.hpp"
#include "polarsl/solve.hpp"

namespace fs = std::filesystem;
using namespace polarsl;
using std::numbers::pi;

namespace {

// Tolerances, one per criterion.
constexpr double kTolLaplacian = 1e-10;
constexpr double kTolJ = 1e-8;
constexpr double kTolRoundTrip = 1e-8;
constexpr double kTolReduced = 1e-7;
constexpr double kTolGreenClosed = 1e-9;
constexpr double kTolGreenFd = 1e-6;
constexpr double kTolCrossMethod = 1e-5;
constexpr double kTolManufactured = 1e-7;
constexpr double kTolResidual = 1e-5;
constexpr double kMinDecay = 3.5;
constexpr double kTolIdentity = 1e-12;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome criterion_1() {
  Outcome o;
  const SmoothRadial r2{[](double r) { return r * r; }, [](double r) { return 2 * r; },
                        [](double) { return 2.0; }};
  double worst = 0.0;
  for (int n : {2, 3, 5}) {
    const auto m = builtin_measure(MeasureKind::euclidean, n);
    for (int i = 1; i <= 50; ++i) {
      const double r = 0.05 * i * i / 10.0 + 0.01;
      worst = std::max(worst, std::abs(radial_apply(m, r2, r) - 2.0 * n));
    }
  }
  const auto s2 = builtin_measure(MeasureKind::sphere, 2);
  const SmoothRadial c{[](double r) { return std::cos(r); }, [](double r) { return -std::sin(r); },
                       [](double r) { return -std::cos(r); }};
  for (int i = 1; i < 50; ++i) {
    const double r = pi * i / 50.0;
    worst = std::max(worst, std::abs(radial_apply(s2, c, r) + 2 * std::cos(r)));
  }
  o.detail << "max error " << fmt(worst) << " (tol " << fmt(kTolLaplacian) << ")";
  o.require(worst <= kTolLaplacian, "identity error above tolerance");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto plane = build_change_of_variables(builtin_measure(MeasureKind::euclidean, 2), 1.0);
  const auto sphere = build_change_of_variables(builtin_measure(MeasureKind::sphere, 2), pi / 2);
  double err_j = 0.0, err_rt = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r = 0.05 + i * (20.0 - 0.05) / 49.0;
    err_j = std::max(err_j, std::abs(plane.forward(r) - std::log(r)));
    const double back = plane.inverse(plane.forward(r));
    err_rt = std::max(err_rt, std::abs(plane.forward(back) - plane.forward(r)));
    err_rt = std::max(err_rt, std::abs(back - r) / std::max(1.0, r));

    const double t = 0.02 + i * (pi - 0.04) / 49.0;
    err_j = std::max(err_j, std::abs(sphere.forward(t) - std::log(std::tan(t / 2))));
    const double s = -4.0 + 8.0 * i / 49.0;
    err_rt = std::max(err_rt, std::abs(sphere.forward(sphere.inverse(s)) - s));
    err_rt = std::max(err_rt, std::abs(plane.forward(plane.inverse(s)) - s));
  }
  o.detail << "closed-form error " << fmt(err_j) << " (tol " << fmt(kTolJ) << "), round trip "
           << fmt(err_rt) << " (tol " << fmt(kTolRoundTrip) << ")";
  o.require(err_j <= kTolJ, "J closed form");
  o.require(err_rt <= kTolRoundTrip, "round trip");
  return o;
}

Outcome criterion_3() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto b = gaussian_coefficient(2.0);
  double worst = 0.0, worst_form = 0.0;
  struct Case {
    MeasureKind kind;
    int dim;
    double r0, lo, hi;
  };
  const Case cases[] = {
      {MeasureKind::euclidean, 2, 1.0, 0.05, 6.0},  {MeasureKind::euclidean, 3, 1.0, 0.05, 6.0},
      {MeasureKind::euclidean, 5, 1.0, 0.2, 6.0},   {MeasureKind::sphere, 2, pi / 2, 0.05, 3.09},
      {MeasureKind::sphere, 4, 1.0, 0.1, 3.0},      {MeasureKind::hyperbolic, 2, 1.0, 0.05, 5.0},
      {MeasureKind::hyperbolic, 3, 1.0, 0.1, 4.0},  {MeasureKind::flat_cylinder, 2, 0.0, -5.0, 5.0},
  };
  for (const auto& c : cases) {
    const auto m = builtin_measure(c.kind, c.dim);
    const auto cv = build_change_of_variables(m, c.r0);
    const auto rp = assemble_reduced(cv, b, power_nonlinearity(0.5));
    std::uniform_real_distribution<double> pick(c.lo, c.hi);
    for (int i = 0; i < 100; ++i) {
      const double r = pick(rng);
      const double phi = m.eval(r);
      const double expect = b(r) * phi * phi;
      const double s = cv.forward(r);
      worst = std::max(worst, std::abs(rp.q(s) - expect) / std::max(1.0, std::abs(expect)));
      if (c.kind == MeasureKind::euclidean) {
        // r(s) in closed form from J(r) = int_1^r t^{1-n} dt.
        const int n = c.dim;
        const double rs = n == 2 ? std::exp(s) : std::pow(1.0 + (2.0 - n) * s, 1.0 / (2.0 - n));
        const double form = b(rs) * std::pow(rs, 2.0 * (n - 1));
        worst_form = std::max(worst_form, std::abs(rp.q(s) - form) / std::max(1.0, std::abs(form)));
      }
    }
  }
  o.detail << "identity error " << fmt(worst) << ", Euclidean r(s)^{2(n-1)} form error "
           << fmt(worst_form) << " (tol " << fmt(kTolReduced) << ", relative above 1)";
  o.require(worst <= kTolReduced, "reduced coefficient identity");
  o.require(worst_form <= kTolReduced, "Euclidean closed form");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const auto z = solve_linear(constant_coefficient(1.0), {1.0, 99, 0.0});
  double closed = 0.0;
  for (std::size_t i = 0; i < z.grid.size(); ++i) {
    closed = std::max(closed, std::abs(z.values[i] - (1 - z.grid[i] * z.grid[i]) / 2));
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(0.1, 1.0), freq(0.5, 4.0), phase(0.0, 2 * pi);
  double fd = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double b1 = amp(rng), a = b1 + amp(rng), w = freq(rng), c = phase(rng), g = amp(rng);
    auto q = [=](double s) { return a + b1 * std::cos(w * s + c) + g * std::exp(-s * s); };
    const TruncatedDomain dom{1.0, 39, 0.0};
    const auto zq = solve_linear(q, dom);
    for (std::size_t i = 0; i < zq.grid.size(); ++i) {
      fd = std::max(fd, std::abs(zq.values[i] - oracle::fd_linear_at(q, dom.L, 0.0, 9999, zq.grid[i])));
    }
  }
  o.detail << "parabola error " << fmt(closed) << " (tol " << fmt(kTolGreenClosed)
           << "), 1e4-node FD gap " << fmt(fd) << " (tol " << fmt(kTolGreenFd) << ")";
  o.require(closed <= kTolGreenClosed, "parabola");
  o.require(fd <= kTolGreenFd, "finite-difference oracle");
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const auto cv = build_change_of_variables(builtin_measure(MeasureKind::sphere, 2), pi / 2);
  const auto rp = assemble_reduced(cv, constant_coefficient(1.0), power_nonlinearity(0.5));
  const TruncatedDomain dom{2.0, 399, 0.5};
  const auto coll = solve_collocation(rp, dom);
  const auto shot = solve_shooting_bvp(rp, dom, 2.0, 0.0);
  double gap = HUGE_VAL;
  if (coll.grid.size() == shot.grid.size()) {
    gap = 0.0;
    for (std::size_t i = 0; i < coll.grid.size(); ++i) gap = std::max(gap, std::abs(coll.values[i] - shot.values[i]));
  }
  o.require(coll.converged, "collocation converged");
  o.require(shot.converged, "shooting converged");

  auto zstar = [](double s) { return std::exp(-s * s); };
  auto zstar_dd = [](double s) { return (4 * s * s - 2) * std::exp(-s * s); };
  const auto mp = ReducedProblem::from_coefficient([=](double s) { return -zstar_dd(s) / zstar(s); },
                                                   power_nonlinearity(1.0));
  const auto zm = solve_shooting(mp, 1.0, 0.0, {1.0, 199, 0.0});
  double man = 0.0;
  for (std::size_t i = 0; i < zm.grid.size(); ++i) man = std::max(man, std::abs(zm.values[i] - zstar(zm.grid[i])));
  o.require(zm.converged, "manufactured run converged");

  o.detail << "S2 shooting/collocation gap " << fmt(gap) << " (tol " << fmt(kTolCrossMethod)
           << "), manufactured error " << fmt(man) << " (tol " << fmt(kTolManufactured) << ")";
  o.require(gap <= kTolCrossMethod, "cross-method agreement");
  o.require(man <= kTolManufactured, "manufactured recovery");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const auto m = builtin_measure(MeasureKind::euclidean, 2);
  const auto cv = build_change_of_variables(m, 1.0);
  const auto b = gaussian_coefficient(1.0);
  const auto f = power_nonlinearity(0.5);
  const auto rp = assemble_reduced(cv, b, f);
  auto norm = [&](int n) {
    const auto z = solve_collocation(rp, {5.0, n, 0.1});
    o.require(z.converged, "solver converged at n=" + std::to_string(n));
    const auto u = lift(cv, z);
    return divergence_residual(m, b, f, RadialFunction{u.grid, u.values, std::nullopt}).scaled_sup_norm(0.9);
  };
  const double coarse = norm(3199), fine = norm(6399);
  const double decay = coarse / fine;
  o.detail << "scaled residual " << fmt(coarse) << " (tol " << fmt(kTolResidual) << "), decay on doubling "
           << fmt(decay) << " (min " << fmt(kMinDecay) << ")";
  o.require(coarse <= kTolResidual, "residual bound");
  o.require(decay >= kMinDecay, "second-order decay");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const auto b = constant_coefficient(1.0);
  const auto f = power_nonlinearity(0.5);
  struct Case {
    const char* name;
    MeasureKind kind;
    int dim;
    double r0;
  };
  const Case holds_cases[] = {
      {"R2", MeasureKind::euclidean, 2, 1.0},  {"R3", MeasureKind::euclidean, 3, 1.0},
      {"S2", MeasureKind::sphere, 2, pi / 2},  {"S3", MeasureKind::sphere, 3, pi / 2},
      {"H2", MeasureKind::hyperbolic, 2, 1.0}, {"H3", MeasureKind::hyperbolic, 3, 1.0},
  };
  o.detail << "h1:";
  for (const auto& c : holds_cases) {
    const auto rep = verify_all(assemble_reduced(build_change_of_variables(builtin_measure(c.kind, c.dim), c.r0), b, f));
    o.detail << ' ' << c.name << '=' << to_string(rep.h1.verdict);
    o.require(rep.h1.verdict == Verdict::holds, std::string("h1 holds on ") + c.name);
  }
  // phi = r^2 on (0, inf).
  const auto r2 = verify_all(assemble_reduced(build_change_of_variables(builtin_measure(MeasureKind::euclidean, 3), 1.0), b, f));
  o.detail << " phi=r^2=" << to_string(r2.h1.verdict);
  o.require(r2.h1.verdict == Verdict::fails, "h1 fails for phi = r^2");

  o.detail << "; h3:";
  for (double p : {0.1, 0.5, 0.9, 1.0, 1.5, 2.0}) {
    const Verdict v = check_nonlinearity_limits(power_nonlinearity(p)).verdict;
    o.detail << " p" << p << '=' << to_string(v);
    o.require((v == Verdict::holds) == (p > 0.0 && p < 1.0), "h3 power sweep at p=" + fmt(p));
  }
  const Verdict lin = check_linear_positive(ReducedProblem::from_coefficient(constant_coefficient(1.0), f)).verdict;
  o.detail << "; h2(q=1)=" << to_string(lin);
  o.require(lin != Verdict::holds, "q = 1 linear check not holds");
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const auto m = builtin_measure(MeasureKind::flat_cylinder, 2);
  const auto cv = build_change_of_variables(m, 0.0);
  const auto b = gaussian_coefficient(1.5);
  const auto f = power_nonlinearity(0.5);
  const auto rp = assemble_reduced(cv, b, f);
  double j = 0.0, q = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double r = -10.0 + 0.2 * i;
    j = std::max(j, std::abs(cv.forward(r) - r));
    j = std::max(j, std::abs(cv.inverse(r) - r));
    q = std::max(q, std::abs(rp.q(r) - b(r)));
  }
  const TruncatedDomain dom{4.0, 399, 0.2};
  const auto via_cv = solve_collocation(rp, dom);
  const auto direct = solve_collocation(ReducedProblem::from_coefficient(b, f), dom);
  const auto lifted = lift(cv, via_cv);
  double sol = 0.0, lift_err = 0.0;
  for (std::size_t i = 0; i < via_cv.grid.size(); ++i) {
    sol = std::max(sol, std::abs(via_cv.values[i] - direct.values[i]));
    lift_err = std::max(lift_err, std::abs(lifted.grid[i] - via_cv.grid[i]));
    lift_err = std::max(lift_err, std::abs(lifted.derivs[i] - via_cv.derivs[i]));
  }
  const double worst = std::max({j, q, sol, lift_err});
  o.detail << "J=id " << fmt(j) << ", q=b " << fmt(q) << ", solution " << fmt(sol) << ", lift " << fmt(lift_err)
           << " (tol " << fmt(kTolIdentity) << ")";
  o.require(via_cv.converged && direct.converged, "solvers converged");
  o.require(worst <= kTolIdentity, "identity reduction");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_9() {
  Outcome o;
  const fs::path configs = POLARSL_CONFIG_DIR;
  const std::string exe = POLARSL_CLI_EXE;
  const fs::path scratch = fs::temp_directory_path() / ("polarsl_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  int n_configs = 0, n_files = 0, mismatches = 0;
  for (const auto& entry : fs::directory_iterator(configs)) {
    if (entry.path().extension() != ".ini") continue;
    ++n_configs;
    const std::string name = entry.path().stem().string();
    for (const char* run : {"first", "second"}) {
      const fs::path out = scratch / run / name;
      for (const char* cmd : {"reduce", "solve", "verify"}) {
        const std::string line = "'" + exe + "' " + cmd + " -c '" + entry.path().string() + "' -o '" +
                                 out.string() + "' > /dev/null 2>&1";
        const int raw = std::system(line.c_str());
        const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        o.require(code == 0, name + " " + cmd + " exit " + std::to_string(code));
      }
    }
    const fs::path first = scratch / "first" / name;
    if (!fs::exists(first)) continue;
    for (const auto& file : fs::directory_iterator(first)) {
      ++n_files;
      const fs::path twin = scratch / "second" / name / file.path().filename();
      if (!fs::exists(twin) || slurp(file.path()) != slurp(twin)) ++mismatches;
    }
  }
  fs::remove_all(scratch);
  o.detail << n_configs << " configs, " << n_files << " files compared, " << mismatches << " differ";
  o.require(n_configs >= 3, "at least three shipped configs");
  o.require(n_files >= 3 * 7, "every config produced all outputs");
  o.require(mismatches == 0, "byte-identical outputs");
  return o;
}

const char* kTitles[] = {"",
                         "Laplacian identities",
                         "change-of-variables closed forms",
                         "reduced-coefficient identity",
                         "linear-solver oracle",
                         "nonlinear cross-validation",
                         "lift-and-residual closure",
                         "hypothesis gate correctness",
                         "flat cylinder identity reduction",
                         "CLI golden files"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {criterion_1, criterion_2, criterion_3,
                                                          criterion_4, criterion_5, criterion_6,
                                                          criterion_7, criterion_8, criterion_9};
  int failures = 0;
  for (int k = 1; k <= 9; ++k) {
    if (only && k != only) continue;
    Outcome result;
    try {
      result = criteria[k - 1]();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail << " [exception: " << e.what() << "]";
    }
    std::cout << (result.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << kTitles[k]
              << "): " << result.detail.str() << std::endl;
    if (!result.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
