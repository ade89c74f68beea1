#include "polarsl/solve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "polarsl/csv.hpp"
#include "polarsl/error.hpp"
#include "polarsl/quadrature.hpp"
#include "polarsl/spline.hpp"

namespace polarsl {

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::green: return "green";
    case SolveMethod::shooting: return "shooting";
    case SolveMethod::collocation: return "collocation";
  }
  return "unknown";
}

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "green" || name == "linear") return SolveMethod::green;
  if (name == "shooting") return SolveMethod::shooting;
  if (name == "collocation") return SolveMethod::collocation;
  throw ConfigError("unknown solver method '" + name + "'");
}

bool SolutionProfile::positive() const {
  return !values.empty() && *std::min_element(values.begin(), values.end()) > 0.0;
}

double SolutionProfile::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void TruncatedDomain::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("truncated domain: L must be positive");
  if (n < 16) throw DomainError("truncated domain: n must be >= 16");
  if (!(bc_value >= 0.0)) throw DomainError("truncated domain: bc must be nonnegative");
}

std::vector<double> TruncatedDomain::grid() const {
  const int count = n + 2;
  std::vector<double> s(count);
  const double h = spacing();
  for (int i = 0; i < count; ++i) s[i] = -L + i * h;
  s.front() = -L;
  s.back() = L;
  // Snap the centre node onto 0 exactly when the grid is symmetric about it.
  if (count % 2 == 1) s[count / 2] = 0.0;
  return s;
}

namespace {

constexpr double kLinearQuadTol = 1e-13;

double checked_q(const ScalarMap& q, double t) {
  const double v = q(t);
  if (v < 0.0 || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "solve_linear: q(" << t << ") = " << v << " is negative or not finite";
    throw DomainError(msg.str());
  }
  return v;
}

double interp_linear(const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double w = (t - x[i]) / (x[i + 1] - x[i]);
  return (1.0 - w) * y[i] + w * y[i + 1];
}

// Fourth-order derivative estimate on a uniform grid (at least 5 nodes).
std::vector<double> uniform_derivative(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]) / (12 * h);
  }
  auto forward = [&](std::size_t i, double sign) {
    // One-sided five-point stencil starting at i, stepping by sign.
    auto at = [&](int k) { return v[static_cast<std::size_t>(static_cast<long>(i) + sign * k)]; };
    return sign * (-25 * at(0) + 48 * at(1) - 36 * at(2) + 16 * at(3) - 3 * at(4)) / (12 * h);
  };
  auto shifted = [&](std::size_t i, double sign) {
    // Five-point stencil with one node behind i.
    auto at = [&](int k) { return v[static_cast<std::size_t>(static_cast<long>(i) + sign * k)]; };
    return sign * (-3 * at(-1) - 10 * at(0) + 18 * at(1) - 6 * at(2) + at(3)) / (12 * h);
  };
  d[0] = forward(0, 1.0);
  d[1] = shifted(1, 1.0);
  d[n - 1] = forward(n - 1, -1.0);
  d[n - 2] = shifted(n - 2, -1.0);
  return d;
}

}  // namespace

SolutionProfile solve_linear(const ScalarMap& q, const TruncatedDomain& dom) {
  dom.validate();
  const double L = dom.L;
  const auto s = dom.grid();
  const std::size_t m = s.size();

  auto left_weight = [&](double t) { return (L + t) * checked_q(q, t); };
  auto right_weight = [&](double t) { return (L - t) * checked_q(q, t); };

  // A(s_i) = int_{-L}^{s_i} (L+t) q, B(s_i) = int_{s_i}^{L} (L-t) q.
  std::vector<double> a_piece(m, 0.0), b_piece(m, 0.0);
  // Absolute target with a relative floor for large coefficients.
  auto piece = [](const ScalarMap& w, double a, double b) {
    const double rough = std::abs(w(0.5 * (a + b))) * (b - a);
    return integrate_adaptive(w, a, b, std::max(kLinearQuadTol, 1e-13 * rough)).value;
  };
  for (std::size_t i = 1; i < m; ++i) {
    a_piece[i] = piece(left_weight, s[i - 1], s[i]);
    b_piece[i] = piece(right_weight, s[i - 1], s[i]);
  }
  std::vector<double> A(m, 0.0), B(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) A[i] = A[i - 1] + a_piece[i];
  for (std::size_t i = m - 1; i-- > 0;) B[i] = B[i + 1] + b_piece[i + 1];

  SolutionProfile out;
  out.variable = ProfileVariable::s_variable;
  out.method = SolveMethod::green;
  out.grid = s;
  out.values.resize(m);
  out.derivs.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.values[i] = dom.bc_value + ((L - s[i]) * A[i] + (L + s[i]) * B[i]) / (2 * L);
    out.derivs[i] = (B[i] - A[i]) / (2 * L);
  }
  out.values.front() = out.values.back() = dom.bc_value;
  double a0 = 0.0, b0 = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double lo = std::min(s[i - 1], 0.0), hi = std::min(s[i], 0.0);
    if (hi > lo) a0 += piece(left_weight, lo, hi);
    const double lo2 = std::max(s[i - 1], 0.0), hi2 = std::max(s[i], 0.0);
    if (hi2 > lo2) b0 += piece(right_weight, lo2, hi2);
  }
  out.slope_at_base = (b0 - a0) / (2 * L);
  out.converged = true;
  out.tolerance = 1e-9;
  return out;
}

SolutionProfile solve_shooting(const ReducedProblem& rp, double d, double slope,
                               const TruncatedDomain& dom, const ShootingOptions& opt) {
  dom.validate();
  if (!(d > 0.0)) throw DomainError("solve_shooting: d must be positive");
  const auto s = dom.grid();

  // f is never evaluated at z <= 0; past a zero crossing the forcing is
  // switched off, which only matters inside the step that is being bisected.
  OdeRhs rhs = [&rp](double t, const OdeState& y) -> OdeState {
    const double force = y[0] > 0.0 ? rp.q(t) * rp.f.eval(y[0]) : 0.0;
    return {y[1], -force};
  };
  auto event = [](const OdeState& y) { return y[0]; };

  OdeOptions ode = opt.ode;
  // Minimum step is relative to the half-width.
  ode.h_min *= dom.L;
  ode.h_init = std::min(ode.h_init, dom.spacing());

  std::vector<double> up, down;
  for (double v : s) {
    if (v >= 0.0) up.push_back(v);
  }
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (*it <= 0.0) down.push_back(*it);
  }
  const OdeState y0{d, slope};
  const Trajectory fwd = integrate_to(rhs, 0.0, y0, up, ode, event);
  const Trajectory bwd = integrate_to(rhs, 0.0, y0, down, ode, event);

  SolutionProfile out;
  out.variable = ProfileVariable::s_variable;
  out.method = SolveMethod::shooting;
  out.slope_at_base = slope;
  for (std::size_t k = bwd.t.size(); k-- > 0;) {
    if (bwd.t[k] == 0.0 && !fwd.t.empty() && fwd.t.front() == 0.0) continue;
    out.grid.push_back(bwd.t[k]);
    out.values.push_back(bwd.y[k][0]);
    out.derivs.push_back(bwd.y[k][1]);
  }
  for (std::size_t k = 0; k < fwd.t.size(); ++k) {
    out.grid.push_back(fwd.t[k]);
    out.values.push_back(fwd.y[k][0]);
    out.derivs.push_back(fwd.y[k][1]);
  }
  out.exit_lo = bwd.event_t;
  out.exit_hi = fwd.event_t;
  out.iterations = fwd.steps + bwd.steps;
  out.tolerance = ode.rtol;
  out.converged = !out.exit_lo && !out.exit_hi && out.positive();
  if (!out.converged) {
    std::ostringstream msg;
    msg << "z reached 0";
    if (out.exit_lo) msg << " at s=" << *out.exit_lo;
    if (out.exit_hi) msg << " at s=" << *out.exit_hi;
    out.message = msg.str();
  }
  return out;
}

SolutionProfile solve_shooting_bvp(const ReducedProblem& rp, const TruncatedDomain& dom,
                                   double d_guess, double slope_guess,
                                   const ShootingOptions& opt, double tol, int max_iter) {
  dom.validate();
  struct Shot {
    SolutionProfile profile;
    double m_lo, m_hi;
    bool ok;
  };
  auto shoot = [&](double d, double slope) {
    Shot shot{solve_shooting(rp, d, slope, dom, opt), 0.0, 0.0, false};
    shot.ok = shot.profile.converged;
    if (shot.ok) {
      shot.m_lo = shot.profile.values.front() - dom.bc_value;
      shot.m_hi = shot.profile.values.back() - dom.bc_value;
    }
    return shot;
  };

  double d = d_guess, slope = slope_guess;
  Shot cur = shoot(d, slope);
  if (!cur.ok) {
    cur.profile.message = "initial shot left the positive cone: " + cur.profile.message;
    return cur.profile;
  }
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double norm = std::max(std::abs(cur.m_lo), std::abs(cur.m_hi));
    if (norm <= tol) break;
    // Finite-difference Jacobian of the mismatch in (d, slope).
    const double dd = 1e-6 * std::max(1.0, std::abs(d));
    const double ds = 1e-6 * std::max(1.0, std::abs(slope));
    const Shot pd = shoot(d + dd, slope);
    const Shot ps = shoot(d, slope + ds);
    if (!pd.ok || !ps.ok) break;
    const double j11 = (pd.m_lo - cur.m_lo) / dd, j12 = (ps.m_lo - cur.m_lo) / ds;
    const double j21 = (pd.m_hi - cur.m_hi) / dd, j22 = (ps.m_hi - cur.m_hi) / ds;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double step_d = -(j22 * cur.m_lo - j12 * cur.m_hi) / det;
    const double step_s = -(-j21 * cur.m_lo + j11 * cur.m_hi) / det;

    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= 0x1p-20) {
      const double nd = d + lambda * step_d;
      if (nd > 0.0) {
        Shot trial = shoot(nd, slope + lambda * step_s);
        if (trial.ok && std::max(std::abs(trial.m_lo), std::abs(trial.m_hi)) < norm) {
          d = nd;
          slope += lambda * step_s;
          cur = std::move(trial);
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  SolutionProfile out = std::move(cur.profile);
  out.residual = std::max(std::abs(cur.m_lo), std::abs(cur.m_hi));
  out.iterations = iter;
  out.tolerance = tol;
  out.converged = out.converged && out.residual <= tol;
  if (!out.converged && out.message.empty()) {
    std::ostringstream msg;
    msg << "boundary mismatch " << out.residual << " > " << tol;
    out.message = msg.str();
  }
  return out;
}

SolutionProfile solve_collocation(const ReducedProblem& rp, const TruncatedDomain& dom,
                                  const std::optional<SolutionProfile>& init,
                                  const CollocationOptions& opt) {
  dom.validate();
  const auto s = dom.grid();
  const std::size_t m = s.size();
  const std::size_t n = m - 2;
  const double h = dom.spacing();
  const double inv_h2 = 1.0 / (h * h);

  std::vector<double> q(m);
  for (std::size_t i = 0; i < m; ++i) q[i] = rp.q(s[i]);

  std::vector<double> z(m, dom.bc_value);
  if (init) {
    for (std::size_t i = 1; i + 1 < m; ++i) z[i] = interp_linear(init->grid, init->values, s[i]);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (!(z[i] > 0.0)) throw DomainError("solve_collocation: initial guess must be positive");
    }
  } else {
    bool usable = false;
    try {
      SolutionProfile linear = solve_linear(rp.q, dom);
      for (std::size_t i = 1; i + 1 < m; ++i) z[i] = linear.values[i];
      usable = std::all_of(z.begin() + 1, z.end() - 1, [](double v) { return v > 0.0; });
    } catch (const DomainError&) {
      // q changes sign; no linear supersolution to start from.
    }
    if (!usable) std::fill(z.begin() + 1, z.end() - 1, std::max(dom.bc_value, 1.0));
  }
  z.front() = z.back() = dom.bc_value;

  // Compact fourth-order stencil: the second difference of z balances the
  // 1-10-1 average of the forcing g = q f(z). Boundary forcing uses f(bc),
  // or the limit f(0+) when bc = 0.
  const double f_edge = dom.bc_value > 0.0 ? rp.f.eval(dom.bc_value)
                                           : rp.f.eval(std::numeric_limits<double>::min());
  const double g_lo = q.front() * f_edge, g_hi = q.back() * f_edge;
  std::vector<double> g(m), dg(m, 0.0);
  auto forcing = [&](const std::vector<double>& v) {
    g.front() = g_lo;
    g.back() = g_hi;
    for (std::size_t i = 1; i + 1 < m; ++i) g[i] = q[i] * rp.f.eval(v[i]);
  };
  auto residual = [&](const std::vector<double>& v, std::vector<double>& F) {
    forcing(v);
    double norm = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      F[i - 1] = (v[i - 1] - 2 * v[i] + v[i + 1]) * inv_h2 + (g[i - 1] + 10 * g[i] + g[i + 1]) / 12.0;
      norm = std::max(norm, std::abs(F[i - 1]));
    }
    return norm;
  };

  std::vector<double> F(n), trial_F(n), trial(m), lower(n), diag(n), upper(n), step(n);
  double norm = residual(z, F);

  SolutionProfile out;
  out.variable = ProfileVariable::s_variable;
  out.method = SolveMethod::collocation;
  out.tolerance = opt.tol;
  int iter = 0;

  // The residual carries a 1/h^2 factor, so its roundoff floor grows with |z|.
  auto tol_eff = [&] {
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, std::abs(v));
    return std::max(opt.tol, 16 * std::numeric_limits<double>::epsilon() * zmax * inv_h2);
  };

  // Damped Newton from the current z; returns true on stagnation.
  auto newton = [&](int budget) {
    for (int k_iter = 0; norm > tol_eff() && k_iter < budget; ++k_iter) {
      for (std::size_t i = 1; i + 1 < m; ++i) dg[i] = q[i] * rp.f.eval_deriv(z[i]);
      for (std::size_t k = 0; k < n; ++k) {
        lower[k] = inv_h2 + dg[k] / 12.0;
        upper[k] = inv_h2 + dg[k + 2] / 12.0;
        diag[k] = -2 * inv_h2 + 10.0 * dg[k + 1] / 12.0;
        step[k] = -F[k];
      }
      solve_tridiagonal(lower, diag, upper, step);
      ++iter;

      double lambda = 1.0;
      bool accepted = false;
      while (lambda >= opt.damping_floor) {
        bool positive = true;
        trial.front() = trial.back() = dom.bc_value;
        for (std::size_t k = 0; k < n; ++k) {
          trial[k + 1] = z[k + 1] + lambda * step[k];
          if (!(trial[k + 1] > 0.0)) {
            positive = false;
            break;
          }
        }
        if (positive) {
          const double trial_norm = residual(trial, trial_F);
          if (trial_norm < norm) {
            z.swap(trial);
            F.swap(trial_F);
            norm = trial_norm;
            accepted = true;
            break;
          }
        }
        lambda *= 0.5;
      }
      if (!accepted) return true;
    }
    return false;
  };

  // Monotone sweeps z <- bc + G[q f(z)] from the flat subsolution bc.
  auto picard = [&]() -> std::optional<std::vector<double>> {
    std::vector<double> v(m, dom.bc_value), rhs(n);
    for (int sweep = 0; sweep < opt.picard_sweeps; ++sweep) {
      forcing(v);
      for (std::size_t k = 0; k < n; ++k) {
        lower[k] = upper[k] = inv_h2;
        diag[k] = -2 * inv_h2;
        rhs[k] = -(g[k] + 10 * g[k + 1] + g[k + 2]) / 12.0;
      }
      rhs.front() -= dom.bc_value * inv_h2;
      rhs.back() -= dom.bc_value * inv_h2;
      solve_tridiagonal(lower, diag, upper, rhs);
      double change = 0.0, scale = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (!(rhs[k] > 0.0)) return std::nullopt;
        change = std::max(change, std::abs(rhs[k] - v[k + 1]));
        scale = std::max(scale, std::abs(rhs[k]));
        v[k + 1] = rhs[k];
      }
      if (change <= 1e-10 * scale) break;
    }
    return v;
  };

  bool stagnated = newton(opt.max_newton);
  bool restarted = false;
  if (norm > tol_eff() && dom.bc_value > 0.0 && opt.picard_sweeps > 0 && opt.max_newton > 0) {
    const std::vector<double> best = z;
    const double best_norm = norm;
    if (auto v = picard()) {
      restarted = true;
      z = *v;
      norm = residual(z, F);
      stagnated = newton(opt.max_newton);
      if (norm > best_norm) {
        z = best;
        norm = residual(z, F);
      }
    }
  }

  out.grid = s;
  out.values = z;
  out.derivs = uniform_derivative(z, h);
  out.slope_at_base = interp_linear(s, out.derivs, 0.0);
  out.iterations = iter;
  out.residual = norm;
  out.tolerance = tol_eff();
  out.converged = norm <= out.tolerance;
  if (!out.converged) {
    std::ostringstream msg;
    msg << (stagnated ? "Newton stagnated (damping floor reached)" : "Newton iteration limit reached")
        << (restarted ? " after a fixed-point restart" : "") << "; final residual " << norm;
    out.message = msg.str();
  }
  return out;
}

SolutionProfile lift(const ChangeOfVariables& cv, const SolutionProfile& z) {
  if (z.variable != ProfileVariable::s_variable) {
    throw DomainError("lift: profile is not in the s variable");
  }
  SolutionProfile u = z;
  u.variable = ProfileVariable::r_variable;
  u.s_grid = z.grid;
  for (std::size_t i = 0; i < z.grid.size(); ++i) {
    const double r = cv.inverse(z.grid[i]);
    u.grid[i] = r;
    if (i < z.derivs.size()) u.derivs[i] = z.derivs[i] / cv.phi(r);
  }
  u.slope_at_base = z.slope_at_base / cv.phi(cv.r0());
  return u;
}

void write_solution_csv(std::ostream& out, const SolutionProfile& z, const ChangeOfVariables* cv) {
  CsvWriter csv(out, {"s", "r", "z", "dz_ds"});
  for (std::size_t i = 0; i < z.grid.size(); ++i) {
    const double r = cv ? cv->inverse(z.grid[i]) : std::nan("");
    csv.row({z.grid[i], r, z.values[i], i < z.derivs.size() ? z.derivs[i] : std::nan("")});
  }
}

void write_lifted_csv(std::ostream& out, const SolutionProfile& u) {
  CsvWriter csv(out, {"r", "u", "du_dr"});
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    csv.row({u.grid[i], u.values[i], i < u.derivs.size() ? u.derivs[i] : std::nan("")});
  }
}

SolutionProfile read_solution_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t cs = table.column("s");
  const std::size_t cz = table.column("z");
  const std::size_t cd = table.column("dz_ds");
  SolutionProfile z;
  z.variable = ProfileVariable::s_variable;
  for (const auto& row : table.rows) {
    z.grid.push_back(row[cs]);
    z.values.push_back(row[cz]);
    z.derivs.push_back(row[cd]);
  }
  for (std::size_t i = 1; i < z.grid.size(); ++i) {
    if (!(z.grid[i] > z.grid[i - 1])) throw FormatError("solution csv: s not strictly increasing");
  }
  if (z.grid.empty()) throw FormatError("solution csv: no rows");
  z.slope_at_base = interp_linear(z.grid, z.derivs, 0.0);
  z.converged = true;
  return z;
}

}  // namespace polarsl
