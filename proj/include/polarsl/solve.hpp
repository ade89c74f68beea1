#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polarsl/ode.hpp"
#include "polarsl/reduction.hpp"

namespace polarsl {

enum class ProfileVariable { s_variable, r_variable };
enum class SolveMethod { green, shooting, collocation };

std::string to_string(SolveMethod method);
SolveMethod parse_solve_method(const std::string& name);

// A sampled solution of the reduced problem (s-variable) or of the radial
// problem after lifting (r-variable).
struct SolutionProfile {
  ProfileVariable variable = ProfileVariable::s_variable;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivs;
  // For lifted profiles, the s-node each r-node came from.
  std::vector<double> s_grid;
  double slope_at_base = 0.0;
  SolveMethod method = SolveMethod::green;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;   // final discrete residual (sup norm)
  double tolerance = 0.0;  // solver tolerance the residual was held to
  // Shooting only: where z first reached zero on either side of s = 0.
  std::optional<double> exit_lo;
  std::optional<double> exit_hi;
  std::string message;

  bool positive() const;
  double sup_norm() const;
};

// [-L, L] with n interior nodes and Dirichlet value bc at both ends; the grid
// has n + 2 uniformly spaced nodes including the ends.
struct TruncatedDomain {
  double L = 1.0;
  int n = 16;
  double bc_value = 0.0;

  void validate() const;
  double spacing() const { return 2.0 * L / (n + 1); }
  std::vector<double> grid() const;
};

// z'' + q = 0, z(+-L) = bc, via the Green's function of -d^2/ds^2 on [-L, L].
SolutionProfile solve_linear(const ScalarMap& q, const TruncatedDomain& dom);

struct ShootingOptions {
  OdeOptions ode{};
};

// Initial value problem z(0) = d, z'(0) = slope, integrated in both directions
// to +-L, stopping where z reaches 0. `converged` iff z > 0 on all of [-L, L].
SolutionProfile solve_shooting(const ReducedProblem& rp, double d, double slope,
                               const TruncatedDomain& dom, const ShootingOptions& opt = {});

// Dirichlet problem by shooting: adjusts (d, slope) by a finite-difference
// secant (Newton) iteration on the boundary mismatch z(+-L) - bc.
SolutionProfile solve_shooting_bvp(const ReducedProblem& rp, const TruncatedDomain& dom,
                                   double d_guess, double slope_guess,
                                   const ShootingOptions& opt = {}, double tol = 1e-10,
                                   int max_iter = 30);

struct CollocationOptions {
  double tol = 1e-10;
  int max_newton = 50;
  double damping_floor = 0x1p-20;
  // When Newton fails and bc > 0: fixed-point sweeps z <- bc + G[q f(z)]
  // from the flat guess bc, then a second Newton run.
  int picard_sweeps = 2000;
};

// Finite differences on the uniform grid (second difference of z against the
// 1-10-1 average of q f(z)) with damped Newton. Without `init`, starts from
// the linear solution (bc plus the Green's solution of z'' + q = 0), or from
// a flat guess when that is unavailable or not positive.
SolutionProfile solve_collocation(const ReducedProblem& rp, const TruncatedDomain& dom,
                                  const std::optional<SolutionProfile>& init = std::nullopt,
                                  const CollocationOptions& opt = {});

// u(r) = z(J(r)): r-nodes are inverse(s-nodes), u'(r) = z'(s) / phi(r).
SolutionProfile lift(const ChangeOfVariables& cv, const SolutionProfile& z);

// CSV `s,r,z,dz_ds`; r is nan when no change of variables is given.
void write_solution_csv(std::ostream& out, const SolutionProfile& z,
                        const ChangeOfVariables* cv);
// CSV `r,u,du_dr` for a lifted profile.
void write_lifted_csv(std::ostream& out, const SolutionProfile& u);
// Reads an s-profile from `s,r,z,dz_ds` CSV.
SolutionProfile read_solution_csv(std::istream& in);

}  // namespace polarsl
