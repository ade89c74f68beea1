#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace polarsl {

using OdeState = std::array<double, 2>;
using OdeRhs = std::function<OdeState(double, const OdeState&)>;

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_min = 1e-13;
  double h_init = 1e-3;
  double event_tol = 1e-10;
  int max_steps = 1'000'000;
};

struct OdeStep {
  OdeState y;
  double error;  // scaled RMS error estimate, accept when <= 1
};

// Embedded Dormand-Prince 5(4) pair.
OdeStep dopri5_step(const OdeRhs& rhs, double t, const OdeState& y, double h,
                    const OdeOptions& opt);

struct Trajectory {
  std::vector<double> t;
  std::vector<OdeState> y;
  // Location where event(y) first became <= 0, if it did.
  std::optional<double> event_t;
  int steps = 0;
  int rejected = 0;
};

// Integrates from (t0, y0) through `outputs` (monotone, all on one side of
// t0), landing exactly on every output time. Stops early at the first point
// where event(y) <= 0, located by bisection on the step length. Step sizes
// below opt.h_min raise NumericError.
Trajectory integrate_to(const OdeRhs& rhs, double t0, const OdeState& y0,
                        std::span<const double> outputs, const OdeOptions& opt,
                        const std::function<double(const OdeState&)>& event = {});

}  // namespace polarsl
