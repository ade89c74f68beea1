#include "polarsl/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polarsl/error.hpp"

namespace polarsl {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// Fifth-order weights minus the embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState out = y;
  for (const auto& [a, k] : terms) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * a * (*k)[i];
  }
  return out;
}

}  // namespace

OdeStep dopri5_step(const OdeRhs& rhs, double t, const OdeState& y, double h,
                    const OdeOptions& opt) {
  const OdeState k1 = rhs(t, y);
  const OdeState k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
  const OdeState k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
  const OdeState k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const OdeState k5 =
      rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const OdeState k6 =
      rhs(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const OdeState y5 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
  const OdeState k7 = rhs(t + h, y5);

  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double err =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
    acc += (err / scale) * (err / scale);
  }
  return {y5, std::sqrt(acc / static_cast<double>(y.size()))};
}

Trajectory integrate_to(const OdeRhs& rhs, double t0, const OdeState& y0,
                        std::span<const double> outputs, const OdeOptions& opt,
                        const std::function<double(const OdeState&)>& event) {
  Trajectory traj;
  if (outputs.empty()) return traj;
  const double dir = outputs.back() >= t0 ? 1.0 : -1.0;

  double t = t0;
  OdeState y = y0;
  double h = opt.h_init;
  double err_old = 1e-4;
  std::size_t next = 0;

  // Output times coinciding with the start are emitted immediately.
  while (next < outputs.size() && outputs[next] == t) {
    traj.t.push_back(t);
    traj.y.push_back(y);
    ++next;
  }

  while (next < outputs.size()) {
    if (traj.steps + traj.rejected >= opt.max_steps) {
      std::ostringstream msg;
      msg << "ODE integration exceeded " << opt.max_steps << " steps at s=" << t;
      throw NumericError(msg.str());
    }
    const double target = outputs[next];
    const double remaining = std::abs(target - t);
    const bool lands = h >= remaining;
    const double step = lands ? remaining : h;
    if (step < opt.h_min && !lands) {
      std::ostringstream msg;
      msg << "ODE step size underflow (h=" << step << ") at s=" << t;
      throw NumericError(msg.str());
    }

    const OdeStep trial = dopri5_step(rhs, t, y, dir * step, opt);
    if (!std::isfinite(trial.error)) {
      h = 0.25 * step;
      ++traj.rejected;
      continue;
    }
    if (trial.error > 1.0) {
      const double fac = std::pow(trial.error, kExpo);
      h = step / std::min(1.0 / kFacMin, fac / kSafety);
      ++traj.rejected;
      continue;
    }

    ++traj.steps;
    if (event && event(trial.y) <= 0.0) {
      // Bisect on the step length: the crossing lies in (0, step].
      double lo = 0.0, hi = step;
      while (hi - lo > opt.event_tol) {
        const double mid = 0.5 * (lo + hi);
        const OdeStep part = dopri5_step(rhs, t, y, dir * mid, opt);
        if (event(part.y) <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      traj.event_t = t + dir * 0.5 * (lo + hi);
      return traj;
    }

    const double err = std::max(trial.error, 1e-10);
    double fac = std::pow(err, kExpo) / std::pow(err_old, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
    const double proposal = step / fac;
    err_old = err;

    t = lands ? target : t + dir * step;
    y = trial.y;
    // A step truncated to land on an output should not shrink the next one.
    h = lands ? std::max(h, proposal) : proposal;
    while (next < outputs.size() && outputs[next] == t) {
      traj.t.push_back(t);
      traj.y.push_back(y);
      ++next;
    }
  }
  return traj;
}

}  // namespace polarsl
