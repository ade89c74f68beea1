#include "polarsl/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "polarsl/error.hpp"
#include "polarsl/quadrature.hpp"
#include "polarsl/spline.hpp"

namespace polarsl {

Nonlinearity power_nonlinearity(double p) {
  std::ostringstream label;
  label << "power(" << p << ")";
  return {[p](double z) { return std::pow(z, p); },
          [p](double z) { return p * std::pow(z, p - 1.0); }, label.str()};
}

Nonlinearity log_power_nonlinearity(double p) {
  constexpr double e = std::numbers::e;
  std::ostringstream label;
  label << "logpower(" << p << ")";
  return {[p](double z) { return std::pow(z, p) * std::log(e + z); },
          [p](double z) {
            return p * std::pow(z, p - 1.0) * std::log(e + z) + std::pow(z, p) / (e + z);
          },
          label.str()};
}

namespace {

struct HermiteTable {
  std::vector<double> x, y, d;

  HermiteSegment segment(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    i = std::min(i, x.size() - 2);
    return {x[i], x[i + 1], y[i], y[i + 1], d[i], d[i + 1]};
  }
};

void check_table(const std::vector<double>& x, std::size_t min_size, const char* what) {
  if (x.size() < min_size) {
    throw FormatError(std::string(what) + ": at least " + std::to_string(min_size) +
                      " rows required");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw FormatError(std::string(what) + ": abscissae not strictly increasing at row " +
                        std::to_string(i));
    }
  }
}

}  // namespace

Nonlinearity tabulated_nonlinearity(std::vector<double> z, std::vector<double> f,
                                    std::vector<double> df) {
  if (z.size() != f.size() || z.size() != df.size()) {
    throw FormatError("tabulated nonlinearity: column sizes differ");
  }
  check_table(z, 2, "tabulated nonlinearity");
  auto table = std::make_shared<const HermiteTable>(HermiteTable{std::move(z), std::move(f),
                                                                 std::move(df)});
  auto guard = [table](double t) {
    if (!(t >= table->x.front() && t <= table->x.back())) {
      std::ostringstream msg;
      msg << "tabulated nonlinearity: z=" << t << " outside [" << table->x.front() << ", "
          << table->x.back() << "]";
      throw EvaluationError(msg.str());
    }
  };
  return {[table, guard](double t) {
            guard(t);
            return table->segment(t).value(t);
          },
          [table, guard](double t) {
            guard(t);
            return table->segment(t).derivative(t);
          },
          "table"};
}

ScalarMap constant_coefficient(double c) {
  return [c](double) { return c; };
}

ScalarMap gaussian_coefficient(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian coefficient: sigma must be positive");
  return [sigma](double r) { return std::exp(-r * r / (2.0 * sigma * sigma)); };
}

ScalarMap power_coefficient(double p) {
  return [p](double r) { return std::pow(r, p); };
}

ScalarMap tabulated_coefficient(std::vector<double> r, std::vector<double> b) {
  auto spline = std::make_shared<const CubicSpline>(std::move(r), std::move(b));
  return [spline](double t) {
    if (!(t >= spline->front() && t <= spline->back())) {
      std::ostringstream msg;
      msg << "tabulated coefficient: r=" << t << " outside [" << spline->front() << ", "
          << spline->back() << "]";
      throw EvaluationError(msg.str());
    }
    return (*spline)(t);
  };
}

struct ChangeOfVariables::Table {
  std::mutex mutex;
  std::deque<Knot> knots;
  double step_lo = 0.0;
  double step_hi = 0.0;
  bool exhausted_lo = false;
  bool exhausted_hi = false;
};

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUnboundedReach = 1e15;
constexpr int kMaxStepHalvings = 200;

double inverse_phi(const GeodesicMeasure& m, double t) {
  const double phi = m.eval(t);
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    std::ostringstream msg;
    msg << "change of variables: phi(" << t << ") = " << phi << " is not positive";
    throw DomainError(msg.str());
  }
  return 1.0 / phi;
}

// Attempts to append one knot beyond `from` in direction `dir` (+1 or -1).
// Returns false when the endpoint can no longer be approached.
bool extend_once(const GeodesicMeasure& m, double tol, std::deque<Knot>& knots, double& step,
                 bool& exhausted, int dir, double r0) {
  if (exhausted) return false;
  if (knots.size() >= ChangeOfVariables::kMaxKnots) {
    throw NumericError("change of variables: knot table exceeded " +
                       std::to_string(ChangeOfVariables::kMaxKnots) + " knots");
  }
  const Knot from = dir > 0 ? knots.back() : knots.front();
  const double dist = dir > 0 ? m.distance_to_hi(from.r) : m.distance_to_lo(from.r);
  const double reach_limit = kUnboundedReach * std::max(1.0, std::abs(r0));
  if (std::isinf(dist)) {
    if (std::abs(from.r) >= reach_limit) {
      exhausted = true;
      return false;
    }
  } else {
    const double end = dir > 0 ? m.hi.value : m.lo.value;
    if (dist <= 8 * kEps * std::max(1.0, std::abs(end)) || dist < 1e-300) {
      exhausted = true;
      return false;
    }
  }

  auto integrand = [&m](double t) { return inverse_phi(m, t); };
  double h = std::min(step, 0.5 * dist);
  for (int attempt = 0; attempt < kMaxStepHalvings; ++attempt) {
    const double r_new = from.r + dir * h;
    if (r_new == from.r) break;
    const double slope_new = inverse_phi(m, r_new);
    // Quadrature targets scale with |s| once J is large, where an absolute
    // target below the rounding level of s is meaningless.
    const double tol_q = std::max(tol, 64 * kEps * std::abs(from.s));
    const double r_mid = from.r + 0.5 * dir * h;
    QuadratureResult delta, half;
    try {
      delta = integrate_adaptive(integrand, from.r, r_new, tol_q);
      half = integrate_adaptive(integrand, from.r, r_mid, tol_q);
    } catch (const NumericError&) {
      // Too close to a zero of phi for this step; retry shorter.
      h *= 0.5;
      continue;
    }
    const double s_new = from.s + delta.value;
    const double s_mid = from.s + half.value;
    const double tol_interp =
        std::max(10.0 * tol, 64 * kEps * (std::abs(from.s) + std::abs(delta.value)));
    HermiteSegment seg = dir > 0
                             ? HermiteSegment{from.r, r_new, from.s, s_new, from.ds_dr, slope_new}
                             : HermiteSegment{r_new, from.r, s_new, from.s, slope_new, from.ds_dr};
    const double err = std::abs(seg.value(r_mid) - s_mid);
    if (err <= tol_interp) {
      const Knot k{r_new, s_new, slope_new};
      if (dir > 0) {
        knots.push_back(k);
      } else {
        knots.push_front(k);
      }
      const double grow = err > 0.0 ? 0.9 * std::pow(tol_interp / err, 0.25) : 2.0;
      step = h * std::clamp(grow, 0.5, 2.0);
      return true;
    }
    h *= 0.5;
  }
  std::ostringstream msg;
  msg << "change of variables: cannot resolve J near r=" << from.r;
  throw NumericError(msg.str());
}

HermiteSegment segment_at(const std::deque<Knot>& knots, std::size_t i) {
  const Knot& a = knots[i];
  const Knot& b = knots[i + 1];
  return {a.r, b.r, a.s, b.s, a.ds_dr, b.ds_dr};
}

}  // namespace

ChangeOfVariables::ChangeOfVariables(GeodesicMeasure measure, double r0, double tol)
    : measure_(std::make_shared<const GeodesicMeasure>(std::move(measure))),
      r0_(r0),
      tol_(tol),
      table_(std::make_shared<Table>()) {
  if (!measure_->contains(r0)) {
    std::ostringstream msg;
    msg << "change of variables: base point r0=" << r0 << " not inside the domain of "
        << measure_->label;
    throw DomainError(msg.str());
  }
  if (!(tol > 1e-14 && tol < 1e-2)) {
    throw DomainError("change of variables: tol must lie in (1e-14, 1e-2)");
  }
  table_->knots.push_back({r0, 0.0, inverse_phi(*measure_, r0)});
  const double scale =
      std::min({1.0, measure_->distance_to_lo(r0), measure_->distance_to_hi(r0)});
  table_->step_lo = table_->step_hi = 0.1 * scale;
}

double ChangeOfVariables::forward(double r) const {
  if (!measure_->contains(r)) {
    std::ostringstream msg;
    msg << "forward: r=" << r << " outside the open domain of " << measure_->label;
    throw DomainError(msg.str());
  }
  if (r == r0_) return 0.0;
  std::lock_guard lock(table_->mutex);
  auto& t = *table_;
  while (t.knots.back().r < r) {
    if (!extend_once(*measure_, tol_, t.knots, t.step_hi, t.exhausted_hi, +1, r0_)) {
      std::ostringstream msg;
      msg << "forward: r=" << r << " too close to the upper end of " << measure_->label;
      throw DomainError(msg.str());
    }
  }
  while (t.knots.front().r > r) {
    if (!extend_once(*measure_, tol_, t.knots, t.step_lo, t.exhausted_lo, -1, r0_)) {
      std::ostringstream msg;
      msg << "forward: r=" << r << " too close to the lower end of " << measure_->label;
      throw DomainError(msg.str());
    }
  }
  auto it = std::upper_bound(t.knots.begin(), t.knots.end(), r,
                             [](double v, const Knot& k) { return v < k.r; });
  std::size_t i = it == t.knots.begin() ? 0 : static_cast<std::size_t>(it - t.knots.begin()) - 1;
  i = std::min(i, t.knots.size() - 2);
  const double interp = segment_at(t.knots, i).value(r);
  const Knot anchor =
      std::abs(t.knots[i].r - r) <= std::abs(t.knots[i + 1].r - r) ? t.knots[i] : t.knots[i + 1];
  if (anchor.r == r) return anchor.s;
  const ScalarMap& phi = measure_->eval;
  try {
    return anchor.s + integrate_adaptive([&phi](double x) { return 1.0 / phi(x); }, anchor.r, r,
                                         8 * kEps * std::max(1.0, std::abs(interp)))
                          .value;
  } catch (const NumericError&) {
    return interp;
  }
}

double ChangeOfVariables::inverse_table(double s) const {
  if (!std::isfinite(s)) throw DomainError("inverse: s is not finite");
  if (s == 0.0) return r0_;
  std::lock_guard lock(table_->mutex);
  auto& t = *table_;
  while (t.knots.back().s < s) {
    if (!extend_once(*measure_, tol_, t.knots, t.step_hi, t.exhausted_hi, +1, r0_)) {
      std::ostringstream msg;
      msg << "inverse: s=" << s << " outside the image of J (upper limit ~" << t.knots.back().s
          << ")";
      throw DomainError(msg.str());
    }
  }
  while (t.knots.front().s > s) {
    if (!extend_once(*measure_, tol_, t.knots, t.step_lo, t.exhausted_lo, -1, r0_)) {
      std::ostringstream msg;
      msg << "inverse: s=" << s << " outside the image of J (lower limit ~" << t.knots.front().s
          << ")";
      throw DomainError(msg.str());
    }
  }
  auto it = std::upper_bound(t.knots.begin(), t.knots.end(), s,
                             [](double v, const Knot& k) { return v < k.s; });
  std::size_t i = it == t.knots.begin() ? 0 : static_cast<std::size_t>(it - t.knots.begin()) - 1;
  i = std::min(i, t.knots.size() - 2);
  const HermiteSegment seg = segment_at(t.knots, i);
  if (s == seg.y0) return seg.x0;
  if (s == seg.y1) return seg.x1;

  // Bracketed Newton on the Hermite segment; falls back to bisection when a
  // Newton step leaves the bracket.
  double lo = seg.x0, hi = seg.x1;
  double r = lo + (hi - lo) * (s - seg.y0) / (seg.y1 - seg.y0);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = seg.value(r) - s;
    if (g == 0.0) return r;
    if (g > 0.0) {
      hi = r;
    } else {
      lo = r;
    }
    const double dg = seg.derivative(r);
    double next = dg > 0.0 ? r - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 2 * kEps * std::abs(r) || hi - lo <= 2 * kEps * std::abs(r)) {
      return next;
    }
    r = next;
  }
  return r;
}

double ChangeOfVariables::inverse(double s) const {
  double r = inverse_table(s);
  if (s == 0.0) return r;
  Knot anchor{};
  {
    std::lock_guard lock(table_->mutex);
    const auto& k = table_->knots;
    auto it = std::lower_bound(k.begin(), k.end(), r,
                               [](const Knot& a, double v) { return a.r < v; });
    if (it == k.end()) --it;
    if (it != k.begin() && std::abs(std::prev(it)->r - r) < std::abs(it->r - r)) --it;
    anchor = *it;
  }
  const ScalarMap& phi = measure_->eval;
  auto integrand = [&phi](double x) { return 1.0 / phi(x); };
  const double qtol = 8 * kEps * std::max(1.0, std::abs(s));
  for (int iter = 0; iter < 4; ++iter) {
    double j;
    try {
      j = anchor.s + integrate_adaptive(integrand, anchor.r, r, qtol).value;
    } catch (const NumericError&) {
      break;
    }
    const double next = r - (j - s) * phi(r);
    if (!measure_->contains(next)) break;
    const bool done = std::abs(next - r) <= 2 * kEps * std::abs(r);
    r = next;
    if (done) break;
  }
  return r;
}

std::size_t ChangeOfVariables::knot_count() const {
  std::lock_guard lock(table_->mutex);
  return table_->knots.size();
}

std::vector<Knot> ChangeOfVariables::knots() const {
  std::lock_guard lock(table_->mutex);
  return {table_->knots.begin(), table_->knots.end()};
}

ChangeOfVariables build_change_of_variables(const GeodesicMeasure& m, double r0, double tol) {
  return ChangeOfVariables(m, r0, tol);
}

ReducedProblem ReducedProblem::from_coefficient(ScalarMap q, Nonlinearity f) {
  ReducedProblem rp;
  rp.f = std::move(f);
  rp.q = std::move(q);
  return rp;
}

ReducedProblem assemble_reduced(const ChangeOfVariables& cv, ScalarMap b, Nonlinearity f) {
  ReducedProblem rp;
  rp.cv = cv;
  rp.b = b;
  rp.f = std::move(f);
  rp.q = [cv, b](double s) {
    const double r = cv.inverse(s);
    const double phi = cv.phi(r);
    return b(r) * phi * phi;
  };
  return rp;
}

}  // namespace polarsl
