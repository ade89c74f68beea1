#include "polarsl/measures.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "polarsl/error.hpp"
#include "polarsl/quadrature.hpp"

namespace polarsl {

bool GeodesicMeasure::contains(double r) const {
  if (!std::isfinite(r)) return false;
  if (!lo.unbounded && !(r > lo.value)) return false;
  if (!hi.unbounded && !(r < hi.value)) return false;
  return true;
}

double GeodesicMeasure::distance_to_lo(double r) const {
  return lo.unbounded ? std::numeric_limits<double>::infinity() : r - lo.value;
}

double GeodesicMeasure::distance_to_hi(double r) const {
  return hi.unbounded ? std::numeric_limits<double>::infinity() : hi.value - r;
}

MeasureKind parse_measure_kind(const std::string& name) {
  if (name == "euclidean") return MeasureKind::euclidean;
  if (name == "sphere") return MeasureKind::sphere;
  if (name == "hyperbolic") return MeasureKind::hyperbolic;
  if (name == "flat_cylinder") return MeasureKind::flat_cylinder;
  throw DomainError("unknown measure kind '" + name + "'");
}

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::euclidean: return "euclidean";
    case MeasureKind::sphere: return "sphere";
    case MeasureKind::hyperbolic: return "hyperbolic";
    case MeasureKind::flat_cylinder: return "flat_cylinder";
  }
  return "unknown";
}

double unit_sphere_area(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

GeodesicMeasure builtin_measure(MeasureKind kind, int dim, bool normalize) {
  if (dim < 2) throw DomainError("builtin_measure: dim must be >= 2, got " + std::to_string(dim));
  const double k = normalize ? unit_sphere_area(dim) : 1.0;
  const int p = dim - 1;
  GeodesicMeasure m;
  m.label = to_string(kind) + "(dim=" + std::to_string(dim) + (normalize ? ",normalized)" : ")");
  switch (kind) {
    case MeasureKind::euclidean:
      m.lo = Endpoint::finite(0.0);
      m.hi = Endpoint::infinite();
      m.eval = [k, p](double r) { return k * std::pow(r, p); };
      m.eval_deriv = [k, p](double r) { return k * p * std::pow(r, p - 1); };
      break;
    case MeasureKind::sphere:
      m.lo = Endpoint::finite(0.0);
      m.hi = Endpoint::finite(std::numbers::pi);
      m.eval = [k, p](double r) { return k * std::pow(std::sin(r), p); };
      m.eval_deriv = [k, p](double r) {
        return k * p * std::pow(std::sin(r), p - 1) * std::cos(r);
      };
      break;
    case MeasureKind::hyperbolic:
      m.lo = Endpoint::finite(0.0);
      m.hi = Endpoint::infinite();
      m.eval = [k, p](double r) { return k * std::pow(std::sinh(r), p); };
      m.eval_deriv = [k, p](double r) {
        return k * p * std::pow(std::sinh(r), p - 1) * std::cosh(r);
      };
      break;
    case MeasureKind::flat_cylinder:
      m.lo = Endpoint::infinite();
      m.hi = Endpoint::infinite();
      m.eval = [k](double) { return k; };
      m.eval_deriv = [](double) { return 0.0; };
      break;
  }
  return m;
}

MeasureValue eval_measure(const GeodesicMeasure& m, double r) {
  if (!m.contains(r)) {
    std::ostringstream msg;
    msg << "eval_measure: r=" << r << " outside the open domain of " << m.label;
    throw DomainError(msg.str());
  }
  return {m.eval(r), m.eval_deriv(r)};
}

namespace {

std::vector<double> column(const std::vector<ProfileSample>& s, double ProfileSample::*field) {
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& p : s) out.push_back(p.*field);
  return out;
}

}  // namespace

ProfileCurve::ProfileCurve(std::vector<ProfileSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 4) throw FormatError("profile curve: at least 4 samples required");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.z)) {
      throw FormatError("profile curve: non-finite sample at index " + std::to_string(i));
    }
    if (s.x < 0.0) throw FormatError("profile curve: negative x at index " + std::to_string(i));
    if (i == 0) continue;
    const auto& prev = samples_[i - 1];
    if (!(s.t > prev.t)) {
      throw FormatError("profile curve: t not strictly increasing at index " + std::to_string(i));
    }
    if (s.x == prev.x && s.z == prev.z) {
      throw FormatError("profile curve: duplicate point at index " + std::to_string(i));
    }
  }
  const auto t = column(samples_, &ProfileSample::t);
  x_ = CubicSpline(t, column(samples_, &ProfileSample::x));
  z_ = CubicSpline(t, column(samples_, &ProfileSample::z));
}

double ProfileCurve::speed(double t) const { return std::hypot(dx(t), dz(t)); }

double ProfileCurve::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    total += integrate_adaptive([this](double t) { return speed(t); }, samples_[i - 1].t,
                                samples_[i].t, 1e-14)
                 .value;
  }
  return total;
}

ProfileCurve read_profile(std::istream& in) {
  std::vector<ProfileSample> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    ProfileSample s{};
    if (!(fields >> s.t)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("profile line " + std::to_string(lineno) + ": expected 't x z'");
    }
    std::string extra;
    if (!(fields >> s.x >> s.z) || (fields >> extra)) {
      throw FormatError("profile line " + std::to_string(lineno) + ": expected 't x z'");
    }
    samples.push_back(s);
  }
  return ProfileCurve(std::move(samples));
}

ProfileCurve read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open profile file '" + path + "'");
  return read_profile(in);
}

ProfileCurve reparametrize_arc_length(const ProfileCurve& curve) {
  const auto& in = curve.samples();
  std::vector<ProfileSample> out(in);
  double s = in.front().t;
  for (std::size_t i = 1; i < in.size(); ++i) {
    s += integrate_adaptive([&curve](double t) { return curve.speed(t); }, in[i - 1].t, in[i].t,
                            1e-14)
             .value;
    out[i].t = s;
  }
  return ProfileCurve(std::move(out));
}

GeodesicMeasure measure_from_profile(const ProfileCurve& curve) {
  const auto& s = curve.samples();
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!(s[i].x > 0.0)) {
      throw DomainError("measure_from_profile: x <= 0 at interior sample " + std::to_string(i) +
                        " (t=" + std::to_string(s[i].t) + ")");
    }
  }
  auto shared = std::make_shared<const ProfileCurve>(curve);
  GeodesicMeasure m;
  m.lo = Endpoint::finite(curve.t_min());
  m.hi = Endpoint::finite(curve.t_max());
  m.eval = [shared](double t) { return shared->x(t); };
  m.eval_deriv = [shared](double t) { return shared->dx(t); };
  m.label = "profile";
  return m;
}

}  // namespace polarsl
