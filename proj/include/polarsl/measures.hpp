#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "polarsl/spline.hpp"

namespace polarsl {

// One end of an open interval. Infinite ends carry an explicit flag; `value`
// is meaningless for them.
struct Endpoint {
  double value = 0.0;
  bool unbounded = false;

  static Endpoint finite(double v) { return {v, false}; }
  static Endpoint infinite() { return {0.0, true}; }
};

using ScalarMap = std::function<double(double)>;

// The measure phi(r) of the geodesic sphere along the transversal, with its
// derivative, on an open interval (lo, hi). Immutable once built.
struct GeodesicMeasure {
  Endpoint lo;
  Endpoint hi;
  ScalarMap eval;
  ScalarMap eval_deriv;
  std::string label;

  bool contains(double r) const;
  // Distance from r to the nearer finite endpoint on either side, or +inf.
  double distance_to_lo(double r) const;
  double distance_to_hi(double r) const;
};

enum class MeasureKind { euclidean, sphere, hyperbolic, flat_cylinder };

MeasureKind parse_measure_kind(const std::string& name);
std::string to_string(MeasureKind kind);

// Surface area of the unit sphere S^{dim-1} in R^dim.
double unit_sphere_area(int dim);

// phi(r) = k r^{n-1}, k sin(r)^{n-1}, k sinh(r)^{n-1} or k, with k = 1 unless
// `normalize` is set, in which case k = |S^{n-1}|.
GeodesicMeasure builtin_measure(MeasureKind kind, int dim, bool normalize = false);

struct MeasureValue {
  double phi;
  double dphi;
};

// Throws DomainError outside the open domain.
MeasureValue eval_measure(const GeodesicMeasure& m, double r);

struct ProfileSample {
  double t;
  double x;
  double z;
};

// Plane curve t -> (x(t), z(t)) generating a surface of revolution around the
// z-axis. Interpolated by cubic splines in t.
class ProfileCurve {
 public:
  explicit ProfileCurve(std::vector<ProfileSample> samples);

  const std::vector<ProfileSample>& samples() const { return samples_; }
  double t_min() const { return samples_.front().t; }
  double t_max() const { return samples_.back().t; }

  double x(double t) const { return x_(t); }
  double z(double t) const { return z_(t); }
  double dx(double t) const { return x_.derivative(t); }
  double dz(double t) const { return z_.derivative(t); }
  double speed(double t) const;
  double length() const;

 private:
  std::vector<ProfileSample> samples_;
  CubicSpline x_;
  CubicSpline z_;
};

// Reads `t x z` triples, one per line; `#` starts a comment.
ProfileCurve read_profile(std::istream& in);
ProfileCurve read_profile_file(const std::string& path);

// Returns the same points re-parametrized by arc length, starting at the
// original t_min. Samples must be dense enough for cubic interpolation to
// resolve the curve (interpolation error below 1e-6).
ProfileCurve reparametrize_arc_length(const ProfileCurve& curve);

// phi(t) = x(t) on the open parameter interval (the constant 2*pi of the
// circle length is dropped). Expects a unit-speed curve.
GeodesicMeasure measure_from_profile(const ProfileCurve& curve);

}  // namespace polarsl
