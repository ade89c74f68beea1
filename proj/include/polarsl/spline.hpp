#pragma once

#include <span>
#include <vector>

namespace polarsl {

// C2 cubic spline through (x_i, y_i) on a strictly increasing grid. End
// slopes are taken from third-order one-sided differences (clamped spline),
// which keeps the interpolant fourth-order accurate up to the ends.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::size_t interval(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

// Piecewise cubic Hermite interpolation with prescribed nodal slopes.
struct HermiteSegment {
  double x0, x1, y0, y1, d0, d1;

  double value(double t) const;
  double derivative(double t) const;
};

// Solves a tridiagonal system in place (Thomas algorithm); `lower[0]` and
// `upper[n-1]` are ignored. Returns the solution in `rhs`.
void solve_tridiagonal(std::span<const double> lower, std::span<double> diag,
                       std::span<const double> upper, std::span<double> rhs);

}  // namespace polarsl
