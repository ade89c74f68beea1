#include "polarsl/spline.hpp"

#include <algorithm>
#include <cmath>

#include "polarsl/error.hpp"

namespace polarsl {
namespace {

// Derivative at x[0] of the cubic through the first four points.
double end_slope(double x0, double x1, double x2, double x3, double y0, double y1,
                 double y2, double y3) {
  // Lagrange basis derivatives evaluated at x0.
  const double l0 = 1.0 / (x0 - x1) + 1.0 / (x0 - x2) + 1.0 / (x0 - x3);
  const double l1 = (x0 - x2) * (x0 - x3) / ((x1 - x0) * (x1 - x2) * (x1 - x3));
  const double l2 = (x0 - x1) * (x0 - x3) / ((x2 - x0) * (x2 - x1) * (x2 - x3));
  const double l3 = (x0 - x1) * (x0 - x2) / ((x3 - x0) * (x3 - x1) * (x3 - x2));
  return l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3;
}

}  // namespace

void solve_tridiagonal(std::span<const double> lower, std::span<double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw FormatError("spline: x and y sizes differ");
  if (n < 4) throw FormatError("spline: at least 4 samples required");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw FormatError("spline: abscissae must be strictly increasing");
  }

  const double s0 = end_slope(x_[0], x_[1], x_[2], x_[3], y_[0], y_[1], y_[2], y_[3]);
  const double sn = end_slope(x_[n - 1], x_[n - 2], x_[n - 3], x_[n - 4], y_[n - 1], y_[n - 2],
                              y_[n - 3], y_[n - 4]);

  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
  m_.assign(n, 0.0);
  const double h0 = x_[1] - x_[0];
  diag[0] = h0 / 3.0;
  upper[0] = h0 / 6.0;
  m_[0] = (y_[1] - y_[0]) / h0 - s0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    lower[i] = hl / 6.0;
    diag[i] = (hl + hr) / 3.0;
    upper[i] = hr / 6.0;
    m_[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  const double hn = x_[n - 1] - x_[n - 2];
  lower[n - 1] = hn / 6.0;
  diag[n - 1] = hn / 3.0;
  m_[n - 1] = sn - (y_[n - 1] - y_[n - 2]) / hn;
  solve_tridiagonal(lower, diag, upper, m_);
}

std::size_t CubicSpline::interval(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double t) const {
  const std::size_t i = interval(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
  const std::size_t i = interval(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double t) const {
  const std::size_t i = interval(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

double HermiteSegment::value(double t) const {
  const double h = x1 - x0;
  const double u = (t - x0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 +
         (u3 - u2) * h * d1;
}

double HermiteSegment::derivative(double t) const {
  const double h = x1 - x0;
  const double u = (t - x0) / h;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y0 + (-6 * u2 + 6 * u) * y1) / h + (3 * u2 - 4 * u + 1) * d0 +
         (3 * u2 - 2 * u) * d1;
}

}  // namespace polarsl
