#include "polarsl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "polarsl/error.hpp"

namespace polarsl {

namespace {
constexpr std::size_t kMaxPanels = 10000;
}  // namespace
namespace {

// Kronrod abscissae on [0, 1]; odd indices (1, 3, 5) are the Gauss nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b,
                     int depth, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  evals += 15;
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth) {
  QuadratureResult result;
  if (a == b) return result;
  if (b < a) {
    auto r = integrate_adaptive(f, b, a, abs_tol, max_depth);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Panel> panels;
  Panel first = evaluate_panel(f, a, b, 0, result.evaluations);
  double total = first.value;
  double error = first.error;
  panels.push(first);

  while (error > abs_tol) {
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= max_depth || panels.size() >= kMaxPanels || mid <= worst.a || mid >= worst.b ||
        (worst.b - worst.a) <= 4 * std::numeric_limits<double>::epsilon() *
                                   std::max(std::abs(worst.a), std::abs(worst.b))) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << error
          << " > " << abs_tol;
      throw NumericError(msg.str());
    }
    Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1, result.evaluations);
    Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1, result.evaluations);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    // Incremental updates drift; resum occasionally.
    if (panels.size() % 64 == 0) {
      std::vector<Panel> all;
      total = error = 0.0;
      while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
      }
      for (const auto& p : all) {
        total += p.value;
        error += p.error;
        panels.push(p);
      }
    }
  }

  // Final resum for a deterministic, drift-free value.
  total = 0.0;
  error = 0.0;
  std::vector<Panel> all;
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    total += p.value;
    error += p.error;
  }
  result.value = total;
  result.error = error;
  return result;
}

}  // namespace polarsl
