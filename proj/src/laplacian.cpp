#include "polarsl/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "polarsl/csv.hpp"
#include "polarsl/error.hpp"

namespace polarsl {

void RadialFunction::validate() const {
  if (grid.size() < 5) throw FormatError("radial function: at least 5 grid points required");
  if (values.size() != grid.size()) throw FormatError("radial function: values/grid size mismatch");
  if (deriv_values && deriv_values->size() != grid.size()) {
    throw FormatError("radial function: derivative/grid size mismatch");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw FormatError("radial function: grid not strictly increasing at index " +
                        std::to_string(i));
    }
  }
}

double radial_apply(const GeodesicMeasure& m, const SmoothRadial& u, double r) {
  const auto [phi, dphi] = eval_measure(m, r);
  return u.d2(r) + (dphi / phi) * u.d1(r);
}

double radial_apply_divergence(const GeodesicMeasure& m, const ScalarMap& u, double r,
                               double h) {
  const double phi = eval_measure(m, r).phi;
  const double plus = eval_measure(m, r + 0.5 * h).phi * (u(r + h) - u(r)) / h;
  const double minus = eval_measure(m, r - 0.5 * h).phi * (u(r) - u(r - h)) / h;
  return (plus - minus) / (h * phi);
}

ResidualReport divergence_residual(const GeodesicMeasure& m, const ScalarMap& b,
                                   const Nonlinearity& f, const RadialFunction& u) {
  u.validate();
  const auto& r = u.grid;
  const auto& v = u.values;
  const std::size_t n = r.size();

  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0.0)) bad.push_back(i);
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "divergence_residual: f is not defined at u <= 0; offending nodes:";
    for (std::size_t k = 0; k < bad.size() && k < 20; ++k) msg << ' ' << bad[k] << "(r=" << r[bad[k]] << ')';
    if (bad.size() > 20) msg << " ... (" << bad.size() << " total)";
    throw EvaluationError(msg.str());
  }

  // (phi u')' at interior nodes from fluxes at cell midpoints.
  std::vector<double> div(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double mp = 0.5 * (r[i] + r[i + 1]);
    const double mm = 0.5 * (r[i - 1] + r[i]);
    const double flux_p = eval_measure(m, mp).phi * (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
    const double flux_m = eval_measure(m, mm).phi * (v[i] - v[i - 1]) / (r[i] - r[i - 1]);
    div[i] = (flux_p - flux_m) / (mp - mm);
  }
  // Quadratic extrapolation from the three nearest interior nodes.
  auto extrapolate = [&](std::size_t at, std::size_t a, std::size_t b2, std::size_t c) {
    const double x = r[at];
    const double la = (x - r[b2]) * (x - r[c]) / ((r[a] - r[b2]) * (r[a] - r[c]));
    const double lb = (x - r[a]) * (x - r[c]) / ((r[b2] - r[a]) * (r[b2] - r[c]));
    const double lc = (x - r[a]) * (x - r[b2]) / ((r[c] - r[a]) * (r[c] - r[b2]));
    return la * div[a] + lb * div[b2] + lc * div[c];
  };
  div[0] = extrapolate(0, 1, 2, 3);
  div[n - 1] = extrapolate(n - 1, n - 2, n - 3, n - 4);

  std::vector<double> phis(n);
  for (std::size_t i = 0; i < n; ++i) phis[i] = eval_measure(m, r[i]).phi;
  const double phi_max = *std::max_element(phis.begin(), phis.end());

  ResidualReport report;
  report.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double source = b(r[i]) * phis[i] * f.eval(v[i]);
    report.rows.push_back({r[i], v[i], div[i] + source, std::abs(source),
                           phis[i] < kSingularCutoff * phi_max});
  }
  return report;
}

namespace {

template <class Fn>
void for_central(const std::vector<ResidualRow>& rows, double fraction, Fn&& fn) {
  const std::size_t n = rows.size();
  const auto skip = static_cast<std::size_t>(std::floor(0.5 * (1.0 - fraction) * n));
  for (std::size_t i = skip; i + skip < n; ++i) {
    if (!rows[i].excluded) fn(rows[i]);
  }
}

}  // namespace

double ResidualReport::sup_norm(double fraction) const {
  double worst = 0.0;
  for_central(rows, fraction, [&](const ResidualRow& row) {
    worst = std::max(worst, std::abs(row.residual));
  });
  return worst;
}

double ResidualReport::scaled_sup_norm(double fraction) const {
  double scale = 0.0;
  for_central(rows, fraction, [&](const ResidualRow& row) { scale = std::max(scale, row.forcing); });
  const double sup = sup_norm(fraction);
  return scale > 0.0 ? sup / scale : sup;
}

std::vector<double> ResidualReport::residuals() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.residual);
  return out;
}

void write_residual_csv(std::ostream& out, const ResidualReport& report) {
  CsvWriter csv(out, {"r", "u", "residual", "excluded_flag"});
  for (const auto& row : report.rows) {
    csv.row({row.r, row.u, row.residual, row.excluded ? 1.0 : 0.0});
  }
}

}  // namespace polarsl
