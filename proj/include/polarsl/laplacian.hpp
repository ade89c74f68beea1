#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "polarsl/measures.hpp"
#include "polarsl/reduction.hpp"

namespace polarsl {

// A radial function given analytically through its first two derivatives.
struct SmoothRadial {
  ScalarMap value;
  ScalarMap d1;
  ScalarMap d2;
};

// A radial function sampled on a grid inside the measure domain.
struct RadialFunction {
  std::vector<double> grid;
  std::vector<double> values;
  std::optional<std::vector<double>> deriv_values;

  // Throws FormatError unless the grid has >= 5 strictly increasing nodes and
  // the columns agree in length.
  void validate() const;
};

// Non-divergence form: u''(r) + (phi'(r)/phi(r)) u'(r).
double radial_apply(const GeodesicMeasure& m, const SmoothRadial& u, double r);

// (1/phi)(phi u')' by staggered second differences on a uniform stencil of
// width h centred at r. Independent of radial_apply; used to cross-check the
// two forms.
double radial_apply_divergence(const GeodesicMeasure& m, const ScalarMap& u, double r,
                               double h);

struct ResidualRow {
  double r;
  double u;
  double residual;
  double forcing;  // |b phi f(u)| at the node
  bool excluded;   // phi below the singular-chart cutoff
};

struct ResidualReport {
  std::vector<ResidualRow> rows;

  // max |residual| over non-excluded nodes in the central `fraction` of the
  // grid, divided by max |b phi f(u)| over the same nodes.
  double scaled_sup_norm(double fraction = 0.9) const;
  double sup_norm(double fraction = 0.9) const;
  std::vector<double> residuals() const;
};

// Nodes where phi < kSingularCutoff * max phi are flagged as excluded.
inline constexpr double kSingularCutoff = 1e-12;

// Divergence-form residual (phi u')' + b phi f(u) on the (possibly
// non-uniform) grid of u. Interior nodes use staggered centred differences;
// the two end nodes extrapolate the flux derivative with a second-order
// one-sided stencil. Throws EvaluationError listing nodes where u <= 0.
ResidualReport divergence_residual(const GeodesicMeasure& m, const ScalarMap& b,
                                   const Nonlinearity& f, const RadialFunction& u);

// CSV with header `r,u,residual,excluded_flag`.
void write_residual_csv(std::ostream& out, const ResidualReport& report);

}  // namespace polarsl
