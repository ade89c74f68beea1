#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polarsl/measures.hpp"

namespace polarsl {

// The nonlinearity f of the semi-linear term, positive on (0, inf).
struct Nonlinearity {
  ScalarMap eval;
  ScalarMap eval_deriv;
  std::string label;
};

// f(z) = z^p.
Nonlinearity power_nonlinearity(double p);
// f(z) = z^p * log(e + z): same limits as z^p for 0 < p < 1, with a slowly
// varying factor.
Nonlinearity log_power_nonlinearity(double p);
// Cubic Hermite interpolation of tabulated (z, f, f') triples. Evaluation
// outside the table raises EvaluationError.
Nonlinearity tabulated_nonlinearity(std::vector<double> z, std::vector<double> f,
                                    std::vector<double> df);

// Radial coefficient b(r).
ScalarMap constant_coefficient(double c);
ScalarMap gaussian_coefficient(double sigma);  // exp(-r^2 / (2 sigma^2))
ScalarMap power_coefficient(double p);         // r^p
ScalarMap tabulated_coefficient(std::vector<double> r, std::vector<double> b);

struct Knot {
  double r;
  double s;
  double ds_dr;  // 1 / phi(r)
};

// s = J(r), the integral of 1/phi from r0 to r, tabulated on a knot table
// that is extended lazily toward the ends of the domain and interpolated by
// cubic Hermite segments (exact slopes 1/phi at the knots).
//
// Copies share the knot table. The table is append-only and guarded by a
// mutex, so forward/inverse may be called concurrently.
class ChangeOfVariables {
 public:
  static constexpr std::size_t kMaxKnots = 1'000'000;

  ChangeOfVariables(GeodesicMeasure measure, double r0, double tol);

  const GeodesicMeasure& measure() const { return *measure_; }
  double r0() const { return r0_; }
  double tol() const { return tol_; }

  // Throws DomainError when r is not strictly inside the measure domain or is
  // too close to a singular endpoint to be resolved.
  // Table lookup polished by quadrature of 1/phi from the nearest knot.
  double forward(double r) const;
  // Bracketed Newton on the table, then Newton steps against the same
  // quadrature forward uses. Throws DomainError if s lies outside the image of J.
  double inverse(double s) const;

  double phi(double r) const { return measure_->eval(r); }

  std::size_t knot_count() const;
  std::vector<Knot> knots() const;

 private:
  struct Table;

  double inverse_table(double s) const;

  std::shared_ptr<const GeodesicMeasure> measure_;
  double r0_;
  double tol_;
  std::shared_ptr<Table> table_;
};

ChangeOfVariables build_change_of_variables(const GeodesicMeasure& m, double r0,
                                            double tol = 1e-10);

// z'' + q(s) f(z) = 0 with q(s) = b(r(s)) phi(r(s))^2. Problems built
// directly from a coefficient q have no change of variables attached.
struct ReducedProblem {
  std::optional<ChangeOfVariables> cv;
  ScalarMap b;
  Nonlinearity f;
  ScalarMap q;

  static ReducedProblem from_coefficient(ScalarMap q, Nonlinearity f);
};

ReducedProblem assemble_reduced(const ChangeOfVariables& cv, ScalarMap b, Nonlinearity f);

}  // namespace polarsl
