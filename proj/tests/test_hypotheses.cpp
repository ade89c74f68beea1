#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "polarsl/error.hpp"
#include "polarsl/hypotheses.hpp"

using namespace polarsl;
using std::numbers::pi;

namespace {

double summary(const CheckResult& c, const std::string& key) {
  for (const auto& [k, v] : c.evidence.summary) {
    if (k == key) return v;
  }
  FAIL("missing summary key " << key);
  return 0.0;
}

ChangeOfVariables cv_for(MeasureKind kind, int dim, double r0) {
  return build_change_of_variables(builtin_measure(kind, dim), r0);
}

}  // namespace

TEST_CASE("check_domain_unbounded: both ends diverge") {
  SUBCASE("R^2") {
    const auto cv = cv_for(MeasureKind::euclidean, 2, 1.0);
    const auto res = check_domain_unbounded(cv);
    CHECK(res.verdict == Verdict::holds);
    CHECK(summary(res, "lower_behaviour") == 1.0);
    CHECK(summary(res, "upper_behaviour") == 1.0);
    // Evidence against partial sums of the harmonic integral.
    int checked = 0;
    for (const auto& row : res.evidence.rows) {
      if (row[0] > 0 && row[2] <= 64.0) {
        CHECK(std::abs(row[3] - oracle::simpson([](double t) { return 1.0 / t; }, 1.0, row[2], 20000)) <= 1e-8);
        ++checked;
      }
    }
    CHECK(checked >= 5);
  }
  SUBCASE("S^2") {
    for (double r0 : {pi / 2, 0.4, 2.9}) {
      const auto cv = cv_for(MeasureKind::sphere, 2, r0);
      const auto res = check_domain_unbounded(cv);
      CHECK(res.verdict == Verdict::holds);
      for (const auto& row : res.evidence.rows) {
        const double exact = std::log(std::tan(row[2] / 2)) - std::log(std::tan(r0 / 2));
        CHECK(std::abs(row[3] - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  SUBCASE("flat cylinder") {
    CHECK(check_domain_unbounded(cv_for(MeasureKind::flat_cylinder, 2, 0.0)).verdict == Verdict::holds);
  }
}

TEST_CASE("check_domain_unbounded: convergent ends fail") {
  // phi = r^2: the integral of t^-2 converges at infinity.
  const auto res = check_domain_unbounded(cv_for(MeasureKind::euclidean, 3, 1.0));
  CHECK(res.verdict == Verdict::fails);
  CHECK(summary(res, "lower_behaviour") == 1.0);
  CHECK(summary(res, "upper_behaviour") == -1.0);
  CHECK(std::abs(summary(res, "upper_last_J") - 1.0) <= 1e-8);

  // 1/sinh is integrable at infinity in every dimension.
  for (int dim : {2, 3}) {
    const auto h = check_domain_unbounded(cv_for(MeasureKind::hyperbolic, dim, 1.0));
    CHECK(h.verdict == Verdict::fails);
    CHECK(summary(h, "upper_behaviour") == -1.0);
  }
}

TEST_CASE("check_linear_positive") {
  HypothesisConfig cfg;
  SUBCASE("gaussian coefficient: peak grows linearly in L") {
    const auto rp = ReducedProblem::from_coefficient([](double s) { return std::exp(-s * s); },
                                                     power_nonlinearity(0.5));
    const auto res = check_linear_positive(rp, cfg);
    CHECK(res.verdict == Verdict::inconclusive);
    REQUIRE(res.evidence.rows.size() == 3);
    for (const auto& row : res.evidence.rows) {
      const double L = row[0];
      const double exact = L * std::sqrt(pi) / 2 * std::erf(L) - (1 - std::exp(-L * L)) / 2;
      CHECK(std::abs(row[4] - exact) <= 1e-9);
      CHECK(row[1] > 0.0);
    }
    CHECK(summary(res, "all_positive") == 1.0);
    CHECK(summary(res, "sup_relative_change") > cfg.sup_stability);
  }
  SUBCASE("q = 1 never holds") {
    const auto res = check_linear_positive(
        ReducedProblem::from_coefficient(constant_coefficient(1.0), power_nonlinearity(0.5)), cfg);
    CHECK(res.verdict != Verdict::holds);
    for (const auto& row : res.evidence.rows) {
      CHECK(row[2] == doctest::Approx(row[0] * row[0] / 2).epsilon(1e-10));
    }
  }
  SUBCASE("q = 0 is not strictly positive") {
    const auto res = check_linear_positive(
        ReducedProblem::from_coefficient(constant_coefficient(0.0), power_nonlinearity(0.5)), cfg);
    CHECK(res.verdict == Verdict::fails);
    CHECK(summary(res, "all_positive") == 0.0);
  }
  SUBCASE("b is sampled when a change of variables is attached") {
    const auto rp = assemble_reduced(cv_for(MeasureKind::sphere, 2, pi / 2), constant_coefficient(2.0),
                                     power_nonlinearity(0.5));
    const auto res = check_linear_positive(rp, cfg);
    CHECK(summary(res, "b_min") == 2.0);
    CHECK(summary(res, "b_holder_quotient") == 0.0);
  }
  SUBCASE("configuration errors") {
    const auto rp = ReducedProblem::from_coefficient(constant_coefficient(1.0), power_nonlinearity(0.5));
    cfg.L_list = {4.0, 8.0};
    CHECK_THROWS_AS(check_linear_positive(rp, cfg), DomainError);
    cfg.L_list = {4.0, 2.0, 8.0};
    CHECK_THROWS_AS(check_linear_positive(rp, cfg), DomainError);
  }
  SUBCASE("solver failure is inconclusive") {
    const auto rp = ReducedProblem::from_coefficient([](double s) { return s; }, power_nonlinearity(0.5));
    const auto res = check_linear_positive(rp, cfg);
    CHECK(res.verdict == Verdict::inconclusive);
    CHECK(res.evidence.note.find("linear solve failed") != std::string::npos);
    CHECK_FALSE(res.evidence.summary.empty());
  }
}

TEST_CASE("check_nonlinearity_limits: power-law sweep") {
  for (double p : {0.1, 0.5, 0.9, 1.0, 1.5, 2.0}) {
    CAPTURE(p);
    const auto res = check_nonlinearity_limits(power_nonlinearity(p));
    CHECK((res.verdict == Verdict::holds) == (p > 0.0 && p < 1.0));
    if (p >= 1.0) CHECK(res.verdict == Verdict::fails);
  }
  const auto sqrt_res = check_nonlinearity_limits(power_nonlinearity(0.5));
  const auto& rows = sqrt_res.evidence.rows;
  REQUIRE(rows.size() == 20);
  CHECK(rows[9][2] == doctest::Approx(1e-10).epsilon(1e-15));
  CHECK(rows[9][3] == doctest::Approx(1e5).epsilon(1e-12));
  CHECK(rows[19][3] == doctest::Approx(1e-5).epsilon(1e-12));

  const auto square = check_nonlinearity_limits(power_nonlinearity(2.0));
  CHECK(summary(square, "small_tail") == -1.0);
}

TEST_CASE("check_nonlinearity_limits: other shapes") {
  CHECK(check_nonlinearity_limits(log_power_nonlinearity(0.5)).verdict == Verdict::holds);
  CHECK(check_nonlinearity_limits(log_power_nonlinearity(1.0)).verdict == Verdict::fails);
  // A table cannot be evaluated on the tails.
  const auto table = tabulated_nonlinearity({0.5, 1.0, 2.0, 3.0}, {0.5, 1.0, 1.5, 2.0}, {1, 1, 0.5, 0.5});
  const auto res = check_nonlinearity_limits(table);
  CHECK(res.verdict == Verdict::inconclusive);
  CHECK(res.evidence.note.find("could not be evaluated") != std::string::npos);
}

TEST_CASE("aggregate") {
  const Verdict all[] = {Verdict::holds, Verdict::fails, Verdict::inconclusive};
  for (Verdict a : all) {
    for (Verdict b : all) {
      for (Verdict c : all) {
        const Verdict v = aggregate(a, b, c);
        const bool all_hold = a == Verdict::holds && b == Verdict::holds && c == Verdict::holds;
        const bool any_fail = a == Verdict::fails || b == Verdict::fails || c == Verdict::fails;
        CHECK((v == Verdict::holds) == all_hold);
        CHECK((v == Verdict::fails) == any_fail);
      }
    }
  }
}

TEST_CASE("verify_all: composed examples") {
  SUBCASE("R^2, b = 1, f = sqrt") {
    const auto rp = assemble_reduced(cv_for(MeasureKind::euclidean, 2, 1.0), constant_coefficient(1.0),
                                     power_nonlinearity(0.5));
    const auto rep = verify_all(rp);
    CHECK(rep.h1.verdict == Verdict::holds);
    CHECK(rep.h3.verdict == Verdict::holds);
    CHECK(rep.overall != Verdict::fails);
  }
  SUBCASE("flat cylinder, f = q") {
    const auto rp = assemble_reduced(cv_for(MeasureKind::flat_cylinder, 2, 0.0), constant_coefficient(1.0),
                                     power_nonlinearity(1.0));
    const auto rep = verify_all(rp);
    CHECK(rep.h3.verdict == Verdict::fails);
    CHECK(rep.overall == Verdict::fails);
  }
  SUBCASE("phi = r^2") {
    const auto rp = assemble_reduced(cv_for(MeasureKind::euclidean, 3, 1.0), constant_coefficient(1.0),
                                     power_nonlinearity(0.5));
    const auto rep = verify_all(rp);
    CHECK(rep.h1.verdict == Verdict::fails);
    CHECK(rep.overall == Verdict::fails);
  }
  SUBCASE("no change of variables") {
    const auto rp = ReducedProblem::from_coefficient(constant_coefficient(1.0), power_nonlinearity(0.5));
    const auto rep = verify_all(rp);
    CHECK(rep.h1.verdict == Verdict::inconclusive);
    CHECK_FALSE(rep.h1.evidence.summary.empty());
  }
}

TEST_CASE("property: every verdict carries numeric evidence") {
  for (auto kind : {MeasureKind::euclidean, MeasureKind::sphere, MeasureKind::hyperbolic,
                    MeasureKind::flat_cylinder}) {
    for (double p : {0.5, 1.0}) {
      const double r0 = kind == MeasureKind::flat_cylinder ? 0.0 : 1.0;
      const auto rep = verify_all(
          assemble_reduced(cv_for(kind, 2, r0), gaussian_coefficient(1.0), power_nonlinearity(p)));
      for (const auto* c : {&rep.h1, &rep.h2, &rep.h3}) CHECK_FALSE(c->evidence.summary.empty());
      CHECK(rep.overall == aggregate(rep.h1.verdict, rep.h2.verdict, rep.h3.verdict));
    }
  }
}

TEST_CASE("property: tightening thresholds never turns holds into fails") {
  HypothesisConfig loose;
  HypothesisConfig tight;
  tight.divergence_threshold = 35.0;
  tight.divergence_gap = 1e-2;
  tight.sup_stability = 1e-5;
  tight.boundary_ratio = 0.1;
  tight.small_ratio_threshold = 1e6;
  tight.large_ratio_threshold = 1e-6;
  tight.slope_holds = 0.2;

  std::vector<Nonlinearity> fs;
  for (double p : {0.05, 0.1, 0.5, 0.85, 0.9, 0.97, 1.0, 2.0}) fs.push_back(power_nonlinearity(p));
  fs.push_back(log_power_nonlinearity(0.5));
  fs.push_back(log_power_nonlinearity(0.95));
  for (const auto& f : fs) {
    const Verdict a = check_nonlinearity_limits(f, loose).verdict;
    const Verdict b = check_nonlinearity_limits(f, tight).verdict;
    CHECK_FALSE((a == Verdict::holds && b == Verdict::fails));
    if (a == Verdict::holds) CHECK(b != Verdict::fails);
  }
  for (auto kind : {MeasureKind::euclidean, MeasureKind::sphere, MeasureKind::hyperbolic,
                    MeasureKind::flat_cylinder}) {
    const auto cv = cv_for(kind, 2, kind == MeasureKind::flat_cylinder ? 0.0 : 1.0);
    const Verdict a = check_domain_unbounded(cv, loose).verdict;
    const Verdict b = check_domain_unbounded(cv, tight).verdict;
    CHECK_FALSE((a == Verdict::holds && b == Verdict::fails));
  }
  for (double c : {0.0, 1.0}) {
    const auto rp = ReducedProblem::from_coefficient(constant_coefficient(c), power_nonlinearity(0.5));
    const Verdict a = check_linear_positive(rp, loose).verdict;
    const Verdict b = check_linear_positive(rp, tight).verdict;
    CHECK_FALSE((a == Verdict::holds && b == Verdict::fails));
  }
}

TEST_CASE("property: reports are deterministic and well formed") {
  auto render = [] {
    const auto rp = assemble_reduced(cv_for(MeasureKind::sphere, 2, pi / 2), constant_coefficient(1.0),
                                     power_nonlinearity(0.5));
    const auto rep = verify_all(rp);
    std::ostringstream out;
    write_report(out, rep);
    for (const auto* c : {&rep.h1, &rep.h2, &rep.h3}) write_evidence_csv(out, *c);
    return out.str();
  };
  const std::string a = render(), b = render();
  CHECK(a == b);
  CHECK(a.rfind("overall: ", 0) == 0);
  for (const char* section : {"[h1_domain_unbounded]", "[h2_linear_positive]", "[h3_nonlinearity_limits]"}) {
    CHECK(a.find(section) != std::string::npos);
  }
  CHECK(a.find("side,k,r,J,gap\n") != std::string::npos);
  CHECK(a.find("tail,k,q,ratio,log_slope\n") != std::string::npos);
}
