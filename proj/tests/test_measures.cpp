#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "polarsl/error.hpp"
#include "polarsl/measures.hpp"

using namespace polarsl;
using std::numbers::pi;

namespace {

ProfileCurve quarter_circle(int n) {
  std::vector<ProfileSample> s;
  for (int i = 0; i <= n; ++i) {
    const double t = 0.5 * pi * i / n;
    s.push_back({t, std::sin(t), std::cos(t)});
  }
  return ProfileCurve(std::move(s));
}

ProfileCurve sphere_profile(int n) {
  std::vector<ProfileSample> s;
  for (int i = 0; i <= n; ++i) {
    const double t = pi * i / n;
    s.push_back({t, std::sin(t), std::cos(t)});
  }
  return ProfileCurve(std::move(s));
}

}  // namespace

TEST_CASE("builtin measures: closed-form values") {
  CHECK(eval_measure(builtin_measure(MeasureKind::euclidean, 2, true), 1.0).phi ==
        doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(eval_measure(builtin_measure(MeasureKind::sphere, 2, false), pi / 2).phi == 1.0);
  const auto flat = builtin_measure(MeasureKind::flat_cylinder, 2, false);
  for (double r : {-100.0, -1.0, 0.0, 3.5, 1e6}) {
    CHECK(eval_measure(flat, r).phi == 1.0);
    CHECK(eval_measure(flat, r).dphi == 0.0);
  }
  // |S^2| = 4 pi
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-14));
}

TEST_CASE("builtin measures reject dim < 2") {
  CHECK_THROWS_AS(builtin_measure(MeasureKind::euclidean, 1), DomainError);
  CHECK_THROWS_AS(builtin_measure(MeasureKind::sphere, 0), DomainError);
  CHECK_THROWS_AS(parse_measure_kind("torus"), DomainError);
}

TEST_CASE("eval_measure values and open-domain errors") {
  const auto e3 = builtin_measure(MeasureKind::euclidean, 3);
  const auto v = eval_measure(e3, 2.0);
  CHECK(v.phi == 4.0);
  CHECK(v.dphi == 4.0);

  const auto s2 = builtin_measure(MeasureKind::sphere, 2);
  CHECK_THROWS_AS(eval_measure(s2, pi), DomainError);
  CHECK_THROWS_AS(eval_measure(s2, 0.0), DomainError);
  CHECK_THROWS_AS(eval_measure(e3, -1.0), DomainError);
  CHECK_THROWS_AS(eval_measure(e3, std::nan("")), DomainError);

  const auto h2 = builtin_measure(MeasureKind::hyperbolic, 2);
  const auto hv = eval_measure(h2, 1.0);
  CHECK(hv.phi == doctest::Approx(oracle::sinh_series(1.0)).epsilon(1e-14));
  CHECK(hv.dphi == doctest::Approx(oracle::cosh_series(1.0)).epsilon(1e-14));
  CHECK(hv.phi == doctest::Approx(1.175201).epsilon(1e-6));
  CHECK(hv.dphi == doctest::Approx(1.543081).epsilon(1e-6));
}

TEST_CASE("property: builtin measures are positive with consistent derivatives") {
  std::mt19937_64 rng(20261016);
  for (auto kind : {MeasureKind::euclidean, MeasureKind::sphere, MeasureKind::hyperbolic,
                    MeasureKind::flat_cylinder}) {
    for (int dim : {2, 3, 5}) {
      for (bool normalize : {false, true}) {
        const auto m = builtin_measure(kind, dim, normalize);
        const double lo = m.lo.unbounded ? -10.0 : m.lo.value;
        const double hi = m.hi.unbounded ? 10.0 : m.hi.value;
        std::uniform_real_distribution<double> pick(lo, hi);
        for (int i = 0; i < 100; ++i) {
          double r = pick(rng);
          if (!m.contains(r)) continue;
          const double h = 1e-5 * std::max(1.0, std::abs(r));
          if (!m.contains(r - h) || !m.contains(r + h)) continue;
          const auto [phi, dphi] = eval_measure(m, r);
          CHECK(phi > 0.0);
          const double cd = (m.eval(r + h) - m.eval(r - h)) / (2 * h);
          CHECK(std::abs(dphi - cd) / std::max(1.0, std::abs(dphi)) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("profile curve validation") {
  SUBCASE("non-monotone t") {
    std::vector<ProfileSample> s{{0, 1, 0}, {1, 1, 1}, {0.5, 1, 2}, {2, 1, 3}, {3, 1, 4}};
    CHECK_THROWS_AS(ProfileCurve{s}, FormatError);
  }
  SUBCASE("duplicate point") {
    std::vector<ProfileSample> s{{0, 1, 0}, {1, 1, 1}, {2, 1, 1}, {3, 1, 3}, {4, 1, 4}};
    CHECK_THROWS_AS(ProfileCurve{s}, FormatError);
  }
  SUBCASE("reading from text") {
    std::istringstream in("# sphere\n0 0 1\n0.5 0.479425538604203 0.877582561890373 # mid\n\n"
                          "1 0.841470984807897 0.54030230586814\n1.5 0.997494986604054 "
                          "0.0707372016677029\n");
    const auto c = read_profile(in);
    CHECK(c.samples().size() == 4);
    CHECK(c.samples()[1].t == 0.5);
    std::istringstream bad("0 1\n");
    CHECK_THROWS_AS(read_profile(bad), FormatError);
    std::istringstream extra("0 1 2 3\n");
    CHECK_THROWS_AS(read_profile(extra), FormatError);
  }
}

TEST_CASE("reparametrize_arc_length") {
  SUBCASE("unit-speed quarter circle is left unchanged") {
    const auto c = quarter_circle(2000);
    const auto out = reparametrize_arc_length(c);
    for (std::size_t i = 0; i < c.samples().size(); ++i) {
      CHECK(std::abs(out.samples()[i].t - c.samples()[i].t) <= 1e-10);
      CHECK(out.samples()[i].x == c.samples()[i].x);
      CHECK(out.samples()[i].z == c.samples()[i].z);
    }
  }
  SUBCASE("quarter circle with quadratic parameter spacing") {
    const int n = 2000;
    const double umax = std::sqrt(0.5 * pi);
    std::vector<ProfileSample> s;
    for (int i = 0; i <= n; ++i) {
      const double u = umax * i / n;
      s.push_back({u, std::sin(u * u), std::cos(u * u)});
    }
    const auto out = reparametrize_arc_length(ProfileCurve(s));
    const double oracle_len = oracle::polyline_length([](double u) { return std::sin(u * u); },
                                                      [](double u) { return std::cos(u * u); },
                                                      0.0, umax, 1'000'000);
    CHECK(oracle_len == doctest::Approx(0.5 * pi).epsilon(1e-10));
    CHECK(std::abs(out.length() - oracle_len) <= 1e-6);
    CHECK(std::abs(out.t_max() - out.t_min() - oracle_len) <= 1e-6);
    for (std::size_t i = 1; i + 1 < out.samples().size(); ++i) {
      CHECK(std::abs(out.speed(out.samples()[i].t) - 1.0) <= 1e-6);
    }
  }
  SUBCASE("straight segment of length 2") {
    std::vector<ProfileSample> s;
    for (int i = 0; i <= 10; ++i) s.push_back({0.1 * i, 1.0, 0.2 * i});
    const auto out = reparametrize_arc_length(ProfileCurve(s));
    CHECK(out.length() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.t_max() - out.t_min() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.speed(0.77) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("idempotent on unit-speed input") {
    const auto once = reparametrize_arc_length(quarter_circle(2000));
    const auto twice = reparametrize_arc_length(once);
    for (std::size_t i = 0; i < once.samples().size(); ++i) {
      CHECK(std::abs(once.samples()[i].t - twice.samples()[i].t) <= 1e-10);
    }
  }
}

TEST_CASE("measure_from_profile") {
  SUBCASE("sphere profile matches the builtin sphere") {
    const auto m = measure_from_profile(sphere_profile(2000));
    const auto s2 = builtin_measure(MeasureKind::sphere, 2);
    CHECK(eval_measure(m, pi / 2).phi == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i <= 50; ++i) {
      const double t = pi * i / 51.0;
      CHECK(std::abs(m.eval(t) - s2.eval(t)) <= 1e-6);
      CHECK(std::abs(m.eval_deriv(t) - s2.eval_deriv(t)) <= 1e-6);
    }
    CHECK_THROWS_AS(eval_measure(m, pi), DomainError);
  }
  SUBCASE("cylinder and cone") {
    std::vector<ProfileSample> cyl, cone;
    for (int i = 0; i <= 20; ++i) {
      cyl.push_back({0.1 * i, 1.0, 0.1 * i});
      cone.push_back({0.05 * i, 0.05 * i, 0.0});
    }
    const auto mc = measure_from_profile(ProfileCurve(cyl));
    CHECK(mc.eval(0.3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(mc.eval_deriv(1.7)) <= 1e-12);
    const auto mk = measure_from_profile(ProfileCurve(cone));
    CHECK(mk.eval(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mk.eval_deriv(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("interior zero of x is rejected") {
    std::vector<ProfileSample> s;
    for (int i = 0; i <= 10; ++i) s.push_back({0.1 * i, std::abs(0.1 * i - 0.5), 0.1 * i});
    CHECK_THROWS_AS(measure_from_profile(ProfileCurve(s)), DomainError);
  }
}
