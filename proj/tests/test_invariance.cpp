#include <doctest.h>

#include <numbers>

#include "generators.hpp"
#include "haarlib/invariance.hpp"
#include "haarlib/suites.hpp"

using namespace haarlib;
using haarlib::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec spec(double rel_tol, int refinements, int base = 8) {
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  q.max_refinements = refinements;
  q.base_points_per_axis = base;
  return q;
}

TestFunction p_bump() { return TestFunction::polynomial(triangular_p_chart(), Point{1.2, 0.1}, Point{0.4, 0.5}, 6); }

TestFunction p_clamped() {
  return TestFunction::clamped(triangular_p_chart(), Box{{0.9, 1.3}, {-0.2, 0.2}}, Box{{0.7, 1.6}, {-0.5, 0.5}}, 6);
}

}  // namespace

TEST_SUITE("invariance") {
  TEST_CASE("identity translates give deviation zero") {
    const GroupProfile p = group_profile("p");
    const std::vector<Element> id{identity(GroupId::triangular_p())};
    const QuadratureSpec q = spec(1e-10, 6);
    CHECK(check_left_invariance(p.bumps[0], id, 1e-12, q).max_rel_deviation == 0.0);
    CHECK(check_right_invariance(p.bumps[0], id, 1e-12, q).max_rel_deviation == 0.0);
  }

  TEST_CASE("R* is invariant under scalings in [0.5, 2]") {
    Gen gen(53);
    std::vector<Element> gs;
    for (int i = 0; i < 10; ++i) gs.push_back(Element::scalar(std::exp(gen.uniform(std::log(0.5), std::log(2.0)))));
    const TestFunction f = TestFunction::polynomial(real_mult_chart(), Point{1.5}, Point{0.6}, 6);
    const CheckReport r = check_left_invariance(f, gs, 1e-6, spec(1e-12, 8));
    CHECK(r.passed);
    CHECK(r.max_rel_deviation < 1e-6);
    CHECK(r.samples == 10);
  }

  TEST_CASE("GL(2) is invariant under translates near the identity") {
    Gen gen(59);
    std::vector<Element> gs;
    for (int i = 0; i < 10; ++i) {
      Matrix m = Matrix::Identity(2, 2);
      for (int k = 0; k < 4; ++k) m(k / 2, k % 2) += gen.uniform(-0.1, 0.1);
      gs.push_back(Element::make(GroupId::gl(2), m));
    }
    const GroupProfile p = group_profile("gl2");
    const CheckReport l = check_left_invariance(p.bumps[0], gs, 1e-5, p.quadrature);
    const CheckReport r = check_right_invariance(p.bumps[0], gs, 1e-5, p.quadrature);
    CHECK(l.max_rel_deviation < 1e-5);
    CHECK(r.max_rel_deviation < 1e-5);
  }

  TEST_CASE("P: right density is right invariant, left density picks up x^2") {
    Gen gen(61);
    std::vector<Element> gs;
    for (int i = 0; i < 10; ++i) gs.push_back(triangular_p(gen.uniform(0.7, 1.4), gen.uniform(-0.3, 0.3)));
    const QuadratureSpec q = spec(1e-12, 8);
    const CheckReport ok = check_right_invariance(p_bump(), gs, 1e-6, q, Side::Right);
    CHECK(ok.passed);
    CHECK(ok.max_rel_deviation < 1e-6);

    // The substitution (x, y) -> (x a, x b + y / a) has Jacobian 1, and the
    // left density 1/x^2 changes by a^2: int f(p g) dmu_L = a^2 int f dmu_L.
    const double base = integrate(p_bump(), Side::Left, q).value;
    for (const auto& g : gs) {
      const double a = g(0, 0);
      const double moved = integrate(translate(p_bump(), g, RegularAction::Right), Side::Left, q).value;
      CHECK(moved / base == doctest::Approx(a * a).epsilon(1e-9));
    }

    const std::vector<Element> half{triangular_p(2.0, 0.0)};
    const CheckReport bad = check_right_invariance(p_bump(), half, 0.1, q, Side::Left);
    CHECK_FALSE(bad.passed);
    CHECK(bad.max_rel_deviation == doctest::Approx(3.0).epsilon(1e-8));
    const CheckReport bad_left = check_left_invariance(p_bump(), half, 0.1, q, Side::Right);
    CHECK_FALSE(bad_left.passed);
    CHECK(bad_left.max_rel_deviation > 0.1);
  }

  TEST_CASE("expected failures invert the verdict") {
    CheckReport r;
    r.tolerance = 0.1;
    r.max_rel_deviation = 0.5;
    r.decide();
    CHECK_FALSE(r.passed);
    r.expect_failure = true;
    r.decide();
    CHECK(r.passed);
    r.max_rel_deviation = 0.05;
    r.decide();
    CHECK_FALSE(r.passed);
  }

  TEST_CASE("modular function estimates on P") {
    const QuadratureSpec q = spec(1e-9, 7);
    const TestFunction f = p_clamped();
    CHECK(estimate_modular(f, identity(GroupId::triangular_p()), q) == doctest::Approx(1.0).epsilon(1e-12));
    for (double t : {-1.0, 0.5, 1.0}) {
      const double est = estimate_modular(f, triangular_p(std::exp(t), 0.0), q);
      CHECK(est == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-4));
    }
    // Unipotent elements (x = 1) have modulus 1 whatever y is.
    for (double b : {-0.3, 0.2}) CHECK(estimate_modular(f, triangular_p(1.0, b), q) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("modular estimates on unimodular groups") {
    const GroupProfile gl2 = group_profile("gl2");
    Matrix m(2, 2);
    m << 1.1, 0.08, -0.05, 0.93;
    const double est = estimate_modular(gl2.clamped[0], Element::make(GroupId::gl(2), m), gl2.modular_quadrature);
    CHECK(est == doctest::Approx(1.0).epsilon(1e-4));

    const GroupProfile rstar = group_profile("rstar");
    CHECK(estimate_modular(rstar.clamped[0], Element::scalar(-1.7), rstar.modular_quadrature) ==
          doctest::Approx(1.0).epsilon(1e-4));
  }

  TEST_CASE("closed-form modular function and det Ad") {
    Gen gen(67);
    for (int i = 0; i < 50; ++i) {
      CHECK(modular_closed_form(gen.sl2()) == 1.0);
      CHECK(det_ad(gen.sl2()) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(det_ad(gen.gl(2)) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(det_ad(gen.gl(3)) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(modular_closed_form(gen.element(GroupId::real_add(2))) == 1.0);
      CHECK(modular_closed_form(gen.element(GroupId::so2())) == 1.0);
      const double t = gen.uniform(-2, 2), y = gen.uniform(-3, 3);
      const Element g = triangular_p(std::exp(t), y);
      CHECK(modular_closed_form(g) == doctest::Approx(std::exp(-2.0 * t)));
      // Conjugation by (x, y) scales the upper-right basis vector by x^2 and
      // keeps diag(1, -1) up to an upper-right term.
      CHECK(det_ad(g) == doctest::Approx(std::exp(2.0 * t)).epsilon(1e-10));
    }
    CHECK(modular_closed_form(triangular_p(1.0, 5.0)) == 1.0);
    for (const auto& g : testing::catalog_groups()) CHECK(det_ad(identity(g)) == doctest::Approx(1.0));
  }

  TEST_CASE("right Haar integral from the left one") {
    const QuadratureSpec q = spec(1e-12, 8);
    const double via_left = right_from_left(p_bump(), q).value;
    const double direct = integrate(p_bump(), Side::Right, q).value;
    CHECK(via_left == doctest::Approx(direct).epsilon(1e-6));

    const TestFunction so2 = TestFunction::polynomial(so2_chart(), Point{1.0}, Point{0.5});
    CHECK(right_from_left(so2, q).value == integrate(so2, Side::Left, q).value);
    CHECK(right_from_left(p_bump().scaled(0.0), q).value == 0.0);
  }

  TEST_CASE("compactness: finite mass for SO(2), unbounded otherwise") {
    const QuadratureSpec q = spec(1e-12, 8);
    const CompactnessResult so2 = check_compact_finiteness(GroupId::so2(), {}, q);
    CHECK(so2.report.passed);
    CHECK(so2.masses.front() == doctest::Approx(2.0 * kPi).epsilon(1e-8));

    const CompactnessResult r1 = check_compact_finiteness(GroupId::real_add(1), {1.0, 10.0, 100.0}, q);
    REQUIRE(r1.masses.size() == 3);
    CHECK(r1.masses[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r1.masses[1] == doctest::Approx(20.0).epsilon(1e-8));
    CHECK(r1.masses[2] == doctest::Approx(200.0).epsilon(1e-8));
    CHECK_FALSE(r1.report.passed);  // 200 stays below the unboundedness threshold

    QuadratureSpec lq = spec(1e-10, 8);
    const CompactnessResult rm = check_compact_finiteness(GroupId::real_mult(), {10.0, 1e3, 1e100, 1e250}, lq);
    for (std::size_t i = 0; i < rm.scales.size(); ++i) {
      CHECK(rm.masses[i] == doctest::Approx(2.0 * std::log(rm.scales[i])).epsilon(1e-8));
    }
    CHECK(rm.report.passed);

    for (const auto& g : {GroupId::real_add(1), GroupId::real_mult(), GroupId::triangular_p(), GroupId::sl2()}) {
      CAPTURE(g.name());
      const CompactnessResult c = check_compact_finiteness(g, {}, lq);
      CHECK(c.report.passed);
      CHECK(c.masses.back() > kUnboundedMassThreshold);
      for (std::size_t i = 1; i < c.masses.size(); ++i) CHECK(c.masses[i] > c.masses[i - 1]);
    }
  }
}
