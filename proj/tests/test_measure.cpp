#include <doctest.h>

#include <numbers>

#include "generators.hpp"
#include "haarlib/measure.hpp"
#include "simpson.hpp"

using namespace haarlib;
using haarlib::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec spec(double rel_tol = 1e-12, int refinements = 8) {
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  q.max_refinements = refinements;
  return q;
}

/// Bumps near the identity of every catalog group, in the default chart.
std::vector<TestFunction> identity_bumps(double radius_scale, const std::vector<TestFunction>* same_charts = nullptr) {
  std::vector<TestFunction> out;
  for (const auto& g : testing::catalog_groups()) {
    if (g.kind == GroupKind::GL && g.n == 3) continue;
    const ChartPtr chart = same_charts ? (*same_charts)[out.size()].chart() : default_chart(g);
    const Point c = chart->from_element(identity(g));
    Point r(c.size(), 0.3 * radius_scale);
    out.push_back(TestFunction::polynomial(chart, c, r, 4));
  }
  return out;
}

}  // namespace

TEST_SUITE("measure") {
  TEST_CASE("gauss-legendre is exact on polynomials of degree 2n - 1") {
    for (int n : {4, 8, 16}) {
      const GaussRule& r = gauss_legendre(n);
      REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
      for (int deg = 0; deg <= 2 * n - 1; ++deg) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
        const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
      }
    }
  }

  TEST_CASE("quadrature spec validation") {
    QuadratureSpec q;
    CHECK_NOTHROW(q.validate());
    q.rel_tol = 1.0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = QuadratureSpec{};
    q.base_points_per_axis = 3;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = QuadratureSpec{};
    q.mc_samples = 0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
  }

  TEST_CASE("non-convergence is reported") {
    QuadratureSpec q = spec(1e-14, 1);
    q.base_points_per_axis = 4;
    auto kink = [](const Point& p) { return std::sqrt(std::abs(p[0] - 0.3)); };
    CHECK_THROWS_AS(integrate_box(kink, Box{{0.0, 1.0}}, q), ConvergenceError);
  }

  TEST_CASE("integrate_box agrees with simpson on a smooth integrand") {
    auto f = [](const Point& p) { return std::exp(-p[0] * p[0]) * std::cos(3 * p[0]); };
    const double ref = testing::adaptive_simpson([&](double x) { return f(Point{x}); }, -2.0, 1.5, 1e-13);
    CHECK(integrate_box(f, Box{{-2.0, 1.5}}, spec()).value == doctest::Approx(ref).epsilon(1e-11));
  }

  TEST_CASE("geometric cuts bound the ratio of neighbours") {
    for (double hi : {2.0, 10.0, 1e6, 1e250}) {
      // Interior cut points only; the endpoints close the partition.
      const auto cuts = geometric_cuts(1.0 / hi, hi, 2.0);
      REQUIRE(!cuts.empty());
      std::vector<double> c{1.0 / hi};
      c.insert(c.end(), cuts.begin(), cuts.end());
      c.push_back(hi);
      for (std::size_t i = 1; i < c.size(); ++i) {
        CHECK(c[i] > c[i - 1]);
        CHECK(c[i] / c[i - 1] <= 2.0 * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("pairwise sum and counter rng") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    CHECK(pairwise_sum(v) == 499500.0);

    const CounterRng a(42, 7), b(42, 7), c(42, 8);
    int differ = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      CHECK(a.bits(i) == b.bits(i));
      const double u = a.uniform(i);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      differ += a.bits(i) != c.bits(i);
    }
    CHECK(differ == 1000);
  }

  TEST_CASE("urysohn bump examples") {
    const ChartPtr rm = real_mult_chart();
    const TestFunction f = urysohn_bump(rm, Box{{1.0, 3.0}}, Box{{0.5, 3.5}});
    CHECK(f(Point{2.0}) == doctest::Approx(1.0));
    CHECK(f(Point{0.4}) == 0.0);
    for (double x : {1.0, 1.5, 2.5, 3.0}) CHECK(f(Point{x}) > 0.0);
    CHECK_THROWS_AS(urysohn_bump(rm, Box{{1.0, 3.0}}, Box{{1.0, 3.0}}), DomainError);
    CHECK_THROWS_AS(urysohn_bump(rm, Box{{1.0, 3.0}}, Box{{1.0, 3.0}}, true), DomainError);
    // Support within the singular margin of x = 0.
    CHECK_THROWS_AS(urysohn_bump(rm, Box{{0.2, 0.3}}, Box{{0.0005, 0.5}}), DomainError);
  }

  TEST_CASE("bumps vanish on the boundary of U and clamped bumps are 1 on K") {
    const ChartPtr chart = real_add_chart(2);
    const Box K{{-0.5, 0.25}, {1.0, 1.5}}, U{{-1.0, 1.0}, {0.0, 2.5}};
    Gen gen(41);
    for (bool clamped : {false, true}) {
      const TestFunction f = urysohn_bump(chart, K, U, clamped, 3);
      for (int i = 0; i < 100; ++i) {
        // A random point on a random face of U.
        Point p{gen.uniform(U[0].lo, U[0].hi), gen.uniform(U[1].lo, U[1].hi)};
        const std::size_t axis = static_cast<std::size_t>(gen.integer(0, 1));
        p[axis] = gen.coin() ? U[axis].lo : U[axis].hi;
        CHECK(f(p) == 0.0);
        const Point inside{gen.uniform(U[0].lo, U[0].hi), gen.uniform(U[1].lo, U[1].hi)};
        CHECK(f(inside) >= 0.0);
        CHECK(f(inside) <= 1.0);
        const Point k{gen.uniform(K[0].lo, K[0].hi), gen.uniform(K[1].lo, K[1].hi)};
        CHECK(f(k) > 0.0);
        if (clamped) CHECK(f(k) == 1.0);
      }
    }
  }

  TEST_CASE("clamped bump on R matches the simpson oracle") {
    const ChartPtr chart = real_add_chart(1);
    const TestFunction f = urysohn_bump(chart, Box{{0.0, 1.0}}, Box{{-1.0, 2.0}}, true, 2);
    const std::vector<double> breaks{-1.0, 0.0, 1.0, 2.0};
    const double oracle = testing::piecewise_simpson([&](double x) { return f(Point{x}); }, breaks, 1e-12);
    CHECK(integrate(f, Side::Left, spec()).value == doctest::Approx(oracle).epsilon(1e-8));

    QuadratureSpec q = spec();
    q.mc_samples = 400000;
    q.seed = 9;
    const IntegralResult mc = mc_integrate(f, Side::Left, q);
    CHECK(mc.error_estimate > 0.0);
    CHECK(std::abs(mc.value - oracle) <= 4.0 * mc.error_estimate);
    const IntegralResult again = mc_integrate(f, Side::Left, q);
    CHECK(again.value == mc.value);
    CHECK(again.error_estimate == mc.error_estimate);
  }

  TEST_CASE("constant bump on the full circle integrates to 2 pi") {
    const ChartPtr chart = so2_chart();
    const TestFunction f = TestFunction::clamped(chart, Box{{0.0, 2.0 * kPi}}, Box{{0.0, 2.0 * kPi}});
    for (double t : {0.0, 1.0, 3.0, 6.2}) CHECK(f(Point{t}) == 1.0);
    CHECK(integrate(f, Side::Left, spec()).value == doctest::Approx(2.0 * kPi).epsilon(1e-8));
  }

  TEST_CASE("polynomial bumps match the closed-form moment") {
    const ChartPtr chart = real_add_chart(2);
    const TestFunction f = TestFunction::polynomial(chart, Point{0.5, -1.0}, Point{0.7, 1.3}, 3, 2.5);
    const double exact = 2.5 * 0.7 * 1.3 * testing::bump_moment(3) * testing::bump_moment(3);
    CHECK(integrate(f, Side::Left, spec()).value == doctest::Approx(exact).epsilon(1e-12));
  }

  TEST_CASE("density-weighted integral on R* matches simpson") {
    const TestFunction f = TestFunction::polynomial(real_mult_chart(), Point{2.0}, Point{0.5}, 4);
    const double oracle = testing::adaptive_simpson([&](double x) { return f(Point{x}) / x; }, 1.5, 2.5, 1e-13);
    CHECK(integrate(f, Side::Left, spec()).value == doctest::Approx(oracle).epsilon(1e-10));
  }

  TEST_CASE("zero function integrates to exactly zero") {
    const ChartPtr chart = real_add_chart(2);
    const CompactFunction z = zero_function(chart, Box{{0.0, 1.0}, {0.0, 1.0}});
    CHECK(integrate(z, Side::Left, spec()).value == 0.0);
    const IntegralResult mc = mc_integrate(z, Side::Left, spec());
    CHECK(mc.value == 0.0);
    CHECK(mc.error_estimate == 0.0);
  }

  TEST_CASE("translate examples") {
    const ChartPtr r1 = real_add_chart(1);
    const TestFunction f = TestFunction::polynomial(r1, Point{0.0}, Point{1.0});
    const CompactFunction same = translate(f, identity(GroupId::real_add(1)), RegularAction::Left);
    for (double x = -1.2; x <= 1.2; x += 0.1) CHECK(same(Point{x}) == f(Point{x}));

    const CompactFunction shifted = translate(f, Element::vector({5.0}), RegularAction::Left);
    CHECK(shifted.support[0].lo <= 4.0);
    CHECK(shifted.support[0].hi >= 6.0);
    for (double x = 3.0; x <= 7.0; x += 0.05) CHECK(shifted(Point{x}) == doctest::Approx(f(Point{x - 5.0})));
    CHECK(shifted(Point{5.0}) == doctest::Approx(1.0));

    const ChartPtr rm = real_mult_chart();
    const TestFunction h = urysohn_bump(rm, Box{{1.2, 2.8}}, Box{{1.0, 3.0}});
    const CompactFunction scaled = translate(h, Element::scalar(2.0), RegularAction::Left);
    CHECK(scaled.support[0].lo <= 2.0);
    CHECK(scaled.support[0].hi >= 6.0);
    for (double x = 0.5; x <= 8.0; x += 0.01) {
      const double v = scaled(Point{x});
      if (x <= 2.0 || x >= 6.0) CHECK(v == 0.0);
      CHECK(v == doctest::Approx(h(Point{x / 2.0})));
    }

    const TestFunction edge = TestFunction::polynomial(real_add_chart(1, 5.0), Point{4.0}, Point{0.5});
    CHECK_THROWS_AS(translate(edge, Element::vector({10.0}), RegularAction::Left), DomainError);
  }

  TEST_CASE("translated integrals keep the left Haar measure") {
    const TestFunction f = TestFunction::polynomial(triangular_p_chart(), Point{1.0, 0.0}, Point{0.4, 0.5}, 4);
    const double base = integrate(f, Side::Left, spec(1e-12, 8)).value;
    const CompactFunction moved = translate(f, triangular_p(1.7, -0.4), RegularAction::Left);
    CHECK(integrate(moved, Side::Left, spec(1e-12, 8)).value == doctest::Approx(base).epsilon(1e-9));
  }

  TEST_CASE("linearity on random non-negative coefficients") {
    Gen gen(43);
    const auto bumps = identity_bumps(1.0);
    const auto wide = identity_bumps(1.4, &bumps);
    QuadratureSpec q = spec(1e-11, 7);
    for (std::size_t i = 0; i < bumps.size(); ++i) {
      CAPTURE(bumps[i].chart()->name());
      if (bumps[i].chart()->dim() > 3) q = spec(1e-9, 4);
      const double a = gen.uniform(0, 3), b = gen.uniform(0, 3);
      const CompactFunction f = as_compact(bumps[i]), g = as_compact(wide[i]);
      const double combined = integrate(linear_combination(a, f, b, g), Side::Left, q).value;
      const double split = a * integrate(f, Side::Left, q).value + b * integrate(g, Side::Left, q).value;
      CHECK(combined == doctest::Approx(split).epsilon(1e-9));
    }
  }

  TEST_CASE("positivity on every catalog group") {
    for (const auto& f : identity_bumps(1.0)) {
      CAPTURE(f.chart()->name());
      QuadratureSpec q = spec(1e-6, 4);
      CHECK(integrate(f, Side::Left, q).value > 0.0);
      CHECK(integrate(f, Side::Right, q).value > 0.0);
    }
  }

  TEST_CASE("enlarging U with K fixed never decreases the clamped integral") {
    Gen gen(47);
    const ChartPtr rm = real_mult_chart();
    const ChartPtr r2 = real_add_chart(2);
    double prev_rm = 0.0, prev_r2 = 0.0;
    double grow = 0.0;
    for (int i = 0; i < 20; ++i) {
      grow += gen.uniform(0.01, 0.1);
      const TestFunction a = urysohn_bump(rm, Box{{1.0, 2.0}}, Box{{1.0 - 0.9 * grow / 3, 2.0 + grow}}, true, 3);
      const TestFunction b =
          urysohn_bump(r2, Box{{0.0, 1.0}, {0.0, 1.0}}, Box{{-grow, 1.0 + grow}, {-0.5 * grow, 1.0 + grow}}, true, 3);
      const double va = integrate(a, Side::Left, spec()).value;
      const double vb = integrate(b, Side::Left, spec()).value;
      CHECK(va >= prev_rm);
      CHECK(vb >= prev_r2);
      prev_rm = va;
      prev_r2 = vb;
    }
  }

  TEST_CASE("monte carlo agrees with quadrature on every catalog group") {
    for (const auto& f : identity_bumps(1.0)) {
      CAPTURE(f.chart()->name());
      QuadratureSpec q = spec(1e-8, 5);
      q.mc_samples = 200000;
      q.seed = 5;
      const double quad = integrate(f, Side::Left, q).value;
      const IntegralResult mc = mc_integrate(f, Side::Left, q);
      CHECK(std::abs(mc.value - quad) <= 4.0 * mc.error_estimate);
    }
  }

  TEST_CASE("results do not depend on the worker count") {
    const TestFunction f = TestFunction::polynomial(sl2_iwasawa_chart(), Point{0.0, 1.0, 1.0}, Point{0.3, 0.3, 0.5});
    QuadratureSpec one = spec(1e-8, 4), four = one;
    four.workers = 4;
    CHECK(integrate(f, Side::Left, one).value == integrate(f, Side::Left, four).value);
    CHECK(mc_integrate(f, Side::Left, one).value == mc_integrate(f, Side::Left, four).value);
  }
}
