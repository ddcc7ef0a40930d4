#include "haarlib/suites.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "haarlib/lattice.hpp"
#include "haarlib/quotient.hpp"
#include "haarlib/trees.hpp"

namespace haarlib {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t stream_id(std::string_view suite, std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : suite) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  h = (h ^ 0x2fU) * 0x100000001b3ULL;
  for (char c : id) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return h;
}

std::optional<int> parse_suffix(std::string_view id, std::string_view prefix) {
  if (id.substr(0, prefix.size()) != prefix || id.size() == prefix.size()) return std::nullopt;
  int n = 0;
  const auto rest = id.substr(prefix.size());
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  if (ec != std::errc{} || ptr != rest.data() + rest.size()) return std::nullopt;
  return n;
}

QuadratureSpec quad(int base, int max_ref, double rel_tol) {
  QuadratureSpec q;
  q.base_points_per_axis = base;
  q.max_refinements = max_ref;
  q.rel_tol = rel_tol;
  return q;
}

TestFunction poly(const ChartPtr& chart, Point center, Point radius, int exponent = 8) {
  return TestFunction::polynomial(chart, center, radius, exponent);
}

// Identically one on center +- radius/2, zero outside center +- radius.
TestFunction clamped(const ChartPtr& chart, const Point& center, const Point& radius) {
  Box inner(center.size()), outer(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    inner[i] = {center[i] - 0.5 * radius[i], center[i] + 0.5 * radius[i]};
    outer[i] = {center[i] - radius[i], center[i] + radius[i]};
  }
  return TestFunction::clamped(chart, inner, outer, 8);
}

ElementSampler sampler_for(const GroupId& group) {
  switch (group.kind) {
    case GroupKind::RealAdd:
      return [n = group.n](const CounterRng& rng, std::uint64_t i) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = rng.uniform(8 * i + static_cast<std::uint64_t>(k), -2.0, 2.0);
        return Element::vector(v);
      };
    case GroupKind::RealMult:
      return [](const CounterRng& rng, std::uint64_t i) {
        const double mag = std::exp(rng.uniform(8 * i, std::log(0.5), std::log(2.0)));
        return Element::scalar(rng.bits(8 * i + 1) & 1U ? -mag : mag);
      };
    case GroupKind::GL:
      return [group](const CounterRng& rng, std::uint64_t i) {
        const int n = group.n;
        Matrix m = Matrix::Identity(n, n);
        for (int k = 0; k < n * n; ++k) m(k / n, k % n) += rng.uniform(32 * i + static_cast<std::uint64_t>(k), -0.15, 0.15);
        return Element::make(group, m);
      };
    case GroupKind::SL2:
      return [](const CounterRng& rng, std::uint64_t i) {
        return multiply(multiply(sl2_n(rng.uniform(8 * i, -0.3, 0.3)), sl2_a(rng.uniform(8 * i + 1, 0.7, 1.4))),
                        sl2_k(rng.uniform(8 * i + 2, 0.0, 2.0 * kPi)));
      };
    case GroupKind::SO2:
      return [](const CounterRng& rng, std::uint64_t i) { return so2_rotation(rng.uniform(8 * i, 0.0, 2.0 * kPi)); };
    case GroupKind::TriangularP:
      return [](const CounterRng& rng, std::uint64_t i) {
        const double mag = rng.uniform(8 * i, 0.7, 1.4);
        const double x = rng.bits(8 * i + 1) & 1U ? -mag : mag;
        return triangular_p(x, rng.uniform(8 * i + 2, -0.3, 0.3));
      };
  }
  throw ConfigError("no sampler for " + group.name());
}

QuadratureSpec suite_quadrature(const GroupProfile& p, const SuiteOptions& opt) {
  QuadratureSpec q = opt.quadrature.apply(p.quadrature);
  q.seed = opt.seed;
  q.workers = opt.workers;
  return q;
}

CheckReport max_report(std::string name, std::string group, std::string anchor, double tol, std::uint64_t seed) {
  CheckReport r;
  r.name = std::move(name);
  r.group = std::move(group);
  r.anchor = std::move(anchor);
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

void track(CheckReport& r, double estimate, double reference, double dev) {
  ++r.samples;
  if (dev >= r.max_rel_deviation || r.samples == 1) {
    r.max_rel_deviation = std::max(r.max_rel_deviation, dev);
    r.estimate = estimate;
    r.reference = reference;
  }
}

std::string indexed(std::string_view name, std::size_t i) {
  return std::string(name) + "[bump=" + std::to_string(i) + "]";
}

CheckReport negative(CheckReport r) {
  r.name = "negative_control." + r.name;
  r.expect_failure = true;
  r.decide();
  return r;
}

}  // namespace

QuadratureSpec QuadratureOverrides::apply(QuadratureSpec q) const {
  if (base_points) q.base_points_per_axis = *base_points;
  if (max_refinements) q.max_refinements = *max_refinements;
  if (rel_tol) q.rel_tol = *rel_tol;
  if (mc_samples) q.mc_samples = *mc_samples;
  q.validate();
  return q;
}

GroupId parse_group_id(std::string_view id) {
  if (id == "rstar") return GroupId::real_mult();
  if (id == "sl2") return GroupId::sl2();
  if (id == "so2") return GroupId::so2();
  if (id == "p") return GroupId::triangular_p();
  if (auto n = parse_suffix(id, "r")) {
    if (*n < 1 || *n > 4) throw ConfigError("group id '" + std::string(id) + "': R^n is supported for n in 1..4");
    return GroupId::real_add(*n);
  }
  if (auto n = parse_suffix(id, "gl")) {
    if (*n < 1 || *n > 2) throw ConfigError("group id '" + std::string(id) + "': GL(n) suites support n in 1..2");
    return GroupId::gl(*n);
  }
  throw ConfigError("unknown group id '" + std::string(id) + "'");
}

std::vector<std::string> catalog_ids() { return {"r1", "r2", "r3", "rstar", "gl1", "gl2", "sl2", "so2", "p"}; }

void check_quotient_instance(std::string_view id) {
  for (const auto& known : quotient_instances())
    if (known == id) return;
  throw ConfigError("unknown quotient instance '" + std::string(id) + "'");
}

GroupProfile group_profile(std::string_view id) {
  GroupProfile p;
  p.id = std::string(id);
  p.group = parse_group_id(id);
  p.sampler = sampler_for(p.group);
  // Successive levels differ by far more than the error of the finer one, so
  // a fifth of the modular tolerance is ample.
  p.modular_quadrature = quad(16, 4, 1e-4);
  switch (p.group.kind) {
    case GroupKind::RealAdd: {
      const int n = p.group.n;
      p.chart = real_add_chart(n);
      for (int b = 0; b < 3; ++b) {
        Point c(static_cast<std::size_t>(n)), r(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
          c[static_cast<std::size_t>(k)] = 0.5 * b - 0.3 * k;
          r[static_cast<std::size_t>(k)] = 1.0 + 0.25 * b + 0.1 * k;
        }
        p.bumps.push_back(poly(p.chart, c, r));
        p.clamped.push_back(clamped(p.chart, c, r));
      }
      p.quadrature = quad(8, 6, n <= 2 ? 1e-10 : 1e-8);
      break;
    }
    case GroupKind::RealMult:
    case GroupKind::GL:
      if (p.group.n == 1) {
        p.chart = p.group.kind == GroupKind::GL ? gl_chart(1) : real_mult_chart();
        const double centers[] = {1.5, -2.0, 0.8};
        const double radii[] = {0.5, 0.8, 0.3};
        for (int b = 0; b < 3; ++b) {
          p.bumps.push_back(poly(p.chart, Point{centers[b]}, Point{radii[b]}));
          p.clamped.push_back(clamped(p.chart, Point{centers[b]}, Point{radii[b]}));
        }
        p.quadrature = quad(8, 8, 1e-10);
      } else {
        p.chart = gl_chart(2);
        const Point centers[] = {{1.0, 0.0, 0.0, 1.0}, {1.2, 0.1, -0.1, 0.9}, {0.9, -0.2, 0.15, 1.1}};
        for (const auto& c : centers) {
          p.bumps.push_back(poly(p.chart, c, Point(4, 0.25)));
          p.clamped.push_back(clamped(p.chart, c, Point(4, 0.25)));
        }
        p.quadrature = quad(16, 3, 5e-6);
        p.invariance_tol = 1e-5;
      }
      break;
    case GroupKind::SL2: {
      p.chart = sl2_iwasawa_chart();
      const Point centers[] = {{0.0, 1.0, kPi}, {0.5, 2.0, 1.0}, {-0.3, 0.8, 4.0}};
      const Point radii[] = {{0.5, 0.3, 1.0}, {0.4, 0.5, 0.8}, {0.3, 0.2, 1.2}};
      for (int b = 0; b < 3; ++b) {
        p.bumps.push_back(poly(p.chart, centers[b], radii[b]));
        p.clamped.push_back(clamped(p.chart, centers[b], radii[b]));
      }
      p.quadrature = quad(8, 5, 1e-8);
      p.invariance_tol = 1e-5;
      break;
    }
    case GroupKind::SO2: {
      p.chart = so2_chart();
      const double centers[] = {1.0, 3.0, 5.0};
      const double radii[] = {0.5, 1.0, 2.0};
      for (int b = 0; b < 3; ++b) {
        p.bumps.push_back(poly(p.chart, Point{centers[b]}, Point{radii[b]}));
        p.clamped.push_back(clamped(p.chart, Point{centers[b]}, Point{radii[b]}));
      }
      p.quadrature = quad(8, 8, 1e-10);
      break;
    }
    case GroupKind::TriangularP: {
      p.chart = triangular_p_chart();
      const Point centers[] = {{1.0, 0.0}, {2.0, 1.0}, {-1.5, -0.5}};
      const Point radii[] = {{0.3, 0.5}, {0.5, 0.8}, {0.4, 0.6}};
      for (int b = 0; b < 3; ++b) {
        p.bumps.push_back(poly(p.chart, centers[b], radii[b]));
        p.clamped.push_back(clamped(p.chart, centers[b], radii[b]));
      }
      p.quadrature = quad(8, 6, 1e-10);
      break;
    }
  }
  return p;
}

std::vector<Element> sample_elements(const ElementSampler& sampler, std::uint64_t seed, std::uint64_t stream,
                                     std::size_t n) {
  const CounterRng rng(seed, stream);
  std::vector<Element> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler(rng, i));
  return out;
}

// --- catalog -----------------------------------------------------------------

std::vector<CheckReport> catalog_suite(std::string_view group_id, const SuiteOptions& opt) {
  const GroupProfile p = group_profile(group_id);
  const QuadratureSpec q = suite_quadrature(p, opt);
  const std::string gname = p.group.name();
  const CounterRng rng(opt.seed, stream_id("catalog", group_id));
  const Chart& chart = *p.chart;
  const std::size_t k = chart.dim();
  std::vector<CheckReport> out;

  auto random_point = [&](std::uint64_t i) {
    const Box& b = p.bumps[i % p.bumps.size()].support_box();
    Point x(k);
    for (std::size_t a = 0; a < k; ++a) x[a] = rng.uniform(64 * i + a, b[a].lo, b[a].hi);
    return x;
  };

  CheckReport trip = max_report("chart-roundtrip", gname, "chart-roundtrip", 1e-10, opt.seed);
  CheckReport pos = max_report("density-positivity", gname, "haar-density", 0.0, opt.seed);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Point x = random_point(i);
    track(trip, chart_roundtrip_error(chart, x), 0.0, chart_roundtrip_error(chart, x));
    const double dl = haar_density(chart, x, Side::Left), dr = haar_density(chart, x, Side::Right);
    const bool ok = dl > 0.0 && dr > 0.0 && std::isfinite(dl) && std::isfinite(dr);
    track(pos, std::min(dl, dr), 0.0, ok ? 0.0 : 1.0);
  }
  trip.decide();
  pos.decide();
  out.push_back(trip);
  out.push_back(pos);

  CheckReport axioms = max_report("group-axioms", gname, "group-law", 1e-9, opt.seed);
  const auto els = sample_elements(p.sampler, opt.seed, stream_id("catalog-elements", group_id), 600);
  const Element e = identity(p.group);
  for (std::size_t i = 0; i + 2 < els.size(); i += 3) {
    const Element& a = els[i];
    const Element& b = els[i + 1];
    const Element& c = els[i + 2];
    const double assoc = max_abs_diff(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
    const double inv = std::max(max_abs_diff(multiply(a, invert(a)), e), max_abs_diff(multiply(invert(a), a), e));
    const double unit = std::max(max_abs_diff(multiply(a, e), a), max_abs_diff(multiply(e, a), a));
    const double dev = std::max({assoc, inv, unit});
    track(axioms, dev, 0.0, dev);
  }
  axioms.decide();
  out.push_back(axioms);

  if (p.group.kind == GroupKind::SL2) {
    CheckReport iw = max_report("iwasawa-recomposition", gname, "iwasawa-decomposition", 1e-10, opt.seed);
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const Element g = multiply(multiply(sl2_n(rng.uniform(1 << 20 | (8 * i), -5.0, 5.0)),
                                          sl2_a(std::exp(rng.uniform(1 << 20 | (8 * i + 1), -3.0, 3.0)))),
                                 sl2_k(rng.uniform(1 << 20 | (8 * i + 2), -10.0, 10.0)));
      const double err = max_abs_diff(iwasawa_compose(iwasawa_decompose(g)), g);
      track(iw, err, 0.0, err);
    }
    iw.decide();
    out.push_back(iw);
  }

  CheckReport mc = max_report("mc-agreement", gname, "haar-functional", 4.0, opt.seed);
  {
    const TestFunction& f = p.bumps.front();
    const double exact = integrate(f, Side::Left, q).value;
    const IntegralResult m = mc_integrate(f, Side::Left, q);
    mc.samples = m.evaluations;
    mc.estimate = m.value;
    mc.reference = exact;
    // Deviation in units of the Monte Carlo standard error.
    mc.max_rel_deviation = std::abs(m.value - exact) / m.error_estimate;
    mc.decide();
  }
  out.push_back(mc);
  return out;
}

// --- invariance --------------------------------------------------------------

std::vector<CheckReport> invariance_suite(std::string_view group_id, const SuiteOptions& opt) {
  const GroupProfile p = group_profile(group_id);
  const QuadratureSpec q = suite_quadrature(p, opt);
  const double tol = opt.invariance_tol.value_or(p.invariance_tol);
  const auto translates =
      sample_elements(p.sampler, opt.seed, stream_id("invariance", group_id), static_cast<std::size_t>(opt.translates));
  std::vector<CheckReport> out;
  for (std::size_t b = 0; b < p.bumps.size(); ++b) {
    CheckReport l = check_left_invariance(p.bumps[b], translates, tol, q, Side::Left);
    l.name = indexed(l.name, b);
    out.push_back(l);
    CheckReport r = check_right_invariance(p.bumps[b], translates, tol, q, Side::Right);
    r.name = indexed(r.name, b);
    out.push_back(r);
  }
  if (p.group.kind == GroupKind::TriangularP) {
    const Element g = triangular_p(2.0, 0.0);
    const std::vector<Element> gs{g};
    CheckReport r = check_right_invariance(p.bumps.front(), gs, 0.1, q, Side::Left);
    r.name = "right-invariance-under-left-density";
    out.push_back(negative(r));
    CheckReport l = check_left_invariance(p.bumps.front(), gs, 0.1, q, Side::Right);
    l.name = "left-invariance-under-right-density";
    out.push_back(negative(l));
  }
  QuadratureSpec cq = q;
  cq.rel_tol = std::max(cq.rel_tol, 1e-10);
  CompactnessResult c = check_compact_finiteness(p.group, {}, cq);
  out.push_back(c.report);
  return out;
}

// --- modular -----------------------------------------------------------------

std::vector<CheckReport> modular_suite(std::string_view group_id, const SuiteOptions& opt) {
  const GroupProfile p = group_profile(group_id);
  const QuadratureSpec exact_q = suite_quadrature(p, opt);
  QuadratureSpec q = opt.quadrature.apply(p.modular_quadrature);
  q.seed = opt.seed;
  q.workers = opt.workers;
  // Untranslated clamped bumps are piecewise smooth on the cut grid.
  QuadratureSpec base_q = q;
  if (!opt.quadrature.base_points) base_q.base_points_per_axis = 8;
  const double tol = opt.modular_tol.value_or(kModularTol);
  const std::string gname = p.group.name();
  const std::uint64_t stream = stream_id("modular", group_id);

  std::vector<Element> gs;
  if (p.group.kind == GroupKind::TriangularP) {
    for (double t : {-1.0, 0.5, 1.0}) gs.push_back(triangular_p(std::exp(t), 0.0));
    const auto extra = sample_elements(p.sampler, opt.seed, stream, 2);
    gs.insert(gs.end(), extra.begin(), extra.end());
  } else {
    gs = sample_elements(p.sampler, opt.seed, stream, 3);
  }

  std::vector<CheckReport> out;
  // estimates[b][i] for bump b and element gs[i]
  std::vector<std::vector<double>> estimates(p.clamped.size());
  std::vector<double> bases;
  for (std::size_t b = 0; b < p.clamped.size(); ++b) {
    bases.push_back(integrate(p.clamped[b], Side::Left, base_q).value);
    CheckReport r = max_report(indexed("modular-function", b), gname, "modular-function", tol, opt.seed);
    for (const auto& g : gs) {
      const double est = estimate_modular(p.clamped[b], g, q, bases[b]);
      const double ref = modular_closed_form(g);
      estimates[b].push_back(est);
      track(r, est, ref, relative_deviation(est, ref));
    }
    r.decide();
    out.push_back(r);
  }

  CheckReport indep = max_report("modular-bump-independence", gname, "modular-function", tol, opt.seed);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (std::size_t b = 1; b < estimates.size(); ++b) {
      track(indep, estimates[b][i], estimates[0][i], relative_deviation(estimates[b][i], estimates[0][i]));
    }
  }
  indep.decide();
  out.push_back(indep);

  CheckReport hom = max_report("modular-homomorphism", gname, "modular-homomorphism", tol, opt.seed);
  const TestFunction& f0 = p.clamped.front();
  for (std::size_t i = 0; i + 1 < gs.size() && i < 2; ++i) {
    const Element gh = multiply(gs[i], gs[i + 1]);
    const double lhs = estimate_modular(f0, gh, q, bases.front());
    const double rhs = estimates[0][i] * estimates[0][i + 1];
    track(hom, lhs, rhs, std::abs(lhs - rhs) / modular_closed_form(gh));
  }
  hom.decide();
  out.push_back(hom);

  if (p.group.kind == GroupKind::TriangularP) {
    CheckReport rel = max_report("modular-det-ad-inverse", gname, "modular-function-adjoint", tol, opt.seed);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const double prod = estimates[0][i] * det_ad(gs[i]);
      track(rel, prod, 1.0, std::abs(prod - 1.0));
    }
    rel.decide();
    out.push_back(rel);
  } else {
    CheckReport rel = max_report("det-ad", gname, "modular-function-adjoint", 1e-10, opt.seed);
    for (const auto& g : gs) {
      const double v = det_ad(g);
      track(rel, v, modular_closed_form(g), relative_deviation(v, modular_closed_form(g)));
    }
    rel.decide();
    out.push_back(rel);
  }

  CheckReport conv = max_report("right-from-left", gname, "right-haar-from-left", 1e-5, opt.seed);
  for (const auto& f : p.bumps) {
    const double via_left = right_from_left(f, exact_q).value;
    const double direct = integrate(f, Side::Right, exact_q).value;
    track(conv, via_left, direct, relative_deviation(via_left, direct));
  }
  conv.decide();
  out.push_back(conv);
  return out;
}

// --- quotients ---------------------------------------------------------------

namespace {

std::vector<TestFunction> sl2_entry_bumps(const ChartPtr& chart) {
  return {poly(chart, Point{1.0, 0.0, 0.0}, Point{0.3, 0.4, 0.4}),
          poly(chart, Point{1.5, 0.5, -0.3}, Point{0.4, 0.3, 0.3}),
          poly(chart, Point{0.8, -0.4, 0.5}, Point{0.2, 0.3, 0.3})};
}

QuadratureSpec quotient_quadrature(const SuiteOptions& opt) {
  QuadratureSpec q = opt.quadrature.apply(quad(8, 5, 1e-8));
  q.seed = opt.seed;
  q.workers = opt.workers;
  return q;
}

std::vector<CheckReport> rn_zn_suite(const SuiteOptions& opt) {
  std::vector<CheckReport> out;
  const double tol = opt.weil_tol.value_or(1e-6);
  QuadratureSpec q = opt.quadrature.apply(quad(8, 6, 1e-12));
  q.seed = opt.seed;
  q.workers = opt.workers;
  for (int n : {1, 2}) {
    const ChartPtr chart = real_add_chart(n);
    const LatticeSpec lattice =
        LatticeSpec::from_generators(n == 1 ? std::vector<std::vector<double>>{{1.0}}
                                            : std::vector<std::vector<double>>{{1.0, 0.0}, {0.0, 1.0}});
    const std::string gname = "R^" + std::to_string(n) + "/Z^" + std::to_string(n);
    std::vector<double> ratios;
    CheckReport w = max_report("weil-formula", gname, "weil-quotient-formula", tol, opt.seed);
    for (int b = 0; b < 3; ++b) {
      Point c(static_cast<std::size_t>(n)), r(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        c[static_cast<std::size_t>(k)] = 0.37 * b - 0.21 * k;
        r[static_cast<std::size_t>(k)] = 0.7 + 0.6 * b + 0.15 * k;
      }
      const CheckReport pr = check_periodization(lattice, poly(chart, c, r), tol, q);
      const double ratio = *pr.reference / pr.estimate;
      ratios.push_back(ratio);
      track(w, ratio, 1.0, std::abs(ratio - 1.0));
    }
    w.decide();
    out.push_back(w);

    CheckReport c = max_report("weil-scalar-constancy", gname, "quotient-measure-uniqueness", 1e-4, opt.seed);
    for (double r : ratios) track(c, r, ratios.front(), relative_deviation(r, ratios.front()));
    c.decide();
    out.push_back(c);

    // xi is invariant: the periodization of a translate has the same integral.
    CheckReport inv = max_report("quotient-invariance", gname, "quotient-measure-invariance", tol, opt.seed);
    const TestFunction f = poly(chart, Point(static_cast<std::size_t>(n), 0.1), Point(static_cast<std::size_t>(n), 0.9));
    const CompactFunction cf = as_compact(f);
    const double base =
        quotient_integrate_lattice(lattice, periodize(lattice, cf), q, periodization_cuts(lattice, cf)).value;
    for (const auto& g : sample_elements(sampler_for(GroupId::real_add(n)), opt.seed, stream_id("rn_zn", gname), 5)) {
      const CompactFunction moved = translate(f, g, RegularAction::Left);
      const double v =
          quotient_integrate_lattice(lattice, periodize(lattice, moved), q, periodization_cuts(lattice, moved)).value;
      track(inv, v, base, relative_deviation(v, base));
    }
    inv.decide();
    out.push_back(inv);
  }
  return out;
}

std::vector<CheckReport> sl2_so2_suite(const SuiteOptions& opt) {
  std::vector<CheckReport> out;
  const QuadratureSpec q = quotient_quadrature(opt);
  const QuotientSpec qs = sl2_so2_quotient();
  const double tol = opt.weil_tol.value_or(1e-4);
  const auto bumps = sl2_entry_bumps(qs.g_chart);
  WeilOutcome w = weil_check(qs, bumps, tol, 1e-4, q);
  out.push_back(w.formula);
  out.push_back(w.constancy);

  std::vector<Element> ks;
  for (double t : {0.3, 1.7, 4.0}) ks.push_back(so2_rotation(t));
  CheckReport ex = existence_criterion(ks, [](const Element& h) { return unchecked_element(GroupId::sl2(), h.matrix()); }, 1e-12);
  ex.group = qs.id;
  out.push_back(ex);

  // Fibre average at s(q) k(phi) equals the one at s(q).
  CheckReport fib = max_report("fibre-average-constancy", qs.id, "coset-average", 1e-8, opt.seed);
  {
    QuadratureSpec inner = q;
    inner.workers = 1;
    inner.rel_tol = 1e-11;
    inner.max_refinements = 10;
    const CompactFunction f = as_compact(bumps.front());
    const Box circle{{0.0, 2.0 * kPi}};
    const CounterRng rng(opt.seed, stream_id("fibre", qs.id));
    for (std::uint64_t i = 0; i < 10; ++i) {
      const double x = rng.uniform(4 * i, -0.3, 0.3), y = rng.uniform(4 * i + 1, 0.7, 1.3);
      const double phi = rng.uniform(4 * i + 2, 0.0, 2.0 * kPi);
      const Element s = qs.quotient_chart->to_element(Point{x, y});
      const double at_s = fibre_integral(qs, f, s, circle, inner);
      const double at_sk = fibre_integral(qs, f, multiply(s, sl2_k(phi)), circle, inner);
      track(fib, at_sk, at_s, std::abs(at_sk - at_s) / std::max(std::abs(at_s), 1e-300));
    }
  }
  fib.decide();
  out.push_back(fib);

  const ChartPtr hp = half_plane_chart();
  const TestFunction fh = poly(hp, Point{0.3, 1.5}, Point{0.5, 0.6});
  std::vector<Element> moves{identity(GroupId::sl2()), sl2_k(0.9), sl2_k(2.5), sl2_a(4.0)};
  const auto random = sample_elements(sampler_for(GroupId::sl2()), opt.seed, stream_id("hyperbolic", qs.id), 6);
  moves.insert(moves.end(), random.begin(), random.end());
  QuadratureSpec hq = q;
  hq.rel_tol = 1e-10;
  hq.max_refinements = 6;
  CheckReport hyp = hyperbolic_invariance_check(fh, moves, 1e-6, hq);
  hyp.group = qs.id;
  out.push_back(hyp);
  return out;
}

std::vector<CheckReport> sl2_n_suite(const SuiteOptions& opt) {
  std::vector<CheckReport> out;
  const QuadratureSpec q = quotient_quadrature(opt);
  const QuotientSpec qs = sl2_n_quotient();
  const double tol = opt.weil_tol.value_or(1e-4);
  WeilOutcome w = weil_check(qs, sl2_entry_bumps(qs.g_chart), tol, 1e-4, q);
  out.push_back(w.formula);
  out.push_back(w.constancy);

  std::vector<Element> ns;
  for (double t : {-1.5, 0.25, 2.0}) ns.push_back(Element::vector({t}));
  CheckReport ex = existence_criterion(ns, [](const Element& t) { return sl2_n(t(0, 0)); }, 1e-12);
  ex.group = qs.id;
  out.push_back(ex);
  return out;
}

std::vector<CheckReport> sl2_p_suite(const SuiteOptions& opt) {
  std::vector<CheckReport> out;
  const QuadratureSpec q = quotient_quadrature(opt);
  const QuotientSpec qs = sl2_p_quotient();

  std::vector<Element> ps;
  for (double t : {-1.0, 0.5, 1.0}) ps.push_back(triangular_p(std::exp(t), 0.3 * t));
  CheckReport ex =
      existence_criterion(ps, [](const Element& h) { return unchecked_element(GroupId::sl2(), h.matrix()); }, 1e-12);
  ex.group = qs.id;
  out.push_back(negative(ex));

  // The naive xi = dq: the ratio of the two sides moves with the translate.
  const TestFunction f = sl2_entry_bumps(qs.g_chart).front();
  std::vector<WeilSides> sides{weil_sides(qs, as_compact(f), q)};
  for (const Element& g : {multiply(sl2_a(4.0), sl2_n(0.2)), sl2_a(0.6)}) {
    sides.push_back(weil_sides(qs, translate(f, g, RegularAction::Left), q));
  }
  CheckReport c = max_report("weil-scalar-constancy", qs.id, "quotient-measure-uniqueness", 0.1, opt.seed);
  for (const auto& s : sides) track(c, s.ratio(), sides.front().ratio(), relative_deviation(s.ratio(), sides.front().ratio()));
  out.push_back(negative(c));
  return out;
}

}  // namespace

std::vector<CheckReport> weil_suite(std::string_view instance, const SuiteOptions& opt) {
  check_quotient_instance(instance);
  if (instance == "rn_zn") return rn_zn_suite(opt);
  if (instance == "sl2_so2") return sl2_so2_suite(opt);
  if (instance == "sl2_n_plane") return sl2_n_suite(opt);
  return sl2_p_suite(opt);
}

// --- lattices ----------------------------------------------------------------

std::vector<CheckReport> lattice_suite(const SuiteOptions& opt) {
  std::vector<CheckReport> out;
  QuadratureSpec q = opt.quadrature.apply(quad(8, 6, 1e-12));
  q.seed = opt.seed;
  q.workers = opt.workers;

  struct Case {
    std::string name;
    std::vector<std::vector<double>> generators;
  };
  const std::vector<Case> cases{{"Z", {{1.0}}},
                                {"2Z", {{2.0}}},
                                {"Z^2", {{1.0, 0.0}, {0.0, 1.0}}},
                                {"(2,0),(0,3)", {{2.0, 0.0}, {0.0, 3.0}}}};
  for (const auto& c : cases) {
    const LatticeSpec lattice = LatticeSpec::from_generators(c.generators);
    const int n = lattice.dim();
    const std::string gname = "R^" + std::to_string(n) + "/" + c.name;

    CheckReport cov = max_report("covolume", gname, "lattice-fundamental-domain-integral", 1e-12, opt.seed);
    const double vol = quotient_integrate_lattice(lattice, [](const Point&) { return 1.0; }, q).value;
    track(cov, vol, lattice.covolume(), relative_deviation(vol, lattice.covolume()));
    cov.decide();
    out.push_back(cov);

    const ChartPtr chart = real_add_chart(n);
    CheckReport per = check_periodization(
        lattice, poly(chart, Point(static_cast<std::size_t>(n), 0.3), Point(static_cast<std::size_t>(n), 1.7)), 1e-8, q);
    per.group = gname;
    out.push_back(per);
  }

  for (const auto& c : {cases[2], cases[1]}) {
    const LatticeSpec lattice = LatticeSpec::from_generators(c.generators);
    const int n = lattice.dim();
    const GroupProfile p = group_profile("r" + std::to_string(n));
    const auto gens = lattice.generator_elements();
    CheckReport u =
        check_lattice_unimodular(p.clamped.front(), gens, opt.modular_tol.value_or(kModularTol), suite_quadrature(p, opt));
    u.group = "R^" + std::to_string(n) + "/" + c.name;
    out.push_back(u);
  }

  {
    const GroupProfile p = group_profile("p");
    QuadratureSpec pq = suite_quadrature(p, opt);
    const std::vector<Element> gamma{triangular_p(std::numbers::e, 0.0)};
    CheckReport u = check_lattice_unimodular(p.clamped.front(), gamma, opt.modular_tol.value_or(kModularTol), pq);
    u.group = "P/diag(e^t,e^-t)";
    out.push_back(negative(u));
  }
  return out;
}

// --- trees -------------------------------------------------------------------

std::vector<CheckReport> tree_suite(int d, int radius, const SuiteOptions& opt) {
  if (d < 3 || d > kMaxTreeDegree) throw ConfigError("tree degree d must lie in [3, 36]");
  if (radius < 1) throw ConfigError("tree radius R must be >= 1");
  if (TreeBall::expected_size(d, radius) > 2'000'000) throw ConfigError("tree ball too large for this d and R");

  const std::string gname = "Aut(T_" + std::to_string(d) + ")";
  std::vector<CheckReport> out;
  const BigInt aut = ball_aut_order(d, radius);
  const Rational delta = horospherical_modular(d, radius, 1);
  const Rational expected(BigInt(1), BigInt(d - 1));

  CheckReport h = max_report("horospherical-modular", gname, "horospherical-stabilizer-modular", 0.0, opt.seed);
  h.samples = 1;
  h.estimate = static_cast<double>(delta);
  h.reference = static_cast<double>(expected);
  h.exact_estimate = to_exact_string(delta);
  h.exact_reference = to_exact_string(expected);
  h.max_rel_deviation = delta == expected ? 0.0 : 1.0;
  h.fields = {{"d", std::to_string(d)},
              {"R", std::to_string(radius)},
              {"aut_order", aut.str()},
              {"delta_t", to_exact_string(delta)}};
  h.decide();
  out.push_back(h);

  CheckReport a = max_report("ball-aut-order", gname, "compact-open-vertex-stabilizer", 0.0, opt.seed);
  a.samples = 1;
  a.estimate = static_cast<double>(aut);
  a.exact_estimate = aut.str();
  if (aut <= 1'000'000) {
    const auto brute = brute_force_ball_aut_order(d, radius);
    if (brute) {
      a.reference = static_cast<double>(*brute);
      a.exact_reference = brute->str();
      a.max_rel_deviation = *brute == aut ? 0.0 : 1.0;
    }
  }
  a.fields = {{"d", std::to_string(d)}, {"R", std::to_string(radius)}};
  a.decide();
  out.push_back(a);

  if (radius >= 2) {
    const Rational square = horospherical_modular(d, radius, 2);
    CheckReport s = max_report("horospherical-modular-square", gname, "modular-homomorphism", 0.0, opt.seed);
    s.samples = 1;
    s.estimate = static_cast<double>(square);
    s.reference = static_cast<double>(delta * delta);
    s.exact_estimate = to_exact_string(square);
    s.exact_reference = to_exact_string(delta * delta);
    s.max_rel_deviation = square == delta * delta ? 0.0 : 1.0;
    s.decide();
    out.push_back(s);

    EdgeMeasures e = edge_stabilizer_measures_equal(d, radius);
    e.report.seed = opt.seed;
    out.push_back(e.report);
  }
  return out;
}

}  // namespace haarlib
