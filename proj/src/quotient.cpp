#include "haarlib/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace haarlib {

namespace {

double min_abs(const Interval& iv) {
  if (iv.lo <= 0.0 && iv.hi >= 0.0) return 0.0;
  return std::min(std::abs(iv.lo), std::abs(iv.hi));
}

Element as_sl2(const Matrix& m) { return unchecked_element(GroupId::sl2(), m); }

class HalfPlaneChart final : public Chart {
 public:
  explicit HalfPlaneChart(double bound)
      : Chart("SL(2)/SO(2)-upper-half-plane", GroupId::sl2(), Box{{-bound, bound}, {0.0, bound}}, {false, false},
              "y <= 0") {}

  Element to_element(const Point& p) const override { return multiply(sl2_n(p[0]), sl2_a(p[1])); }
  Point from_element(const Element& g) const override {
    const auto [x, y] = mobius(g, 0.0, 1.0);
    return Point{x, y};
  }
  double density(const Point& p, Side) const override { return 1.0 / (p[1] * p[1]); }
  double singular_clearance(const Box& b) const override { return std::max(0.0, b[1].lo); }
  bool admissible(const Point& p) const override { return p[1] > 0.0; }
  bool is_coset_chart() const override { return true; }
};

class PuncturedPlaneChart final : public Chart {
 public:
  explicit PuncturedPlaneChart(double bound)
      : Chart("SL(2)/N-punctured-plane", GroupId::sl2(), Box{{-bound, bound}, {-bound, bound}}, {false, false},
              "v = 0") {}

  Element to_element(const Point& p) const override {
    const double r2 = p[0] * p[0] + p[1] * p[1];
    Matrix m(2, 2);
    m << p[0], -p[1] / r2, p[1], p[0] / r2;
    return as_sl2(m);
  }
  Point from_element(const Element& g) const override { return Point{g(0, 0), g(1, 0)}; }
  double density(const Point&, Side) const override { return 2.0; }
  double singular_clearance(const Box& b) const override { return std::hypot(min_abs(b[0]), min_abs(b[1])); }
  bool admissible(const Point& p) const override { return p[0] != 0.0 || p[1] != 0.0; }
  bool is_coset_chart() const override { return true; }
};

class BigCellChart final : public Chart {
 public:
  explicit BigCellChart(double bound)
      : Chart("SL(2)/P-big-cell", GroupId::sl2(), Box{{-bound, bound}}, {false}, "none") {}

  Element to_element(const Point& p) const override { return sl2_lower(p[0]); }
  Point from_element(const Element& g) const override { return Point{g(1, 0) / g(0, 0)}; }
  double density(const Point&, Side) const override { return 1.0; }
  bool is_coset_chart() const override { return true; }
};

Box concat(const Box& a, const Box& b) {
  Box out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double fibre_value(const QuotientSpec& qs, const CompactFunction& f, const Element& g, const Point& h) {
  if (!qs.h_chart->admissible(h)) return 0.0;
  const Point p = qs.g_chart->from_element(multiply(g, qs.h_embed(h)));
  if (!qs.g_chart->admissible(p)) return 0.0;
  return f.eval(p);
}

}  // namespace

ChartPtr half_plane_chart(double bound) { return std::make_shared<HalfPlaneChart>(bound); }
ChartPtr punctured_plane_chart(double bound) { return std::make_shared<PuncturedPlaneChart>(bound); }
ChartPtr big_cell_chart(double bound) { return std::make_shared<BigCellChart>(bound); }

QuotientSpec sl2_so2_quotient() {
  QuotientSpec qs;
  qs.id = "sl2_so2";
  qs.g_chart = sl2_entries_chart();
  qs.quotient_chart = half_plane_chart();
  qs.h_chart = so2_chart();
  qs.h_embed = [](const Point& h) { return sl2_k(h[0]); };
  qs.decompose = [](const Element& g) {
    const auto c = iwasawa_decompose(g);
    return std::pair{Point{c.x, c.y}, Point{c.theta}};
  };
  return qs;
}

QuotientSpec sl2_n_quotient() {
  QuotientSpec qs;
  qs.id = "sl2_n_plane";
  qs.g_chart = sl2_entries_chart();
  qs.quotient_chart = punctured_plane_chart();
  qs.h_chart = real_add_chart(1);
  qs.h_embed = [](const Point& h) { return sl2_n(h[0]); };
  qs.decompose = [](const Element& g) {
    const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
    return std::pair{Point{a, c}, Point{(a * b + c * d) / (a * a + c * c)}};
  };
  return qs;
}

QuotientSpec sl2_p_quotient() {
  QuotientSpec qs;
  qs.id = "sl2_p_negative";
  qs.g_chart = sl2_entries_chart();
  qs.quotient_chart = big_cell_chart();
  qs.h_chart = triangular_p_chart();
  qs.h_side = Side::Left;
  qs.h_embed = [](const Point& h) { return as_sl2(triangular_p(h[0], h[1]).matrix()); };
  qs.decompose = [](const Element& g) {
    const double a = g(0, 0);
    return std::pair{Point{g(1, 0) / a}, Point{a, g(0, 1)}};
  };
  return qs;
}

FibreBoxes fibre_boxes(const QuotientSpec& qs, const CompactFunction& f) {
  if (f.chart != qs.g_chart) throw DomainError("quotient " + qs.id + ": function lives on another chart");
  std::vector<Point> samples = box_boundary_samples(f.support, 200);
  const auto grid = interior_grid(f.support, f.support.size() <= 2 ? 9 : 5);
  samples.insert(samples.end(), grid.begin(), grid.end());

  std::vector<Point> qpts, hpts;
  for (const auto& s : samples) {
    if (!qs.g_chart->admissible(s)) continue;
    auto [qp, hp] = qs.decompose(qs.g_chart->to_element(s));
    qpts.push_back(qp);
    hpts.push_back(hp);
  }
  const Box qtight = bounding_box(*qs.quotient_chart, qpts);
  const Box htight = bounding_box(*qs.h_chart, hpts);
  const std::size_t qdim = qtight.size();

  double fraction = 0.25;
  for (int attempt = 0; attempt < 4; ++attempt, fraction *= 2.0) {
    FibreBoxes out{inflate(*qs.quotient_chart, qtight, fraction), inflate(*qs.h_chart, htight, fraction)};
    const Box product = concat(out.quotient, out.h);
    bool vanishes = true;
    for (const auto& s : box_boundary_samples(product, 400)) {
      bool on_face = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const Chart& c = i < qdim ? *qs.quotient_chart : *qs.h_chart;
        const std::size_t axis = i < qdim ? i : i - qdim;
        if (c.periodic(axis) && product[i].width() >= c.period(axis)) continue;
        on_face |= s[i] == product[i].lo || s[i] == product[i].hi;
      }
      if (!on_face) continue;
      Point qp(qdim), hp(s.size() - qdim);
      for (std::size_t i = 0; i < s.size(); ++i) (i < qdim ? qp[i] : hp[i - qdim]) = s[i];
      if (!qs.quotient_chart->admissible(qp)) continue;
      if (fibre_value(qs, f, qs.quotient_chart->to_element(qp), hp) != 0.0) {
        vanishes = false;
        break;
      }
    }
    if (!vanishes) continue;
    if (!qs.quotient_chart->contains(out.quotient) || !qs.h_chart->contains(out.h)) {
      throw DomainError("out-of-chart: fibre boxes of quotient " + qs.id + " leave their charts");
    }
    if (qs.quotient_chart->singular_clearance(out.quotient) <= 0.0 || qs.h_chart->singular_clearance(out.h) <= 0.0) {
      throw DomainError("fibre boxes of quotient " + qs.id + " meet a singular locus");
    }
    return out;
  }
  throw DomainError("could not bound the fibres of quotient " + qs.id);
}

double fibre_integral(const QuotientSpec& qs, const CompactFunction& f, const Element& g, const Box& h_box,
                      const QuadratureSpec& q) {
  const Chart& hc = *qs.h_chart;
  const Side side = qs.h_side;
  Integrand inner = [&](const Point& h) {
    const double v = fibre_value(qs, f, g, h);
    return v == 0.0 ? 0.0 : v * hc.density(h, side);
  };
  return integrate_box(inner, h_box, q).value;
}

CompactFunction average_over_h(const QuotientSpec& qs, const CompactFunction& f, const QuadratureSpec& q) {
  const FibreBoxes boxes = fibre_boxes(qs, f);
  QuadratureSpec inner = q;
  inner.workers = 1;
  // Inner noise must stay below what the outer refinement test resolves.
  inner.rel_tol = std::max(1e-2 * q.rel_tol, 1e-13);
  inner.max_refinements = std::max(q.max_refinements, 8);
  // Fibres grazing the support carry tiny integrals; converge those against
  // the typical fibre size instead of their own.
  double peak = 0.0;
  for (const auto& p : interior_grid(f.support, f.support.size() <= 2 ? 9 : 5)) peak = std::max(peak, std::abs(f(p)));
  const Chart& hc = *qs.h_chart;
  const double h_mass = tensor_rule([&](const Point& h) { return hc.density(h, qs.h_side); }, boxes.h,
                                    q.base_points_per_axis, 0, {}, 1);
  inner.abs_tol = std::max(inner.abs_tol, inner.rel_tol * peak * h_mass);
  CompactFunction out;
  out.chart = qs.quotient_chart;
  out.support = boxes.quotient;
  out.eval = [qs, f, h_box = boxes.h, inner](const Point& p) {
    if (!qs.quotient_chart->admissible(p)) return 0.0;
    return fibre_integral(qs, f, qs.quotient_chart->to_element(p), h_box, inner);
  };
  return out;
}

WeilSides weil_sides(const QuotientSpec& qs, const CompactFunction& f, const QuadratureSpec& q) {
  WeilSides s;
  s.lhs = integrate(f, Side::Left, q).value;
  s.rhs = integrate(average_over_h(qs, f, q), Side::Left, q).value;
  return s;
}

WeilOutcome weil_check(const QuotientSpec& qs, std::span<const TestFunction> bumps, double tol,
                       double constancy_tol, const QuadratureSpec& q) {
  WeilOutcome out;
  std::vector<double> ratios;
  for (const auto& f : bumps) {
    out.sides.push_back(weil_sides(qs, as_compact(f), q));
    ratios.push_back(out.sides.back().ratio());
  }

  CheckReport& w = out.formula;
  w.name = "weil-formula";
  w.group = qs.id;
  w.anchor = "weil-quotient-formula";
  w.tolerance = tol;
  w.seed = q.seed;
  w.samples = static_cast<long>(bumps.size());
  w.reference = 1.0;
  w.estimate = ratios.empty() ? 1.0 : ratios.front();
  for (double r : ratios) {
    const double dev = std::abs(r - 1.0);
    if (dev >= w.max_rel_deviation) {
      w.max_rel_deviation = dev;
      w.estimate = r;
    }
  }
  w.decide();

  CheckReport& c = out.constancy;
  c.name = "weil-scalar-constancy";
  c.group = qs.id;
  c.anchor = "quotient-measure-uniqueness";
  c.tolerance = constancy_tol;
  c.seed = q.seed;
  c.samples = static_cast<long>(bumps.size());
  if (!ratios.empty()) {
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    c.estimate = *hi;
    c.reference = *lo;
    c.max_rel_deviation = relative_deviation(*hi, *lo);
  }
  c.decide();
  return out;
}

CheckReport existence_criterion(std::span<const Element> h_samples, const std::function<Element(const Element&)>& embed,
                                double tol) {
  CheckReport r;
  r.name = "existence-criterion";
  r.anchor = "invariant-quotient-measure-criterion";
  r.tolerance = tol;
  r.samples = static_cast<long>(h_samples.size());
  r.estimate = 1.0;
  r.reference = 1.0;
  for (const auto& h : h_samples) {
    const double dg = modular_closed_form(embed(h));
    const double dh = modular_closed_form(h);
    const double dev = relative_deviation(dg, dh);
    if (dev >= r.max_rel_deviation) {
      r.max_rel_deviation = dev;
      r.estimate = dg;
      r.reference = dh;
    }
  }
  r.decide();
  return r;
}

CheckReport hyperbolic_invariance_check(const TestFunction& f, std::span<const Element> translates, double tol,
                                        const QuadratureSpec& q) {
  CheckReport r = check_left_invariance(f, translates, tol, q);
  r.name = "hyperbolic-invariance";
  r.group = "SL(2)/SO(2)";
  r.anchor = "quotient-measure-invariance";
  return r;
}

}  // namespace haarlib
