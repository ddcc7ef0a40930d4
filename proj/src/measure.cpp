#include "haarlib/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace haarlib {

namespace {

// C^(k-1) step from 0 at s = 0 to 1 at s = 1 with S(s) + S(1 - s) = 1.
double smooth_step(double s, int k) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double sum = 0.0;
  double binom = 1.0;  // C(k-1+j, j)
  double pow1ms = 1.0;
  for (int j = 0; j < k; ++j) {
    sum += binom * pow1ms;
    binom = binom * (k + j) / (j + 1);
    pow1ms *= 1.0 - s;
  }
  return std::pow(s, k) * sum;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void check_support(const Chart& chart, const Box& support) {
  require(chart.contains(support), "support box leaves chart " + chart.name());
  require(chart.singular_clearance(support) >= kSingularMargin,
          "support box is within the singular margin of chart " + chart.name() + " (" + chart.singular_locus() + ")");
}

}  // namespace

TestFunction TestFunction::polynomial(ChartPtr chart, const Point& center, const Point& radius, int exponent,
                                      double coefficient) {
  require(chart != nullptr, "test function needs a chart");
  require(center.size() == chart->dim() && radius.size() == chart->dim(), "center/radius dimension mismatch");
  require(exponent >= 2, "bump exponent must be >= 2");
  require(coefficient >= 0.0 && std::isfinite(coefficient), "bump coefficient must be finite and >= 0");
  TestFunction f;
  f.chart_ = std::move(chart);
  f.profile_ = BumpProfile::Polynomial;
  f.center_ = center;
  f.radius_ = radius;
  f.exponent_ = exponent;
  f.coefficient_ = coefficient;
  f.full_circle_.assign(center.size(), false);
  f.support_.resize(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    require(radius[i] > 0.0, "bump radius must be positive");
    if (f.chart_->periodic(i)) require(2.0 * radius[i] < f.chart_->period(i), "bump wider than the period");
    f.support_[i] = {center[i] - radius[i], center[i] + radius[i]};
  }
  check_support(*f.chart_, f.support_);
  return f;
}

TestFunction TestFunction::clamped(ChartPtr chart, const Box& inner, const Box& outer, int exponent,
                                   double coefficient) {
  require(chart != nullptr, "test function needs a chart");
  require(inner.size() == chart->dim() && outer.size() == chart->dim(), "box dimension mismatch");
  require(exponent >= 2, "bump exponent must be >= 2");
  require(coefficient >= 0.0 && std::isfinite(coefficient), "bump coefficient must be finite and >= 0");
  TestFunction f;
  f.chart_ = std::move(chart);
  f.profile_ = BumpProfile::Clamped;
  f.exponent_ = exponent;
  f.coefficient_ = coefficient;
  f.inner_ = inner;
  f.support_ = outer;
  f.center_ = Point(inner.size());
  f.radius_ = Point(inner.size());
  f.full_circle_.assign(inner.size(), false);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const bool whole = f.chart_->periodic(i) && inner[i].width() >= f.chart_->period(i);
    if (whole) {
      // K covers the circle: the factor is identically one there.
      f.full_circle_[i] = true;
      f.inner_[i] = f.support_[i] = {inner[i].lo, inner[i].lo + f.chart_->period(i)};
    } else {
      require(outer[i].strictly_contains(inner[i]), "inner box must lie strictly inside the outer box");
      if (f.chart_->periodic(i)) require(outer[i].width() < f.chart_->period(i), "outer box wider than the period");
    }
    f.center_[i] = f.support_[i].mid();
    f.radius_[i] = 0.5 * f.support_[i].width();
  }
  check_support(*f.chart_, f.support_);
  return f;
}

TestFunction TestFunction::scaled(double factor) const {
  require(factor >= 0.0, "scale factor must be >= 0");
  TestFunction g = *this;
  g.coefficient_ *= factor;
  return g;
}

double TestFunction::axis_factor(std::size_t axis, double t) const {
  const bool periodic = chart_->periodic(axis);
  if (profile_ == BumpProfile::Polynomial) {
    double d = t - center_[axis];
    if (periodic) d = wrapped_difference(t, center_[axis], chart_->period(axis));
    const double u = d / radius_[axis];
    if (std::abs(u) >= 1.0) return 0.0;
    return std::pow(1.0 - u * u, exponent_);
  }
  if (full_circle_[axis]) return 1.0;
  const Interval& k = inner_[axis];
  const Interval& u = support_[axis];
  if (periodic) {
    const double period = chart_->period(axis);
    t = u.lo + std::fmod(std::fmod(t - u.lo, period) + period, period);
  }
  if (t <= u.lo || t >= u.hi) return 0.0;
  if (t < k.lo) return 1.0 - smooth_step((k.lo - t) / (k.lo - u.lo), exponent_);
  if (t > k.hi) return 1.0 - smooth_step((t - k.hi) / (u.hi - k.hi), exponent_);
  return 1.0;
}

double TestFunction::operator()(const Point& p) const {
  if (coefficient_ == 0.0) return 0.0;
  double v = coefficient_;
  for (std::size_t i = 0; i < p.size(); ++i) {
    v *= axis_factor(i, p[i]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

TestFunction urysohn_bump(ChartPtr chart, const Box& inner, const Box& outer, bool clamped, int exponent) {
  require(chart != nullptr, "test function needs a chart");
  require(inner.size() == chart->dim() && outer.size() == chart->dim(), "box dimension mismatch");
  if (clamped) return TestFunction::clamped(std::move(chart), inner, outer, exponent);
  Point center(outer.size()), radius(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    require(outer[i].strictly_contains(inner[i]), "inner box must lie strictly inside the outer box");
    center[i] = outer[i].mid();
    radius[i] = 0.5 * outer[i].width();
  }
  require(chart->singular_clearance(inner) >= kSingularMargin, "inner box touches the singular locus");
  return TestFunction::polynomial(std::move(chart), center, radius, exponent);
}

CompactFunction as_compact(const TestFunction& f) {
  CompactFunction out;
  out.chart = f.chart();
  out.support = f.support_box();
  out.eval = [f](const Point& p) { return f(p); };
  if (f.profile() == BumpProfile::Clamped) {
    out.cuts.resize(f.inner_box().size());
    for (std::size_t i = 0; i < f.inner_box().size(); ++i) {
      const auto& k = f.inner_box()[i];
      const auto& u = f.support_box()[i];
      if (k.lo > u.lo) out.cuts[i].push_back(k.lo);
      if (k.hi < u.hi) out.cuts[i].push_back(k.hi);
    }
  }
  return out;
}

CompactFunction zero_function(ChartPtr chart, const Box& support) {
  CompactFunction out;
  out.chart = std::move(chart);
  out.support = support;
  out.eval = [](const Point&) { return 0.0; };
  return out;
}

CompactFunction linear_combination(double a, const CompactFunction& f, double b, const CompactFunction& g) {
  require(f.chart == g.chart, "linear combination needs a common chart");
  CompactFunction out;
  out.chart = f.chart;
  out.support.resize(f.support.size());
  out.cuts.resize(f.support.size());
  for (std::size_t i = 0; i < f.support.size(); ++i) {
    out.support[i] = {std::min(f.support[i].lo, g.support[i].lo), std::max(f.support[i].hi, g.support[i].hi)};
    // Support edges of each summand become kinks of the sum.
    for (const auto* h : {&f, &g}) {
      out.cuts[i].push_back(h->support[i].lo);
      out.cuts[i].push_back(h->support[i].hi);
      if (i < h->cuts.size()) out.cuts[i].insert(out.cuts[i].end(), h->cuts[i].begin(), h->cuts[i].end());
    }
  }
  auto fe = f.eval;
  auto ge = g.eval;
  out.eval = [a, b, fe, ge](const Point& p) { return a * fe(p) + b * ge(p); };
  return out;
}

std::vector<Point> box_boundary_samples(const Box& b, std::size_t min_samples) {
  const std::size_t k = b.size();
  std::vector<Point> out;
  Point v(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (std::size_t i = 0; i < k; ++i) v[i] = (mask >> i) & 1U ? b[i].hi : b[i].lo;
    out.push_back(v);
  }
  if (k <= 1) return out;
  // Grid of g^(k-1) points on every face.
  std::size_t g = 2;
  auto face_points = [&](std::size_t gg) {
    std::size_t n = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) n *= gg;
    return n;
  };
  while (2 * k * face_points(g) < min_samples) ++g;
  const std::size_t per_face = face_points(g);
  for (std::size_t axis = 0; axis < k; ++axis) {
    for (double side : {b[axis].lo, b[axis].hi}) {
      for (std::size_t n = 0; n < per_face; ++n) {
        std::size_t rem = n;
        for (std::size_t i = 0; i < k; ++i) {
          if (i == axis) {
            v[i] = side;
            continue;
          }
          const std::size_t j = rem % g;
          rem /= g;
          v[i] = b[i].lo + b[i].width() * static_cast<double>(j) / static_cast<double>(g - 1);
        }
        out.push_back(v);
      }
    }
  }
  return out;
}

Box bounding_box(const Chart& chart, const std::vector<Point>& pts) {
  const std::size_t k = chart.dim();
  Box out(k, Interval{0.0, 0.0});
  if (pts.empty()) return out;
  for (std::size_t i = 0; i < k; ++i) {
    if (!chart.periodic(i)) {
      double lo = pts.front()[i], hi = pts.front()[i];
      for (const auto& p : pts) {
        lo = std::min(lo, p[i]);
        hi = std::max(hi, p[i]);
      }
      out[i] = {lo, hi};
      continue;
    }
    const double base = chart.box()[i].lo;
    const double period = chart.period(i);
    std::vector<double> t;
    t.reserve(pts.size());
    for (const auto& p : pts) t.push_back(base + std::fmod(std::fmod(p[i] - base, period) + period, period));
    std::sort(t.begin(), t.end());
    // The covering arc starts right after the widest gap.
    double widest = t.front() + period - t.back();
    std::size_t start = 0;
    for (std::size_t j = 1; j < t.size(); ++j) {
      if (t[j] - t[j - 1] > widest) {
        widest = t[j] - t[j - 1];
        start = j;
      }
    }
    out[i] = {t[start], t[start] + period - widest};
  }
  return out;
}

Box inflate(const Chart& chart, const Box& b, double fraction) {
  Box out = b;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double grow = 0.5 * fraction * std::max(b[i].width(), 1e-12);
    out[i] = {b[i].lo - grow, b[i].hi + grow};
    if (chart.periodic(i) && out[i].width() >= chart.period(i)) {
      out[i] = {chart.box()[i].lo, chart.box()[i].lo + chart.period(i)};
    }
  }
  return out;
}

std::vector<Point> interior_grid(const Box& b, std::size_t per_axis) {
  const std::size_t k = b.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= per_axis;
  std::vector<Point> out;
  out.reserve(total);
  Point v(k);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = rem % per_axis;
      rem /= per_axis;
      v[i] = b[i].lo + b[i].width() * (static_cast<double>(j) + 0.5) / static_cast<double>(per_axis);
    }
    out.push_back(v);
  }
  return out;
}

namespace {

// Kinks of f (support faces and cuts) move to kinks of the translate. When an
// axis transforms independently of the others, the moved kink is a plane
// again and becomes a cut; other axes rely on refinement alone.
AxisCuts carried_cuts(const Chart& chart, const CompactFunction& f, const Box& target,
                      const std::function<Point(const Point&)>& forward) {
  const std::size_t k = f.support.size();
  AxisCuts out(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> kinks{f.support[i].lo, f.support[i].hi};
    if (i < f.cuts.size()) kinks.insert(kinks.end(), f.cuts[i].begin(), f.cuts[i].end());
    for (double c : kinks) {
      std::optional<double> moved;
      bool separable = true;
      for (double t : {0.5, 0.2, 0.8}) {
        Point p(k);
        for (std::size_t j = 0; j < k; ++j) p[j] = f.support[j].lo + t * f.support[j].width();
        p[i] = c;
        if (!chart.admissible(p)) {
          separable = false;
          break;
        }
        const double v = forward(p)[i];
        if (!moved) {
          moved = v;
        } else if (std::abs(v - *moved) > 1e-12 * (1.0 + std::abs(v)) &&
                   !(chart.periodic(i) && std::abs(wrapped_difference(v, *moved, chart.period(i))) <= 1e-12)) {
          separable = false;
          break;
        }
      }
      if (!separable || !moved) continue;
      double v = *moved;
      if (chart.periodic(i)) {
        const double period = chart.period(i);
        while (v < target[i].lo) v += period;
        while (v > target[i].hi) v -= period;
      }
      if (target[i].lo < v && v < target[i].hi) out[i].push_back(v);
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace

CompactFunction translate(const CompactFunction& f, const Element& g, RegularAction action) {
  const ChartPtr chart = f.chart;
  require(chart != nullptr, "translate needs a chart");
  if (!(g.group() == chart->group())) {
    throw MembershipError("translating element of " + g.group().name() + " on chart of " + chart->group().name());
  }
  if (chart->is_coset_chart() && action == RegularAction::Right) {
    throw DomainError("coset chart " + chart->name() + " only carries the left action");
  }

  const Element g_inv = invert(g);
  CompactFunction out;
  out.chart = chart;
  auto inner = f.eval;
  if (action == RegularAction::Left) {
    out.eval = [chart, inner, g_inv](const Point& p) {
      if (!chart->admissible(p)) return 0.0;
      return inner(chart->from_element(multiply(g_inv, chart->to_element(p))));
    };
  } else {
    out.eval = [chart, inner, g](const Point& p) {
      if (!chart->admissible(p)) return 0.0;
      return inner(chart->from_element(multiply(chart->to_element(p), g)));
    };
  }

  // supp(lambda(g) f) = g supp(f), supp(rho(g) f) = supp(f) g^-1.
  std::vector<Point> samples = box_boundary_samples(f.support, 100);
  const auto grid = interior_grid(f.support, f.support.size() <= 2 ? 9 : 5);
  samples.insert(samples.end(), grid.begin(), grid.end());
  const auto forward = [&](const Point& s) {
    const Element x = chart->to_element(s);
    return chart->from_element(action == RegularAction::Left ? multiply(g, x) : multiply(x, g_inv));
  };
  std::vector<Point> image;
  image.reserve(samples.size());
  for (const auto& s : samples) {
    if (chart->admissible(s)) image.push_back(forward(s));
  }
  const Box tight = bounding_box(*chart, image);

  double fraction = 0.25;
  for (int attempt = 0; attempt < 4; ++attempt, fraction *= 2.0) {
    Box candidate = inflate(*chart, tight, fraction);
    Box probe = candidate;
    bool vanishes = true;
    for (const auto& s : box_boundary_samples(probe, 400)) {
      bool on_open_face = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const bool whole = chart->periodic(i) && candidate[i].width() >= chart->period(i);
        if (whole) continue;
        on_open_face |= s[i] == candidate[i].lo || s[i] == candidate[i].hi;
      }
      if (on_open_face && out.eval(s) != 0.0) {
        vanishes = false;
        break;
      }
    }
    if (!vanishes) continue;
    if (!chart->contains(candidate)) {
      throw DomainError("out-of-chart: translated support leaves chart " + chart->name());
    }
    out.support = std::move(candidate);
    out.cuts = carried_cuts(*chart, f, out.support, forward);
    return out;
  }
  throw DomainError("could not bound the translated support on chart " + chart->name());
}

CompactFunction translate(const TestFunction& f, const Element& g, RegularAction action) {
  return translate(as_compact(f), g, action);
}

IntegralResult integrate_weighted(const CompactFunction& f, const std::function<double(const Point&)>& weight,
                                  Side side, const QuadratureSpec& q) {
  require(f.chart != nullptr, "integrate needs a chart");
  require(f.chart->contains(f.support), "support box leaves chart " + f.chart->name());
  const Chart& chart = *f.chart;
  const auto& eval = f.eval;
  Integrand integrand = [&](const Point& p) {
    const double v = eval(p);
    if (v == 0.0) return 0.0;
    return v * weight(p) * chart.density(p, side);
  };
  return integrate_box(integrand, f.support, q, f.cuts);
}

IntegralResult integrate(const CompactFunction& f, Side side, const QuadratureSpec& q) {
  return integrate_weighted(f, [](const Point&) { return 1.0; }, side, q);
}

IntegralResult integrate(const TestFunction& f, Side side, const QuadratureSpec& q) {
  return integrate(as_compact(f), side, q);
}

IntegralResult mc_integrate(const CompactFunction& f, Side side, const QuadratureSpec& q) {
  q.validate();
  require(f.chart != nullptr, "integrate needs a chart");
  const Chart& chart = *f.chart;
  const std::size_t k = f.support.size();
  const double volume = box_volume(f.support);
  const CounterRng rng(q.seed, 0x4d43ULL);

  constexpr long kChunk = 4096;
  const long n = q.mc_samples;
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<double> sums(chunks), squares(chunks);
  parallel_for(chunks, q.workers, [&](std::size_t c) {
    const long begin = static_cast<long>(c) * kChunk;
    const long end = std::min(n, begin + kChunk);
    Point p(k);
    double s = 0.0, s2 = 0.0;
    for (long i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        p[j] = rng.uniform(static_cast<std::uint64_t>(i) * k + j, f.support[j].lo, f.support[j].hi);
      }
      double v = f.eval(p);
      if (v != 0.0) v *= chart.density(p, side);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    squares[c] = s2;
  });
  const double mean = pairwise_sum(sums) / static_cast<double>(n);
  const double mean_sq = pairwise_sum(squares) / static_cast<double>(n);
  const double var = n > 1 ? std::max(0.0, mean_sq - mean * mean) * static_cast<double>(n) / (n - 1) : 0.0;

  IntegralResult out;
  out.value = volume * mean;
  out.error_estimate = volume * std::sqrt(var / static_cast<double>(n));
  out.evaluations = n;
  return out;
}

IntegralResult mc_integrate(const TestFunction& f, Side side, const QuadratureSpec& q) {
  return mc_integrate(as_compact(f), side, q);
}

}  // namespace haarlib
