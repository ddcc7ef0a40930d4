#include "haarlib/invariance.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

namespace haarlib {

void CheckReport::decide() {
  const bool within = max_rel_deviation <= tolerance;
  passed = expect_failure ? !within : within;
}

double relative_deviation(double a, double b) {
  const double diff = std::abs(a - b);
  return b == 0.0 ? diff : diff / std::abs(b);
}

CheckReport check_invariance(const TestFunction& f, std::span<const Element> translates, RegularAction action,
                             Side density, double tol, const QuadratureSpec& q) {
  const bool left = action == RegularAction::Left;
  CheckReport r;
  r.name = std::string(left ? "left" : "right") + "-invariance";
  r.group = f.chart()->group().name();
  r.anchor = r.name;
  r.tolerance = tol;
  r.seed = q.seed;
  r.samples = static_cast<long>(translates.size());

  const double base = integrate(f, density, q).value;
  r.reference = base;
  r.estimate = base;
  for (const auto& g : translates) {
    const double moved = integrate(translate(f, g, action), density, q).value;
    const double dev = relative_deviation(moved, base);
    if (dev >= r.max_rel_deviation) {
      r.max_rel_deviation = dev;
      r.estimate = moved;
    }
  }
  r.decide();
  return r;
}

CheckReport check_left_invariance(const TestFunction& f, std::span<const Element> translates, double tol,
                                  const QuadratureSpec& q, Side density) {
  return check_invariance(f, translates, RegularAction::Left, density, tol, q);
}

CheckReport check_right_invariance(const TestFunction& f, std::span<const Element> translates, double tol,
                                   const QuadratureSpec& q, Side density) {
  return check_invariance(f, translates, RegularAction::Right, density, tol, q);
}

double estimate_modular(const TestFunction& f, const Element& g, const QuadratureSpec& q) {
  return estimate_modular(f, g, q, integrate(f, Side::Left, q).value);
}

double estimate_modular(const TestFunction& f, const Element& g, const QuadratureSpec& q, double base) {
  if (!(g.group() == f.chart()->group())) {
    throw MembershipError("modular estimate: element of " + g.group().name() + " on chart of " +
                          f.chart()->group().name());
  }
  if (!(std::abs(base) > 0.0)) throw DomainError("modular estimate: test function has vanishing integral");
  const double moved = integrate(translate(f, invert(g), RegularAction::Right), Side::Left, q).value;
  return moved / base;
}

double modular_closed_form(const Element& g) {
  if (g.group().kind == GroupKind::TriangularP) {
    const double x = g(0, 0);
    return 1.0 / (x * x);
  }
  return 1.0;
}

std::vector<Matrix> lie_algebra_basis(const GroupId& group) {
  auto unit = [](int n, int i, int j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
  };
  std::vector<Matrix> basis;
  switch (group.kind) {
    case GroupKind::RealAdd:
      // Abelian: represented by the n translation generators, Ad is trivial.
      for (int i = 0; i < group.n; ++i) basis.push_back(unit(group.n, i, i));
      break;
    case GroupKind::RealMult:
      basis.push_back(unit(1, 0, 0));
      break;
    case GroupKind::GL:
      for (int i = 0; i < group.n; ++i)
        for (int j = 0; j < group.n; ++j) basis.push_back(unit(group.n, i, j));
      break;
    case GroupKind::SL2: {
      Matrix h = unit(2, 0, 0);
      h(1, 1) = -1.0;
      basis = {h, unit(2, 0, 1), unit(2, 1, 0)};
      break;
    }
    case GroupKind::SO2: {
      Matrix j = Matrix::Zero(2, 2);
      j(0, 1) = -1.0;
      j(1, 0) = 1.0;
      basis.push_back(j);
      break;
    }
    case GroupKind::TriangularP: {
      Matrix h = unit(2, 0, 0);
      h(1, 1) = -1.0;
      basis = {h, unit(2, 0, 1)};
      break;
    }
  }
  return basis;
}

double det_ad(const Element& g) {
  if (g.group().kind == GroupKind::RealAdd) return 1.0;
  const auto basis = lie_algebra_basis(g.group());
  const int n = g.group().rows();
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXd coords(n * n, dim);
  for (int b = 0; b < dim; ++b) coords.col(b) = Eigen::Map<const Eigen::VectorXd>(Matrix(basis[b]).data(), n * n);

  const Matrix gm = g.matrix();
  const Matrix gi = invert(g).matrix();
  const auto qr = coords.colPivHouseholderQr();
  Eigen::MatrixXd ad(dim, dim);
  for (int b = 0; b < dim; ++b) {
    const Matrix conj = gm * basis[b] * gi;
    ad.col(b) = qr.solve(Eigen::Map<const Eigen::VectorXd>(conj.data(), n * n));
  }
  return std::abs(ad.determinant());
}

IntegralResult right_from_left(const TestFunction& f, const QuadratureSpec& q) {
  const ChartPtr chart = f.chart();
  auto weight = [chart](const Point& p) { return modular_closed_form(invert(chart->to_element(p))); };
  return integrate_weighted(as_compact(f), weight, Side::Left, q);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BoxFamily {
  ChartPtr chart;
  std::vector<double> default_scales;
  std::function<Box(double)> box;
  std::function<AxisCuts(double)> cuts;
  std::function<std::optional<double>(double)> closed_form;
  /// Integrand on the family's box when it is not the chart density itself
  /// (a change of variables).
  std::function<double(const Point&)> integrand;
};

AxisCuts log_cuts_1d(double s) { return {geometric_cuts(1.0 / s, s, 2.0)}; }

BoxFamily family_for(const GroupId& group, double max_scale) {
  BoxFamily fam;
  switch (group.kind) {
    case GroupKind::RealAdd:
      fam.chart = real_add_chart(group.n, std::max(max_scale, 1.0));
      fam.default_scales = {1.0, 10.0, 100.0, 1000.0};
      fam.box = [n = group.n](double s) { return Box(static_cast<std::size_t>(n), Interval{-s, s}); };
      fam.cuts = [](double) { return AxisCuts{}; };
      fam.closed_form = [n = group.n](double s) { return std::optional<double>(std::pow(2.0 * s, n)); };
      break;
    case GroupKind::RealMult:
    case GroupKind::GL:
      if (group.kind == GroupKind::GL && group.n >= 3) {
        throw ConfigError("compactness check is not available for " + group.name());
      }
      if (group.kind == GroupKind::GL && group.n == 2) {
        // K_s = {a, d in [1, s], 0 <= b <= a, -d <= c <= 0}, integrated in
        // (ln a, b / a, c / d, ln d). Jacobian a^2 d^2, det = ad (1 - (b/a)(c/d)),
        // so the mass is ln 2 (ln s)^2.
        fam.chart = gl_chart(2, std::max(max_scale, 1.0));
        fam.default_scales = {10.0, 1e3, 1e10, 1e50};
        fam.box = [](double s) {
          const double l = std::log(s);
          return Box{{0.0, l}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, l}};
        };
        fam.cuts = [](double) { return AxisCuts{}; };
        fam.integrand = [chart = fam.chart](const Point& p) {
          const double a = std::exp(p[0]), d = std::exp(p[3]);
          return chart->density(Point{a, a * p[1], d * p[2], d}, Side::Left) * (a * a) * (d * d);
        };
        fam.closed_form = [](double s) { return std::optional<double>(std::log(2.0) * std::log(s) * std::log(s)); };
        break;
      }
      fam.chart = group.kind == GroupKind::GL ? gl_chart(1, std::max(max_scale, 1.0)) : real_mult_chart(std::max(max_scale, 1.0));
      fam.default_scales = {10.0, 1e3, 1e10, 1e100, 1e250};
      fam.box = [](double s) { return Box{{1.0 / s, s}}; };
      fam.cuts = log_cuts_1d;
      fam.closed_form = [](double s) { return std::optional<double>(2.0 * std::log(s)); };
      break;
    case GroupKind::SL2:
      fam.chart = sl2_iwasawa_chart(std::max(max_scale, 1.0));
      fam.default_scales = {2.0, 10.0, 100.0};
      fam.box = [](double s) { return Box{{-s, s}, {1.0 / s, s}, {0.0, kTwoPi}}; };
      fam.cuts = [](double s) { return AxisCuts{{}, geometric_cuts(1.0 / s, s, 2.0), {}}; };
      fam.closed_form = [](double s) { return std::optional<double>(2.0 * s * (s - 1.0 / s) * kTwoPi); };
      break;
    case GroupKind::TriangularP:
      fam.chart = triangular_p_chart(std::max(max_scale, 1.0));
      fam.default_scales = {2.0, 10.0, 100.0};
      fam.box = [](double s) { return Box{{1.0 / s, s}, {-s, s}}; };
      fam.cuts = [](double s) { return AxisCuts{geometric_cuts(1.0 / s, s, 2.0), {}}; };
      fam.closed_form = [](double s) { return std::optional<double>(2.0 * s * (s - 1.0 / s)); };
      break;
    case GroupKind::SO2:
      break;
  }
  return fam;
}

}  // namespace

CompactnessResult check_compact_finiteness(const GroupId& group, std::vector<double> scales,
                                           const QuadratureSpec& q) {
  CompactnessResult out;
  CheckReport& r = out.report;
  r.name = "compactness";
  r.group = group.name();
  r.anchor = "compact-iff-finite";
  r.seed = q.seed;
  r.tolerance = 1e-8;

  if (group.is_compact()) {
    const ChartPtr chart = so2_chart();
    const Chart& c = *chart;
    const double mass =
        integrate_box([&](const Point& p) { return c.density(p, Side::Left); }, chart->box(), q).value;
    out.scales = {1.0};
    out.masses = {mass};
    out.closed_forms = {kTwoPi};
    r.estimate = mass;
    r.reference = kTwoPi;
    r.samples = 1;
    r.max_rel_deviation = relative_deviation(mass, kTwoPi);
    r.decide();
    return out;
  }

  const double probe_max = scales.empty() ? 0.0 : *std::max_element(scales.begin(), scales.end());
  BoxFamily fam = family_for(group, probe_max);
  if (scales.empty()) {
    scales = fam.default_scales;
    fam = family_for(group, scales.back());
  }
  QuadratureSpec qs = q;

  const Chart& c = *fam.chart;
  bool increasing = true;
  double dev = 0.0;
  for (double s : scales) {
    const Integrand density = [&](const Point& p) { return c.density(p, Side::Left); };
    const double mass = integrate_box(fam.integrand ? fam.integrand : density, fam.box(s), qs, fam.cuts(s)).value;
    const auto ref = fam.closed_form(s);
    if (!out.masses.empty() && !(mass > out.masses.back())) increasing = false;
    if (ref) dev = std::max(dev, relative_deviation(mass, *ref));
    out.scales.push_back(s);
    out.masses.push_back(mass);
    out.closed_forms.push_back(ref);
  }
  r.samples = static_cast<long>(scales.size());
  r.estimate = out.masses.back();
  if (out.closed_forms.back()) r.reference = *out.closed_forms.back();
  const bool unbounded = increasing && r.estimate > kUnboundedMassThreshold;
  r.max_rel_deviation = unbounded ? dev : std::numeric_limits<double>::infinity();
  r.decide();
  return out;
}

}  // namespace haarlib
