#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numbers>

#include "haarlib/groups.hpp"

namespace haarlib {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest |t| over an interval, 0 if it straddles the origin.
double min_abs(const Interval& iv) {
  if (iv.lo <= 0.0 && iv.hi >= 0.0) return 0.0;
  return std::min(std::abs(iv.lo), std::abs(iv.hi));
}

class RealAddChart final : public Chart {
 public:
  RealAddChart(int n, double half_width)
      : Chart("R^" + std::to_string(n), GroupId::real_add(n),
              Box(static_cast<std::size_t>(n), Interval{-half_width, half_width}),
              std::vector<bool>(static_cast<std::size_t>(n), false), "none") {}

  Element to_element(const Point& p) const override { return Element::vector(p.span()); }
  Point from_element(const Element& g) const override {
    Point p(dim());
    for (std::size_t i = 0; i < dim(); ++i) p[i] = g(static_cast<int>(i), 0);
    return p;
  }
  double density(const Point&, Side) const override { return 1.0; }
};

class RealMultChart final : public Chart {
 public:
  explicit RealMultChart(double bound)
      : Chart("R*", GroupId::real_mult(), Box{{-bound, bound}}, {false}, "x = 0") {}

  Element to_element(const Point& p) const override {
    Matrix m(1, 1);
    m(0, 0) = p[0];
    return unchecked_element(group(), m);
  }
  Point from_element(const Element& g) const override { return Point{g(0, 0)}; }
  double density(const Point& p, Side) const override { return 1.0 / std::abs(p[0]); }
  double singular_clearance(const Box& b) const override { return min_abs(b[0]); }
  bool admissible(const Point& p) const override { return p[0] != 0.0; }
};

class GLChart final : public Chart {
 public:
  GLChart(int n, double bound, double shell)
      : Chart("GL(" + std::to_string(n) + ")-entries", GroupId::gl(n),
              Box(static_cast<std::size_t>(n * n), Interval{-bound, bound}),
              std::vector<bool>(static_cast<std::size_t>(n * n), false), "|det X| < " + std::to_string(shell)),
        n_(n),
        shell_(shell) {}

  Element to_element(const Point& p) const override { return unchecked_element(group(), to_matrix(p)); }
  Point from_element(const Element& g) const override {
    Point p(dim());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) p[static_cast<std::size_t>(i * n_ + j)] = g(i, j);
    return p;
  }
  double density(const Point& p, Side) const override {
    return 1.0 / std::pow(std::abs(to_matrix(p).determinant()), n_);
  }

  // det is affine in every entry, so its extrema over a box sit at vertices.
  double singular_clearance(const Box& b) const override {
    const std::size_t k = b.size();
    double lo = kInf;
    bool pos = false, neg = false;
    Point v(k);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      for (std::size_t i = 0; i < k; ++i) v[i] = (mask >> i) & 1U ? b[i].hi : b[i].lo;
      const double det = to_matrix(v).determinant();
      pos |= det > 0.0;
      neg |= det < 0.0;
      lo = std::min(lo, std::abs(det));
    }
    if ((pos && neg) || lo == 0.0) return 0.0;
    return std::max(0.0, lo - shell_);
  }
  bool admissible(const Point& p) const override { return std::abs(to_matrix(p).determinant()) > 0.0; }

 private:
  Matrix to_matrix(const Point& p) const {
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = p[static_cast<std::size_t>(i * n_ + j)];
    return m;
  }

  int n_;
  double shell_;
};

class IwasawaChart final : public Chart {
 public:
  explicit IwasawaChart(double bound)
      : Chart("SL(2)-iwasawa", GroupId::sl2(), Box{{-bound, bound}, {0.0, bound}, {0.0, kTwoPi}},
              {false, false, true}, "y <= 0") {}

  Element to_element(const Point& p) const override { return iwasawa_compose({p[0], p[1], p[2]}); }
  Point from_element(const Element& g) const override {
    const auto c = iwasawa_decompose(g);
    return Point{c.x, c.y, c.theta};
  }
  double density(const Point& p, Side) const override { return 1.0 / (p[1] * p[1]); }
  double singular_clearance(const Box& b) const override { return std::max(0.0, b[1].lo); }
  bool admissible(const Point& p) const override { return p[1] > 0.0; }
};

class SL2EntriesChart final : public Chart {
 public:
  explicit SL2EntriesChart(double bound)
      : Chart("SL(2)-entries", GroupId::sl2(), Box{{-bound, bound}, {-bound, bound}, {-bound, bound}},
              {false, false, false}, "a = 0") {}

  Element to_element(const Point& p) const override {
    Matrix m(2, 2);
    m << p[0], p[1], p[2], (1.0 + p[1] * p[2]) / p[0];
    return unchecked_element(group(), m);
  }
  Point from_element(const Element& g) const override { return Point{g(0, 0), g(0, 1), g(1, 0)}; }
  // With a, b, c free, d(a,b,c) = da db dc /|a| is invariant; the factor 2
  // matches the Iwasawa normalization d(theta) dx dy / y^2.
  double density(const Point& p, Side) const override { return 2.0 / std::abs(p[0]); }
  double singular_clearance(const Box& b) const override { return min_abs(b[0]); }
  bool admissible(const Point& p) const override { return p[0] != 0.0; }
};

class SO2Chart final : public Chart {
 public:
  SO2Chart() : Chart("SO(2)-angle", GroupId::so2(), Box{{0.0, kTwoPi}}, {true}, "none") {}

  Element to_element(const Point& p) const override { return so2_rotation(p[0]); }
  Point from_element(const Element& g) const override {
    return Point{normalize_angle(std::atan2(g(1, 0), g(0, 0)))};
  }
  double density(const Point&, Side) const override { return 1.0; }
};

class TriangularPChart final : public Chart {
 public:
  explicit TriangularPChart(double bound)
      : Chart("P-xy", GroupId::triangular_p(), Box{{-bound, bound}, {-bound, bound}}, {false, false}, "x = 0") {}

  Element to_element(const Point& p) const override {
    Matrix m(2, 2);
    m << p[0], p[1], 0.0, 1.0 / p[0];
    return unchecked_element(group(), m);
  }
  Point from_element(const Element& g) const override { return Point{g(0, 0), g(0, 1)}; }
  double density(const Point& p, Side side) const override {
    return side == Side::Left ? 1.0 / (p[0] * p[0]) : 1.0;
  }
  double singular_clearance(const Box& b) const override { return min_abs(b[0]); }
  bool admissible(const Point& p) const override { return p[0] != 0.0; }
};

}  // namespace

Chart::Chart(std::string name, GroupId group, Box box, std::vector<bool> periodic, std::string singular_locus)
    : name_(std::move(name)),
      group_(group),
      box_(std::move(box)),
      periodic_(std::move(periodic)),
      singular_locus_(std::move(singular_locus)) {}

double Chart::singular_clearance(const Box&) const { return kInf; }

bool Chart::admissible(const Point&) const { return true; }

bool Chart::contains(const Box& b) const {
  if (b.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (periodic(i)) continue;
    if (b[i].lo < box_[i].lo || b[i].hi > box_[i].hi) return false;
  }
  return true;
}

ChartPtr real_add_chart(int n, double half_width) { return std::make_shared<RealAddChart>(n, half_width); }
ChartPtr real_mult_chart(double bound) { return std::make_shared<RealMultChart>(bound); }
ChartPtr gl_chart(int n, double bound, double det_shell) { return std::make_shared<GLChart>(n, bound, det_shell); }
ChartPtr sl2_iwasawa_chart(double bound) { return std::make_shared<IwasawaChart>(bound); }
ChartPtr sl2_entries_chart(double bound) { return std::make_shared<SL2EntriesChart>(bound); }
ChartPtr so2_chart() { return std::make_shared<SO2Chart>(); }
ChartPtr triangular_p_chart(double bound) { return std::make_shared<TriangularPChart>(bound); }

ChartPtr default_chart(const GroupId& group) {
  switch (group.kind) {
    case GroupKind::RealAdd:
      return real_add_chart(group.n);
    case GroupKind::RealMult:
      return real_mult_chart();
    case GroupKind::GL:
      return gl_chart(group.n);
    case GroupKind::SL2:
      return sl2_iwasawa_chart();
    case GroupKind::SO2:
      return so2_chart();
    case GroupKind::TriangularP:
      return triangular_p_chart();
  }
  throw MembershipError("unknown group");
}

double haar_density(const Chart& chart, const Point& p, Side side) {
  if (p.size() != chart.dim()) throw DomainError("parameter has wrong dimension for chart " + chart.name());
  const Box pb = point_box(p);
  if (!chart.contains(pb)) throw DomainError("parameter outside the box of chart " + chart.name());
  if (!chart.admissible(p) || chart.singular_clearance(pb) <= 0.0) {
    throw DomainError("parameter on the singular locus (" + chart.singular_locus() + ") of chart " + chart.name());
  }
  return chart.density(p, side);
}

double wrapped_difference(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d < -0.5 * period) d += period;
  if (d >= 0.5 * period) d -= period;
  return d;
}

double chart_roundtrip_error(const Chart& chart, const Point& p) {
  const Point q = chart.from_element(chart.to_element(p));
  double err = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = chart.periodic(i) ? wrapped_difference(q[i], p[i], chart.period(i)) : q[i] - p[i];
    err = std::max(err, std::abs(d));
  }
  return err;
}

}  // namespace haarlib
