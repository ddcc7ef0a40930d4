#include "haarlib/groups.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <sstream>

namespace haarlib {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Determinant deviations scale with the square of the entries.
double det_tolerance(const Matrix& m, double tol) {
  const double s = std::max(1.0, max_abs_entry(m));
  return tol * s * s;
}

void require_same_group(const Element& g, const Element& h) {
  if (!(g.group() == h.group())) {
    throw MembershipError("cannot combine elements of " + g.group().name() + " and " + h.group().name());
  }
}

}  // namespace

GroupId GroupId::real_add(int n) {
  if (n < 1 || n > kMaxMatrixSize) throw MembershipError("RealAdd(n) needs 1 <= n <= 4");
  return {GroupKind::RealAdd, n};
}

GroupId GroupId::gl(int n) {
  if (n < 1 || n > kMaxMatrixSize) throw MembershipError("GL(n) needs 1 <= n <= 4");
  return {GroupKind::GL, n};
}

int GroupId::rows() const noexcept {
  switch (kind) {
    case GroupKind::RealAdd:
    case GroupKind::GL:
      return n;
    case GroupKind::RealMult:
      return 1;
    case GroupKind::SL2:
    case GroupKind::SO2:
    case GroupKind::TriangularP:
      return 2;
  }
  return 0;
}

std::string GroupId::name() const {
  switch (kind) {
    case GroupKind::RealAdd:
      return "R^" + std::to_string(n);
    case GroupKind::RealMult:
      return "R*";
    case GroupKind::GL:
      return "GL(" + std::to_string(n) + ",R)";
    case GroupKind::SL2:
      return "SL(2,R)";
    case GroupKind::SO2:
      return "SO(2)";
    case GroupKind::TriangularP:
      return "P";
  }
  return "?";
}

bool is_member(const GroupId& group, const Matrix& m, double tol) {
  if (m.rows() != group.rows() || m.cols() != group.cols()) return false;
  if (!m.allFinite()) return false;
  switch (group.kind) {
    case GroupKind::RealAdd:
      return true;
    case GroupKind::RealMult:
      return std::abs(m(0, 0)) > tol;
    case GroupKind::GL:
      return std::abs(m.determinant()) > tol;
    case GroupKind::SL2:
      return std::abs(m.determinant() - 1.0) <= det_tolerance(m, tol);
    case GroupKind::TriangularP:
      return m(1, 0) == 0.0 && std::abs(m.determinant() - 1.0) <= det_tolerance(m, tol);
    case GroupKind::SO2: {
      const Matrix gram = m.transpose() * m;
      const double orth = (gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff();
      return orth <= tol && std::abs(m.determinant() - 1.0) <= tol;
    }
  }
  return false;
}

Element Element::make(const GroupId& group, const Matrix& m, double tol) {
  if (!is_member(group, m, tol)) {
    std::ostringstream os;
    os << "matrix is not a member of " << group.name() << ":\n" << m;
    throw MembershipError(os.str());
  }
  return Element(group, m);
}

Element Element::scalar(double x) {
  Matrix m(1, 1);
  m(0, 0) = x;
  return make(GroupId::real_mult(), m);
}

Element Element::vector(std::span<const double> coords) {
  const auto group = GroupId::real_add(static_cast<int>(coords.size()));
  Matrix m(group.rows(), 1);
  for (std::size_t i = 0; i < coords.size(); ++i) m(static_cast<int>(i), 0) = coords[i];
  return make(group, m);
}

Element Element::vector(std::initializer_list<double> coords) {
  return vector(std::span<const double>(coords.begin(), coords.size()));
}

Element unchecked_element(const GroupId& group, const Matrix& m) { return Element(group, m); }

Element multiply(const Element& g, const Element& h) {
  require_same_group(g, h);
  if (g.group().kind == GroupKind::RealAdd) return Element(g.group(), g.matrix() + h.matrix());
  return Element(g.group(), g.matrix() * h.matrix());
}

Element invert(const Element& g) {
  const Matrix& m = g.matrix();
  switch (g.group().kind) {
    case GroupKind::RealAdd:
      return Element(g.group(), -m);
    case GroupKind::RealMult: {
      Matrix r(1, 1);
      r(0, 0) = 1.0 / m(0, 0);
      return Element(g.group(), r);
    }
    case GroupKind::SO2:
      return Element(g.group(), m.transpose());
    case GroupKind::SL2: {
      // Adjugate; exact inverse for det 1.
      Matrix r(2, 2);
      r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
      return Element(g.group(), r);
    }
    case GroupKind::TriangularP: {
      Matrix r(2, 2);
      r << 1.0 / m(0, 0), -m(0, 1), 0.0, m(0, 0);
      return Element(g.group(), r);
    }
    case GroupKind::GL:
      return Element(g.group(), m.inverse());
  }
  throw MembershipError("unknown group");
}

Element identity(const GroupId& group) {
  if (group.kind == GroupKind::RealAdd) return Element(group, Matrix::Zero(group.rows(), 1));
  return Element(group, Matrix::Identity(group.rows(), group.rows()));
}

double max_abs_diff(const Element& a, const Element& b) {
  if (a.matrix().rows() != b.matrix().rows() || a.matrix().cols() != b.matrix().cols()) {
    throw MembershipError("shape mismatch");
  }
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// --- SL2 -------------------------------------------------------------------

Element sl2_n(double x) {
  Matrix m(2, 2);
  m << 1.0, x, 0.0, 1.0;
  return unchecked_element(GroupId::sl2(), m);
}

Element sl2_a(double y) {
  if (!(y > 0.0)) throw DomainError("a(y) needs y > 0");
  const double s = std::sqrt(y);
  Matrix m(2, 2);
  m << s, 0.0, 0.0, 1.0 / s;
  return unchecked_element(GroupId::sl2(), m);
}

Element sl2_k(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix m(2, 2);
  m << c, s, -s, c;
  return unchecked_element(GroupId::sl2(), m);
}

Element sl2_lower(double q) {
  Matrix m(2, 2);
  m << 1.0, 0.0, q, 1.0;
  return unchecked_element(GroupId::sl2(), m);
}

double normalize_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // -tiny + 2pi rounds up to 2pi
  return r;
}

IwasawaCoords iwasawa_decompose(const Element& g) {
  if (g.group().kind != GroupKind::SL2) throw MembershipError("Iwasawa decomposition needs SL(2,R)");
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  // Bottom row of n(x)a(y)k(theta) is (-sin, cos)/sqrt(y).
  const double r2 = c * c + d * d;
  IwasawaCoords out;
  out.y = 1.0 / r2;
  out.theta = normalize_angle(std::atan2(-c, d));
  out.x = (a * c + b * d) / r2;  // Re(g.i)
  return out;
}

Element iwasawa_compose(const IwasawaCoords& c) {
  const double s = std::sqrt(c.y);
  const double ct = std::cos(c.theta);
  const double st = std::sin(c.theta);
  Matrix m(2, 2);
  m << s * ct - c.x * st / s, s * st + c.x * ct / s, -st / s, ct / s;
  return unchecked_element(GroupId::sl2(), m);
}

std::pair<double, double> mobius(const Element& g, double x, double y) {
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  // (a z + b)/(c z + d) with z = x + i y.
  const double den_re = c * x + d;
  const double den_im = c * y;
  const double num_re = a * x + b;
  const double num_im = a * y;
  const double den = den_re * den_re + den_im * den_im;
  return {(num_re * den_re + num_im * den_im) / den, (num_im * den_re - num_re * den_im) / den};
}

Element so2_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix m(2, 2);
  m << c, -s, s, c;
  return unchecked_element(GroupId::so2(), m);
}

Element triangular_p(double x, double y) {
  if (x == 0.0) throw MembershipError("P needs x != 0");
  Matrix m(2, 2);
  m << x, y, 0.0, 1.0 / x;
  return unchecked_element(GroupId::triangular_p(), m);
}

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

}  // namespace haarlib
