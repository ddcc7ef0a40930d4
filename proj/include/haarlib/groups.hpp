#pragma once

// Catalog of concrete locally compact groups: element arithmetic, charts and
// closed-form Haar densities.

#include <Eigen/Core>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "haarlib/errors.hpp"
#include "haarlib/point.hpp"

namespace haarlib {

enum class GroupKind { RealAdd, RealMult, GL, SL2, SO2, TriangularP };

/// Identifies one group of the catalog. `n` is meaningful for RealAdd and GL.
struct GroupId {
  GroupKind kind = GroupKind::RealAdd;
  int n = 1;

  static GroupId real_add(int n);
  static GroupId real_mult() { return {GroupKind::RealMult, 1}; }
  static GroupId gl(int n);
  static GroupId sl2() { return {GroupKind::SL2, 2}; }
  static GroupId so2() { return {GroupKind::SO2, 2}; }
  static GroupId triangular_p() { return {GroupKind::TriangularP, 2}; }

  /// Rows of the representing matrix (vector length for RealAdd).
  int rows() const noexcept;
  int cols() const noexcept { return kind == GroupKind::RealAdd ? 1 : rows(); }
  bool is_compact() const noexcept { return kind == GroupKind::SO2; }
  std::string name() const;

  friend bool operator==(const GroupId&, const GroupId&) = default;
};

/// Largest matrix (or vector) size an element may have.
inline constexpr int kMaxMatrixSize = 4;
inline constexpr double kMembershipTol = 1e-9;

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxMatrixSize, kMaxMatrixSize>;

/// Group element stored as a dense matrix (column vector for RealAdd).
/// Immutable; membership is checked at construction.
class Element {
 public:
  static Element make(const GroupId& group, const Matrix& m, double tol = kMembershipTol);
  static Element scalar(double x);                       // RealMult
  static Element vector(std::span<const double> coords);  // RealAdd(coords.size())
  static Element vector(std::initializer_list<double> coords);

  const GroupId& group() const noexcept { return group_; }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Element(const GroupId& g, const Matrix& m) : group_(g), m_(m) {}

  // Group operations build results without re-validating.
  friend Element multiply(const Element&, const Element&);
  friend Element invert(const Element&);
  friend Element identity(const GroupId&);
  friend Element unchecked_element(const GroupId&, const Matrix&);

  GroupId group_;
  Matrix m_;
};

bool is_member(const GroupId& group, const Matrix& m, double tol = kMembershipTol);

Element multiply(const Element& g, const Element& h);
Element invert(const Element& g);
Element identity(const GroupId& group);

/// Builds an element without the membership test. Only for values that are
/// members by construction (chart maps evaluated inside their domain).
Element unchecked_element(const GroupId& group, const Matrix& m);

/// Largest entrywise difference; throws if the shapes differ.
double max_abs_diff(const Element& a, const Element& b);

// --- SL(2,R) factors and Iwasawa coordinates -------------------------------

Element sl2_n(double x);      // (1, x; 0, 1)
Element sl2_a(double y);      // (sqrt y, 0; 0, 1/sqrt y), y > 0
Element sl2_k(double theta);  // (cos, sin; -sin, cos)
Element sl2_lower(double q);  // (1, 0; q, 1)

struct IwasawaCoords {
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;
};

/// g = n(x) a(y) k(theta) with y > 0 and theta in [0, 2pi).
IwasawaCoords iwasawa_decompose(const Element& g);
Element iwasawa_compose(const IwasawaCoords& c);

/// Reduces an angle into [0, 2pi).
double normalize_angle(double theta);

/// Moebius action on the upper half plane; returns (Re, Im) of g.z.
std::pair<double, double> mobius(const Element& g, double x, double y);

Element so2_rotation(double theta);
/// The matrix (x, y; 0, 1/x) of the group P.
Element triangular_p(double x, double y);

// --- Charts ----------------------------------------------------------------

enum class Side { Left, Right };

std::string_view to_string(Side s);

/// Parameter box with maps to and from group elements plus Haar densities.
///
/// Coset charts parametrize a homogeneous space G/H instead of G itself:
/// to_element returns a section representative and from_element projects any
/// element of G onto the coset coordinates. Such charts support only the left
/// action.
class Chart {
 public:
  Chart(std::string name, GroupId group, Box box, std::vector<bool> periodic, std::string singular_locus);
  virtual ~Chart() = default;

  const std::string& name() const noexcept { return name_; }
  const GroupId& group() const noexcept { return group_; }
  const Box& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.size(); }
  bool periodic(std::size_t axis) const { return periodic_[axis]; }
  double period(std::size_t axis) const { return box_[axis].width(); }
  const std::string& singular_locus() const noexcept { return singular_locus_; }

  virtual Element to_element(const Point& p) const = 0;
  virtual Point from_element(const Element& g) const = 0;
  /// Density of the left or right Haar measure in these coordinates.
  virtual double density(const Point& p, Side side) const = 0;

  /// How far `b` stays from the singular locus, in the chart's own units
  /// (|det| minus the excluded shell for GL). Zero when the box meets it;
  /// infinity for charts without a singular locus.
  virtual double singular_clearance(const Box& b) const;
  /// Cheap pointwise test: p is off the singular locus.
  virtual bool admissible(const Point& p) const;
  virtual bool is_coset_chart() const { return false; }

  /// Non-periodic axes inside the chart box.
  bool contains(const Box& b) const;

 private:
  std::string name_;
  GroupId group_;
  Box box_;
  std::vector<bool> periodic_;
  std::string singular_locus_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr real_add_chart(int n, double half_width = 50.0);
ChartPtr real_mult_chart(double bound = 1e3);
/// Matrix entries, row-major, inside [-bound, bound]; excludes |det| < shell.
ChartPtr gl_chart(int n, double bound = 10.0, double det_shell = 1e-3);
/// Iwasawa coordinates (x, y, theta); density 1/y^2 on both sides.
ChartPtr sl2_iwasawa_chart(double bound = 50.0);
/// Entries (a, b, c) with d = (1 + bc)/a; density 2/|a|, normalized to
/// agree with the Iwasawa chart.
ChartPtr sl2_entries_chart(double bound = 10.0);
ChartPtr so2_chart();
/// Coordinates (x, y) of (x, y; 0, 1/x); left density 1/x^2, right density 1.
ChartPtr triangular_p_chart(double bound = 50.0);

/// The chart used by default for each catalog group.
ChartPtr default_chart(const GroupId& group);

/// Haar density with domain validation (inside box, off the singular locus).
double haar_density(const Chart& chart, const Point& p, Side side);

/// Round trip check helper: max |from_element(to_element(p)) - p|, periodic
/// axes compared modulo their period.
double chart_roundtrip_error(const Chart& chart, const Point& p);

/// Signed difference a - b, wrapped into [-period/2, period/2).
double wrapped_difference(double a, double b, double period);

}  // namespace haarlib
