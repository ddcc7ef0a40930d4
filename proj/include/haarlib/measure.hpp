#pragma once

// Compactly supported test functions on chart coordinates and their
// integrals against Haar densities.

#include <functional>
#include <optional>

#include "haarlib/groups.hpp"
#include "haarlib/quadrature.hpp"

namespace haarlib {

/// Minimal distance a test-function support keeps from a singular locus.
inline constexpr double kSingularMargin = 1e-3;

enum class BumpProfile {
  /// coefficient * prod (1 - ((p - c)/r)^2)_+^k
  Polynomial,
  /// exactly coefficient on the inner box, C^(k-1) roll-off to zero on the
  /// outer box boundary
  Clamped,
};

/// A compactly supported polynomial bump on chart coordinates.
class TestFunction {
 public:
  static TestFunction polynomial(ChartPtr chart, const Point& center, const Point& radius, int exponent = 4,
                                 double coefficient = 1.0);
  static TestFunction clamped(ChartPtr chart, const Box& inner, const Box& outer, int exponent = 4,
                              double coefficient = 1.0);

  double operator()(const Point& p) const;

  const ChartPtr& chart() const noexcept { return chart_; }
  BumpProfile profile() const noexcept { return profile_; }
  const Point& center() const noexcept { return center_; }
  const Point& radius() const noexcept { return radius_; }
  int exponent() const noexcept { return exponent_; }
  double coefficient() const noexcept { return coefficient_; }
  const Box& support_box() const noexcept { return support_; }
  /// Inner box of a clamped bump (empty for Polynomial).
  const Box& inner_box() const noexcept { return inner_; }

  TestFunction scaled(double factor) const;

 private:
  TestFunction() = default;
  double axis_factor(std::size_t axis, double t) const;

  ChartPtr chart_;
  BumpProfile profile_ = BumpProfile::Polynomial;
  Point center_;
  Point radius_;
  int exponent_ = 4;
  double coefficient_ = 1.0;
  Box support_;
  Box inner_;
  std::vector<bool> full_circle_;
};

/// Urysohn-style bump with K < f < U for boxes K inside U. The unclamped
/// variant is the polynomial bump centred in U (f > 0 on K, f(center) = 1);
/// the clamped variant is identically 1 on K.
TestFunction urysohn_bump(ChartPtr chart, const Box& inner, const Box& outer, bool clamped = false, int exponent = 4);

/// An evaluable function on chart coordinates with a known bounding box of
/// its support. Every function the integrators accept goes through this.
struct CompactFunction {
  ChartPtr chart;
  Box support;
  std::function<double(const Point&)> eval;
  /// Axis cuts where eval has kinks (panel edges for the quadrature).
  AxisCuts cuts;

  double operator()(const Point& p) const { return eval(p); }
};

CompactFunction as_compact(const TestFunction& f);
CompactFunction zero_function(ChartPtr chart, const Box& support);
/// a f + b g, support on the hull of both boxes.
CompactFunction linear_combination(double a, const CompactFunction& f, double b, const CompactFunction& g);

enum class RegularAction {
  /// (lambda(g) f)(x) = f(g^-1 x)
  Left,
  /// (rho(g) f)(x) = f(x g)
  Right,
};

/// Translate of f with a validated bounding box for its support.
/// Throws DomainError when that box leaves the chart.
CompactFunction translate(const CompactFunction& f, const Element& g, RegularAction action);
CompactFunction translate(const TestFunction& f, const Element& g, RegularAction action);

/// Integral of f against the chosen Haar density over f's support box.
IntegralResult integrate(const CompactFunction& f, Side side, const QuadratureSpec& q);
IntegralResult integrate(const TestFunction& f, Side side, const QuadratureSpec& q);

/// Integral of f(p) * weight(p) * density(p).
IntegralResult integrate_weighted(const CompactFunction& f, const std::function<double(const Point&)>& weight,
                                  Side side, const QuadratureSpec& q);

/// Uniform Monte Carlo over the support box; error_estimate is one standard
/// error.
IntegralResult mc_integrate(const CompactFunction& f, Side side, const QuadratureSpec& q);
IntegralResult mc_integrate(const TestFunction& f, Side side, const QuadratureSpec& q);

/// Boundary samples of a box: every vertex plus a per-face grid, at least
/// `min_samples` points in total.
std::vector<Point> box_boundary_samples(const Box& b, std::size_t min_samples = 100);

/// Cell centres of a per_axis^k grid on b.
std::vector<Point> interior_grid(const Box& b, std::size_t per_axis);

/// Bounding box of chart points; periodic axes use the shortest arc that
/// covers all samples.
Box bounding_box(const Chart& chart, const std::vector<Point>& pts);

/// Widen every axis by `fraction` of its width (split evenly on both sides).
/// Periodic axes are capped at one period.
Box inflate(const Chart& chart, const Box& b, double fraction);

}  // namespace haarlib
