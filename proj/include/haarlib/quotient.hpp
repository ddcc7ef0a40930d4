#pragma once

// Quotient integration G/H: coset charts, fibre averages, the quotient
// integration formula and the existence criterion for invariant measures on
// homogeneous spaces. Lattices in R^n live in lattice.hpp.

#include <functional>
#include <span>
#include <string>
#include <utility>

#include "haarlib/invariance.hpp"

namespace haarlib {

/// Upper half plane (x, y), y > 0, as SL(2)/SO(2): section n(x) a(y),
/// projection g -> g.i, density 1/y^2.
ChartPtr half_plane_chart(double bound = 50.0);
/// Punctured plane as SL(2)/N: section with first column v, projection
/// g -> g e1, density 2.
ChartPtr punctured_plane_chart(double bound = 50.0);
/// Big cell of the projective line as SL(2)/P: section (1, 0; q, 1),
/// projection g -> c/a, density 1.
ChartPtr big_cell_chart(double bound = 50.0);

/// G = s(q) h with s the quotient chart's section and h = h_embed(p_H).
struct QuotientSpec {
  std::string id;
  ChartPtr g_chart;
  ChartPtr quotient_chart;
  ChartPtr h_chart;
  /// Side of the H density used for nu.
  Side h_side = Side::Left;
  std::function<Element(const Point&)> h_embed;
  /// g -> (quotient params, H params).
  std::function<std::pair<Point, Point>(const Element&)> decompose;
};

QuotientSpec sl2_so2_quotient();
QuotientSpec sl2_n_quotient();
/// G/P with the naive density dq on the big cell. Delta_G and Delta_P differ
/// on P, so no normalization of xi satisfies the quotient formula.
QuotientSpec sl2_p_quotient();

/// Boxes in the quotient and H charts enclosing every (q, h) with
/// s(q) h in the support of f.
struct FibreBoxes {
  Box quotient;
  Box h;
};
FibreBoxes fibre_boxes(const QuotientSpec& qs, const CompactFunction& f);

/// h -> f(g h_embed(h)) integrated against nu over `h_box`.
double fibre_integral(const QuotientSpec& qs, const CompactFunction& f, const Element& g, const Box& h_box,
                      const QuadratureSpec& q);

/// The fibre average q -> int_H f(s(q) h) dnu(h) as a compact function on
/// the quotient chart.
CompactFunction average_over_h(const QuotientSpec& qs, const CompactFunction& f, const QuadratureSpec& q);

struct WeilSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs == 0.0 ? (lhs == 0.0 ? 1.0 : 0.0) : lhs / rhs; }
};

/// Left side: int_G f dmu. Right side: int_{G/H} f_H dxi.
WeilSides weil_sides(const QuotientSpec& qs, const CompactFunction& f, const QuadratureSpec& q);

/// Runs the quotient formula on every bump. The deviation is the largest
/// |ratio - 1|, and `constancy` carries the spread of the ratios.
struct WeilOutcome {
  CheckReport formula;
  CheckReport constancy;
  std::vector<WeilSides> sides;
};
WeilOutcome weil_check(const QuotientSpec& qs, std::span<const TestFunction> bumps, double tol,
                       double constancy_tol, const QuadratureSpec& q);

/// Compares Delta_G(embed(h)) with Delta_H(h) on the sampled h.
CheckReport existence_criterion(std::span<const Element> h_samples, const std::function<Element(const Element&)>& embed,
                                double tol);

/// Left invariance of dx dy / y^2 under Moebius maps, for a test function on
/// the half plane chart.
CheckReport hyperbolic_invariance_check(const TestFunction& f, std::span<const Element> translates, double tol,
                                        const QuadratureSpec& q);

}  // namespace haarlib
