#pragma once

// Checks of the Haar axioms, the modular function and the left/right
// conversion, all computed by quadrature on chart coordinates.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "haarlib/measure.hpp"

namespace haarlib {

/// Outcome of one property check.
struct CheckReport {
  std::string name;
  std::string group;
  double estimate = 0.0;
  std::optional<double> reference;
  double max_rel_deviation = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  bool passed = false;
  double tolerance = 0.0;
  /// Short name of the property being checked ("left-invariance", ...).
  std::string anchor;
  /// Negative controls pass when the deviation exceeds the tolerance.
  bool expect_failure = false;
  /// Exact values (trees), serialized as "p/q".
  std::optional<std::string> exact_estimate;
  std::optional<std::string> exact_reference;
  /// Additional string columns (tree table, error messages).
  std::vector<std::pair<std::string, std::string>> fields;

  /// Sets `passed` from deviation, tolerance and expect_failure.
  void decide();
};

/// |a - b| / |b|, or |a - b| when b = 0.
double relative_deviation(double a, double b);

/// Compares the integral of f with the integrals of its translates.
/// `density` picks the Haar density; `action` the regular representation.
CheckReport check_invariance(const TestFunction& f, std::span<const Element> translates, RegularAction action,
                             Side density, double tol, const QuadratureSpec& q);

CheckReport check_left_invariance(const TestFunction& f, std::span<const Element> translates, double tol,
                                  const QuadratureSpec& q, Side density = Side::Left);
CheckReport check_right_invariance(const TestFunction& f, std::span<const Element> translates, double tol,
                                   const QuadratureSpec& q, Side density = Side::Right);

/// lambda(rho(g^-1) f) / lambda(f) with lambda the left Haar integral.
double estimate_modular(const TestFunction& f, const Element& g, const QuadratureSpec& q);
/// Same with lambda(f) supplied by the caller.
double estimate_modular(const TestFunction& f, const Element& g, const QuadratureSpec& q, double base);

/// 1 on the unimodular catalog groups, x^-2 on P.
double modular_closed_form(const Element& g);

/// |det Ad(g)| on a fixed basis of the Lie algebra.
double det_ad(const Element& g);

/// Lie algebra basis used by det_ad.
std::vector<Matrix> lie_algebra_basis(const GroupId& group);

/// Right Haar integral obtained as the left integral of f(x) Delta(x^-1).
IntegralResult right_from_left(const TestFunction& f, const QuadratureSpec& q);

struct CompactnessResult {
  CheckReport report;
  std::vector<double> scales;
  std::vector<double> masses;
  /// Closed-form masses where known.
  std::vector<std::optional<double>> closed_forms;
};

/// Threshold a non-compact group's mass must pass at the largest scale.
inline constexpr double kUnboundedMassThreshold = 1e3;

/// Compact groups: total mass of the chart. Otherwise Haar mass of a family of
/// boxes growing with `scales`; passes when the masses increase strictly,
/// exceed kUnboundedMassThreshold and match closed forms where known.
/// Empty scales select a default family per group.
CompactnessResult check_compact_finiteness(const GroupId& group, std::vector<double> scales,
                                           const QuadratureSpec& q);

}  // namespace haarlib
