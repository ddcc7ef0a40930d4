#pragma once

// Lattices in R^n: periodization over exact finite sums, integration over
// the fundamental parallelepiped and the unimodularity check.

#include <Eigen/Core>
#include <vector>

#include "haarlib/invariance.hpp"

namespace haarlib {

/// Lattice B Z^n in R^n; the columns of B are the generators.
class LatticeSpec {
 public:
  static LatticeSpec from_generators(const std::vector<std::vector<double>>& generators);

  int dim() const noexcept { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  double covolume() const noexcept { return covolume_; }
  /// Coordinates u with x = B u.
  Eigen::VectorXd to_cell(std::span<const double> x) const;
  /// Bounding box of B^-1 box in cell coordinates.
  Box cell_box(const Box& box) const;
  std::vector<Element> generator_elements() const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd inverse_;
  double covolume_ = 0.0;
};

/// x -> sum over gamma of f(x + gamma); the sum runs over the finitely many
/// gamma for which x + gamma can meet the support box of f.
std::function<double(const Point&)> periodize(const LatticeSpec& lattice, const CompactFunction& f);

/// Number of lattice translates the periodization visits at x.
std::size_t periodization_terms(const LatticeSpec& lattice, const CompactFunction& f, const Point& x);

/// Integral of a lattice-periodic function over the fundamental domain
/// F = B [0, 1)^n. `cell_cuts` are breakpoints in cell coordinates.
IntegralResult quotient_integrate_lattice(const LatticeSpec& lattice, const std::function<double(const Point&)>& f,
                                          const QuadratureSpec& q, const AxisCuts& cell_cuts = {});

/// Cell-coordinate breakpoints of the periodization of f (the support edges
/// reduced modulo 1).
AxisCuts periodization_cuts(const LatticeSpec& lattice, const CompactFunction& f);

/// int_{R^n} f compared with the integral of its periodization over F.
CheckReport check_periodization(const LatticeSpec& lattice, const TestFunction& f, double tol,
                                const QuadratureSpec& q);

/// Delta_G on the generators: estimated by quadrature with `f` and by the
/// closed form, both compared with Delta_Gamma = 1.
CheckReport check_lattice_unimodular(const TestFunction& f, std::span<const Element> generators, double tol,
                                     const QuadratureSpec& q);

}  // namespace haarlib
