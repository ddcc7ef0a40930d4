#pragma once

// Deterministic tensor Gauss-Legendre quadrature with dyadic refinement and a
// counter-based random stream for Monte Carlo cross-checks.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "haarlib/point.hpp"

namespace haarlib {

struct QuadratureSpec {
  int base_points_per_axis = 8;
  int max_refinements = 6;
  double rel_tol = 1e-8;
  /// Absolute floor for the convergence test; integrals near zero would
  /// otherwise never meet rel_tol.
  double abs_tol = 0.0;
  long mc_samples = 200000;
  std::uint64_t seed = 0;
  /// Threads used per integral; results do not depend on it.
  int workers = 1;

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  int refinements = 0;
};

using Integrand = std::function<double(const Point&)>;

/// Extra cut points per axis; panels never straddle a cut. Empty inner
/// vectors mean no cuts on that axis.
using AxisCuts = std::vector<std::vector<double>>;

/// Geometric cut points on [lo, hi] (0 < lo) so adjacent cuts differ by at
/// most `ratio`.
std::vector<double> geometric_cuts(double lo, double hi, double ratio = 2.0);

/// Integrates `f` over `box` with tensor Gauss-Legendre. Level r splits every
/// base panel into 2^r pieces; refinement stops once two successive levels
/// agree to rel_tol. Throws ConvergenceError otherwise.
IntegralResult integrate_box(const Integrand& f, const Box& box, const QuadratureSpec& q, const AxisCuts& cuts = {});

/// One fixed level of the tensor rule (no adaptivity).
double tensor_rule(const Integrand& f, const Box& box, int points_per_axis, int level, const AxisCuts& cuts,
                   int workers, long* evaluations = nullptr);

/// Summation in a fixed binary-tree shape.
double pairwise_sum(std::span<const double> values);

/// Runs body(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

/// Counter-based generator: every (key, stream, counter) triple maps to an
/// independent 64-bit value, so parallel draws are order-free.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// Uniform in [0, 1).
  double uniform(std::uint64_t counter) const noexcept;
  double uniform(std::uint64_t counter, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(counter);
  }
  CounterRng split(std::uint64_t stream) const noexcept { return CounterRng(key_, stream); }

 private:
  std::uint64_t key_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int points);

}  // namespace haarlib
