#pragma once

// Per-group test profiles and the property suites run by the command line
// tool and the acceptance test.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "haarlib/invariance.hpp"

namespace haarlib {

/// Identifiers accepted for catalog groups: r<n>, rstar, gl<n>, sl2, so2, p.
GroupId parse_group_id(std::string_view id);
/// The default group list used by `all`.
std::vector<std::string> catalog_ids();

inline const std::vector<std::string>& quotient_instances() {
  static const std::vector<std::string> ids{"rn_zn", "sl2_so2", "sl2_p_negative", "sl2_n_plane"};
  return ids;
}
void check_quotient_instance(std::string_view id);

using ElementSampler = std::function<Element(const CounterRng& rng, std::uint64_t index)>;

struct GroupProfile {
  std::string id;
  GroupId group;
  ChartPtr chart;
  /// Polynomial bumps for invariance checks.
  std::vector<TestFunction> bumps;
  /// Clamped bumps (identically one on an inner box) for modular estimates.
  std::vector<TestFunction> clamped;
  QuadratureSpec quadrature;
  /// For integrals of translated clamped bumps in the modular checks.
  QuadratureSpec modular_quadrature;
  double invariance_tol = 1e-6;
  /// Random translations from a compact window that keeps supports in the chart.
  ElementSampler sampler;
};

GroupProfile group_profile(std::string_view id);

std::vector<Element> sample_elements(const ElementSampler& sampler, std::uint64_t seed, std::uint64_t stream,
                                     std::size_t n);

struct QuadratureOverrides {
  std::optional<int> base_points;
  std::optional<int> max_refinements;
  std::optional<double> rel_tol;
  std::optional<long> mc_samples;

  QuadratureSpec apply(QuadratureSpec q) const;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  int translates = 10;
  QuadratureOverrides quadrature;
  std::optional<double> invariance_tol;
  std::optional<double> modular_tol;
  std::optional<double> weil_tol;
};

inline constexpr double kModularTol = 5e-4;

std::vector<CheckReport> catalog_suite(std::string_view group_id, const SuiteOptions& opt);
std::vector<CheckReport> invariance_suite(std::string_view group_id, const SuiteOptions& opt);
std::vector<CheckReport> modular_suite(std::string_view group_id, const SuiteOptions& opt);
std::vector<CheckReport> weil_suite(std::string_view instance, const SuiteOptions& opt);
std::vector<CheckReport> lattice_suite(const SuiteOptions& opt);
std::vector<CheckReport> tree_suite(int d, int radius, const SuiteOptions& opt);

}  // namespace haarlib
