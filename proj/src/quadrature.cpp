#include "haarlib/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "haarlib/errors.hpp"

namespace haarlib {

void QuadratureSpec::validate() const {
  if (base_points_per_axis < 4) throw ConfigError("base_points_per_axis must be >= 4");
  if (max_refinements < 1) throw ConfigError("max_refinements must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("rel_tol must lie in (0, 1)");
  if (!(abs_tol >= 0.0)) throw ConfigError("abs_tol must be >= 0");
  if (mc_samples < 1) throw ConfigError("mc_samples must be positive");
  if (workers < 1) throw ConfigError("workers must be positive");
}

const GaussRule& gauss_legendre(int points) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;

  // Boost returns the non-negative zeros in ascending order.
  const auto zeros = boost::math::legendre_p_zeros<double>(points);
  GaussRule rule;
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime(points, x);
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  };
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
    if (*z != 0.0) add(-*z);
  }
  for (double z : zeros) add(z);
  return cache.emplace(points, std::move(rule)).first->second;
}

std::vector<double> geometric_cuts(double lo, double hi, double ratio) {
  std::vector<double> cuts;
  if (!(lo > 0.0) || !(hi > lo) || !(ratio > 1.0)) return cuts;
  // Logs first: hi / lo may overflow.
  const double span = std::log(hi) - std::log(lo);
  const int pieces = static_cast<int>(std::ceil(span / std::log(ratio)));
  const double step = span / pieces;
  for (int i = 1; i < pieces; ++i) cuts.push_back(std::exp(std::log(lo) + step * i));
  return cuts;
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct AxisNodes {
  std::vector<double> x;
  std::vector<double> w;
};

AxisNodes axis_nodes(const Interval& iv, int points, int level, const std::vector<double>* cuts) {
  std::vector<double> edges{iv.lo};
  if (cuts != nullptr) {
    for (double c : *cuts) {
      if (c > iv.lo && c < iv.hi) edges.push_back(c);
    }
    std::sort(edges.begin() + 1, edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  edges.push_back(iv.hi);

  const GaussRule& rule = gauss_legendre(points);
  const int split = 1 << level;
  AxisNodes out;
  out.x.reserve((edges.size() - 1) * static_cast<std::size_t>(split * points));
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double h = (edges[e + 1] - edges[e]) / split;
    for (int s = 0; s < split; ++s) {
      const double a = edges[e] + s * h;
      const double half = 0.5 * h;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        out.x.push_back(a + half * (1.0 + rule.nodes[j]));
        out.w.push_back(half * rule.weights[j]);
      }
    }
  }
  return out;
}

}  // namespace

double tensor_rule(const Integrand& f, const Box& box, int points_per_axis, int level, const AxisCuts& cuts,
                   int workers, long* evaluations) {
  const std::size_t k = box.size();
  if (k == 0) return 0.0;
  if (box_volume(box) == 0.0) return 0.0;

  std::vector<AxisNodes> axes(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::vector<double>* c = i < cuts.size() ? &cuts[i] : nullptr;
    axes[i] = axis_nodes(box[i], points_per_axis, level, c);
  }

  long inner_count = 1;
  for (std::size_t i = 1; i < k; ++i) inner_count *= static_cast<long>(axes[i].x.size());

  // One chunk per node of the first axis; the chunk shape is independent of
  // the worker count, which keeps the reduction order fixed.
  const std::size_t outer = axes[0].x.size();
  std::vector<double> partial(outer, 0.0);
  parallel_for(outer, workers, [&](std::size_t i0) {
    Point p(k);
    p[0] = axes[0].x[i0];
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t i = 1; i < k; ++i) p[i] = axes[i].x[0];
    double sum = 0.0;
    for (long count = 0; count < inner_count; ++count) {
      double w = 1.0;
      for (std::size_t i = 1; i < k; ++i) w *= axes[i].w[idx[i]];
      const double v = f(p);
      if (v != 0.0) sum += w * v;
      // odometer over axes 1..k-1
      for (std::size_t i = k - 1; i >= 1; --i) {
        if (++idx[i] < axes[i].x.size()) {
          p[i] = axes[i].x[idx[i]];
          break;
        }
        idx[i] = 0;
        p[i] = axes[i].x[0];
      }
    }
    partial[i0] = axes[0].w[i0] * sum;
  });
  if (evaluations != nullptr) *evaluations += static_cast<long>(outer) * inner_count;
  return pairwise_sum(partial);
}

IntegralResult integrate_box(const Integrand& f, const Box& box, const QuadratureSpec& q, const AxisCuts& cuts) {
  q.validate();
  IntegralResult out;
  double previous = tensor_rule(f, box, q.base_points_per_axis, 0, cuts, q.workers, &out.evaluations);
  double diff = 0.0;
  for (int level = 1; level <= q.max_refinements; ++level) {
    const double current = tensor_rule(f, box, q.base_points_per_axis, level, cuts, q.workers, &out.evaluations);
    diff = std::abs(current - previous);
    out.value = current;
    out.error_estimate = diff;
    out.refinements = level;
    if (diff <= std::max(q.rel_tol * std::abs(current), q.abs_tol)) return out;
    previous = current;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg, "quadrature did not reach rel_tol %g after %d refinements (value %.12g, last difference %g)",
                q.rel_tol, q.max_refinements, out.value, diff);
  throw ConvergenceError(msg, out.value, diff);
}

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept { return mix64(key_ ^ mix64(counter)); }

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

}  // namespace haarlib
