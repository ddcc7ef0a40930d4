#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace haarlib {

/// Largest chart dimension supported (GL(4) entries).
inline constexpr std::size_t kMaxChartDim = 16;

/// Chart coordinates. Inline storage so hot quadrature loops never allocate.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t n, double fill = 0.0) : n_(n) {
    assert(n <= kMaxChartDim);
    std::fill_n(v_.begin(), n, fill);
  }
  Point(std::initializer_list<double> values) : n_(values.size()) {
    assert(values.size() <= kMaxChartDim);
    std::copy(values.begin(), values.end(), v_.begin());
  }
  explicit Point(std::span<const double> values) : n_(values.size()) {
    assert(values.size() <= kMaxChartDim);
    std::copy(values.begin(), values.end(), v_.begin());
  }

  std::size_t size() const noexcept { return n_; }
  double& operator[](std::size_t i) noexcept { return v_[i]; }
  double operator[](std::size_t i) const noexcept { return v_[i]; }

  double* begin() noexcept { return v_.data(); }
  double* end() noexcept { return v_.data() + n_; }
  const double* begin() const noexcept { return v_.data(); }
  const double* end() const noexcept { return v_.data() + n_; }

  std::span<const double> span() const noexcept { return {v_.data(), n_}; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<double, kMaxChartDim> v_{};
  std::size_t n_ = 0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  double mid() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  /// Strict containment of `inner` in the interior of this interval.
  bool strictly_contains(const Interval& inner) const noexcept {
    return lo < inner.lo && inner.hi < hi;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed axis-aligned box, one interval per chart axis.
using Box = std::vector<Interval>;

inline Box point_box(const Point& p) {
  Box b(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) b[i] = {p[i], p[i]};
  return b;
}

inline double box_volume(const Box& b) {
  double v = 1.0;
  for (const auto& iv : b) v *= iv.width();
  return v;
}

}  // namespace haarlib
