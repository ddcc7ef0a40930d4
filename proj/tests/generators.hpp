#pragma once

// Hand-rolled random inputs for property tests. Fixed seeds keep every run
// identical.

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "haarlib/groups.hpp"

namespace haarlib::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }

  Element sl2() { return multiply(multiply(sl2_n(uniform(-2, 2)), sl2_a(std::exp(uniform(-1, 1)))), sl2_k(uniform(0, 7))); }

  Element gl(int n) {
    for (;;) {
      Matrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = uniform(-0.4, 0.4) + (i == j ? (coin() ? 1.0 : -1.0) : 0.0);
      if (std::abs(m.determinant()) > 0.05) return Element::make(GroupId::gl(n), m);
    }
  }

  Element element(const GroupId& g) {
    switch (g.kind) {
      case GroupKind::RealAdd: {
        std::vector<double> v(static_cast<std::size_t>(g.n));
        for (auto& x : v) x = uniform(-5, 5);
        return Element::vector(v);
      }
      case GroupKind::RealMult:
        return Element::scalar((coin() ? 1.0 : -1.0) * std::exp(uniform(-2, 2)));
      case GroupKind::GL:
        return gl(g.n);
      case GroupKind::SL2:
        return sl2();
      case GroupKind::SO2:
        return so2_rotation(uniform(-10, 10));
      case GroupKind::TriangularP:
        return triangular_p((coin() ? 1.0 : -1.0) * std::exp(uniform(-1.5, 1.5)), uniform(-1, 1));
    }
    return identity(g);
  }

 private:
  std::mt19937_64 eng_;
};

inline std::vector<GroupId> catalog_groups() {
  return {GroupId::real_add(1), GroupId::real_add(2), GroupId::real_add(3), GroupId::real_mult(),
          GroupId::gl(1),       GroupId::gl(2),       GroupId::gl(3),       GroupId::sl2(),
          GroupId::so2(),       GroupId::triangular_p()};
}

}  // namespace haarlib::testing
