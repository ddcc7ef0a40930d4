#include "haarlib/lattice.hpp"

#include <Eigen/LU>
#include <cmath>

namespace haarlib {

LatticeSpec LatticeSpec::from_generators(const std::vector<std::vector<double>>& generators) {
  const auto n = static_cast<Eigen::Index>(generators.size());
  if (n == 0 || n > static_cast<Eigen::Index>(kMaxChartDim)) throw ConfigError("lattice needs 1..16 generators");
  LatticeSpec ls;
  ls.basis_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& g = generators[static_cast<std::size_t>(j)];
    if (static_cast<Eigen::Index>(g.size()) != n) throw ConfigError("lattice generator has the wrong length");
    for (Eigen::Index i = 0; i < n; ++i) ls.basis_(i, j) = g[static_cast<std::size_t>(i)];
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(ls.basis_);
  if (!lu.isInvertible()) throw ConfigError("lattice generators are linearly dependent");
  ls.inverse_ = lu.inverse();
  ls.covolume_ = std::abs(lu.determinant());
  return ls;
}

Eigen::VectorXd LatticeSpec::to_cell(std::span<const double> x) const {
  return inverse_ * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Box LatticeSpec::cell_box(const Box& box) const {
  const std::size_t n = box.size();
  Box out(n, Interval{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  Point v(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1U ? box[i].hi : box[i].lo;
    const Eigen::VectorXd u = to_cell(v.span());
    for (std::size_t i = 0; i < n; ++i) {
      out[i].lo = std::min(out[i].lo, u(static_cast<Eigen::Index>(i)));
      out[i].hi = std::max(out[i].hi, u(static_cast<Eigen::Index>(i)));
    }
  }
  return out;
}

std::vector<Element> LatticeSpec::generator_elements() const {
  std::vector<Element> out;
  for (Eigen::Index j = 0; j < basis_.cols(); ++j) {
    std::vector<double> col(basis_.col(j).data(), basis_.col(j).data() + basis_.rows());
    out.push_back(Element::vector(col));
  }
  return out;
}

namespace {

// Visits every integer vector m with u + m inside the cell box.
template <typename Visit>
void for_each_translate(const LatticeSpec& lattice, const Box& cell, const Point& x, Visit&& visit) {
  const std::size_t n = x.size();
  const Eigen::VectorXd u = lattice.to_cell(x.span());
  std::vector<long> lo(n), hi(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u(static_cast<Eigen::Index>(i));
    lo[i] = static_cast<long>(std::ceil(cell[i].lo - ui));
    hi[i] = static_cast<long>(std::floor(cell[i].hi - ui));
    if (hi[i] < lo[i]) return;
    m[i] = lo[i];
  }
  while (true) {
    visit(m);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++m[i] <= hi[i]) break;
      m[i] = lo[i];
    }
    if (i == n) return;
  }
}

bool is_diagonal(const Eigen::MatrixXd& b) {
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      if (i != j && b(i, j) != 0.0) return false;
  return true;
}

double fractional(double t) { return t - std::floor(t); }

}  // namespace

std::function<double(const Point&)> periodize(const LatticeSpec& lattice, const CompactFunction& f) {
  const Box cell = lattice.cell_box(f.support);
  return [lattice, cell, eval = f.eval](const Point& x) {
    const std::size_t n = x.size();
    std::vector<double> terms;
    for_each_translate(lattice, cell, x, [&](const std::vector<long>& m) {
      Point y = x;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          y[i] += lattice.basis()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * static_cast<double>(m[j]);
      terms.push_back(eval(y));
    });
    return pairwise_sum(terms);
  };
}

std::size_t periodization_terms(const LatticeSpec& lattice, const CompactFunction& f, const Point& x) {
  std::size_t count = 0;
  for_each_translate(lattice, lattice.cell_box(f.support), x, [&](const std::vector<long>&) { ++count; });
  return count;
}

IntegralResult quotient_integrate_lattice(const LatticeSpec& lattice, const std::function<double(const Point&)>& f,
                                          const QuadratureSpec& q, const AxisCuts& cell_cuts) {
  const auto n = static_cast<std::size_t>(lattice.dim());
  const Eigen::MatrixXd& b = lattice.basis();
  Integrand on_cell = [&](const Point& u) {
    Point x(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x[i] += b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * u[j];
    return f(x);
  };
  IntegralResult r = integrate_box(on_cell, Box(n, Interval{0.0, 1.0}), q, cell_cuts);
  r.value *= lattice.covolume();
  r.error_estimate *= lattice.covolume();
  return r;
}

AxisCuts periodization_cuts(const LatticeSpec& lattice, const CompactFunction& f) {
  const Box cell = lattice.cell_box(f.support);
  const bool diagonal = is_diagonal(lattice.basis());
  AxisCuts cuts(cell.size());
  for (std::size_t i = 0; i < cell.size(); ++i) {
    cuts[i] = {fractional(cell[i].lo), fractional(cell[i].hi)};
    if (diagonal && i < f.cuts.size()) {
      const double scale = lattice.basis()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
      for (double c : f.cuts[i]) cuts[i].push_back(fractional(c / scale));
    }
  }
  return cuts;
}

CheckReport check_periodization(const LatticeSpec& lattice, const TestFunction& f, double tol,
                                const QuadratureSpec& q) {
  if (f.chart()->group().kind != GroupKind::RealAdd || f.chart()->group().n != lattice.dim()) {
    throw DomainError("periodization needs a test function on R^" + std::to_string(lattice.dim()));
  }
  const CompactFunction cf = as_compact(f);
  CheckReport r;
  r.name = "lattice-periodization";
  r.group = f.chart()->group().name();
  r.anchor = "lattice-fundamental-domain-integral";
  r.tolerance = tol;
  r.seed = q.seed;
  r.samples = 1;
  const double whole = integrate(cf, Side::Left, q).value;
  const double cell = quotient_integrate_lattice(lattice, periodize(lattice, cf), q, periodization_cuts(lattice, cf)).value;
  r.estimate = cell;
  r.reference = whole;
  r.max_rel_deviation = relative_deviation(cell, whole);
  r.decide();
  return r;
}

CheckReport check_lattice_unimodular(const TestFunction& f, std::span<const Element> generators, double tol,
                                     const QuadratureSpec& q) {
  CheckReport r;
  r.name = "lattice-unimodular";
  r.group = f.chart()->group().name();
  r.anchor = "lattice-forces-unimodular";
  r.tolerance = tol;
  r.seed = q.seed;
  r.samples = static_cast<long>(generators.size());
  r.reference = 1.0;
  r.estimate = 1.0;
  for (const auto& gamma : generators) {
    const double estimated = estimate_modular(f, gamma, q);
    const double closed = modular_closed_form(gamma);
    const double dev = std::max(std::abs(estimated - 1.0), std::abs(closed - 1.0));
    if (dev >= r.max_rel_deviation) {
      r.max_rel_deviation = dev;
      r.estimate = estimated;
    }
  }
  r.decide();
  return r;
}

}  // namespace haarlib
