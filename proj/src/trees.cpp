#include "haarlib/trees.hpp"

#include <algorithm>
#include <set>

namespace haarlib {

std::string to_exact_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

char label_char(int label) {
  if (label < 0 || label >= kMaxTreeDegree) throw DomainError("port label out of range");
  return static_cast<char>(label < 10 ? '0' + label : 'a' + (label - 10));
}

int label_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  throw DomainError(std::string("bad port label '") + c + "'");
}

Word make_word(std::initializer_list<int> labels) {
  Word w;
  for (int l : labels) w.push_back(label_char(l));
  return w;
}

namespace {

void check_degree(int d) {
  if (d < 3 || d > kMaxTreeDegree) throw DomainError("tree degree must lie in [3, 36]");
}

std::size_t common_prefix(const Word& u, const Word& v) {
  std::size_t k = 0;
  while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
  return k;
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt power(const BigInt& base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Ray from w towards omega, up to 0^depth.
std::vector<Word> ray_to_omega(const Word& w, std::size_t depth) {
  std::size_t zeros = 0;
  while (zeros < w.size() && w[zeros] == '0') ++zeros;
  std::vector<Word> ray;
  for (std::size_t len = w.size(); len > zeros; --len) ray.push_back(w.substr(0, len));
  for (std::size_t k = zeros; k <= std::max(depth, zeros); ++k) ray.push_back(Word(k, '0'));
  return ray;
}

}  // namespace

bool is_vertex(int d, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int l = label_value(w[i]);
    if (l < 0 || l >= (i == 0 ? d : d - 1)) return false;
  }
  return true;
}

std::vector<Word> tree_neighbors(int d, const Word& w) {
  std::vector<Word> out;
  if (!w.empty()) out.push_back(w.substr(0, w.size() - 1));
  const int children = w.empty() ? d : d - 1;
  for (int l = 0; l < children; ++l) out.push_back(w + label_char(l));
  return out;
}

int tree_distance(const Word& u, const Word& v) {
  const std::size_t k = common_prefix(u, v);
  return static_cast<int>(u.size() + v.size() - 2 * k);
}

std::vector<Word> tree_path(const Word& u, const Word& v) {
  const std::size_t k = common_prefix(u, v);
  std::vector<Word> path;
  for (std::size_t len = u.size(); len > k; --len) path.push_back(u.substr(0, len));
  for (std::size_t len = k; len <= v.size(); ++len) path.push_back(v.substr(0, len));
  return path;
}

int busemann(const Word& w) {
  std::size_t zeros = 0;
  while (zeros < w.size() && w[zeros] == '0') ++zeros;
  return static_cast<int>(w.size()) - 2 * static_cast<int>(zeros);
}

Word axis_vertex(int k) {
  if (k >= 0) return Word(static_cast<std::size_t>(k), '0');
  return "1" + Word(static_cast<std::size_t>(-k - 1), '0');
}

TreeBall::TreeBall(int d, int radius) : d_(d), radius_(radius) {
  check_degree(d);
  if (radius < 0) throw DomainError("ball radius must be >= 0");
  vertices_.push_back(Word{});
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Word w = vertices_[i];
    if (static_cast<int>(w.size()) == radius) continue;
    const int children = w.empty() ? d : d - 1;
    for (int l = 0; l < children; ++l) vertices_.push_back(w + label_char(l));
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);
}

std::size_t TreeBall::index_of(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) throw DomainError("vertex '" + w + "' outside the ball");
  return it->second;
}

std::vector<std::pair<Word, Word>> TreeBall::edges(int r) const {
  std::vector<std::pair<Word, Word>> out;
  for (const auto& w : vertices_) {
    if (!w.empty() && static_cast<int>(w.size()) <= r) out.emplace_back(w.substr(0, w.size() - 1), w);
  }
  return out;
}

BigInt TreeBall::expected_size(int d, int radius) {
  return 1 + d * (power(BigInt(d - 1), radius) - 1) / (d - 2);
}

BigInt ball_aut_order(int d, int radius) {
  check_degree(d);
  if (radius < 0) throw DomainError("ball radius must be >= 0");
  if (radius == 0) return 1;
  BigInt a = 1;
  const BigInt branch = factorial(d - 1);
  for (int r = 1; r < radius; ++r) a = branch * power(a, d - 1);
  return factorial(d) * power(a, d);
}

BigInt stabilizer_index(const TreeBall& ball, std::span<const Word> fixed, const Word& moved, bool horospherical) {
  if (fixed.empty()) throw DomainError("stabilizer_index needs at least one fixed vertex");
  ball.index_of(moved);
  std::size_t depth = moved.size();
  for (const auto& f : fixed) {
    ball.index_of(f);
    depth = std::max(depth, f.size());
  }

  std::vector<Word> points(fixed.begin(), fixed.end());
  if (horospherical) {
    // The ray continues past everything the orbit computation looks at.
    for (const auto& f : fixed) {
      const auto ray = ray_to_omega(f, depth + 2);
      points.insert(points.end(), ray.begin(), ray.end());
    }
  }
  std::set<Word> hull;
  for (const auto& p : points) {
    for (const auto& v : tree_path(points.front(), p)) hull.insert(v);
  }
  if (hull.count(moved)) return 1;

  const auto path = tree_path(moved, points.front());
  std::size_t m = 0;
  while (!hull.count(path[m])) ++m;
  const Word& anchor = path[m];
  int degree = 0;
  for (const auto& n : tree_neighbors(ball.d(), anchor)) degree += hull.count(n) ? 1 : 0;
  return BigInt(ball.d() - degree) * power(BigInt(ball.d() - 1), static_cast<int>(m) - 1);
}

BigInt stabilizer_index(const TreeBall& ball, std::initializer_list<Word> fixed, const Word& moved,
                        bool horospherical) {
  return stabilizer_index(ball, std::span<const Word>(fixed.begin(), fixed.size()), moved, horospherical);
}

Rational horospherical_modular(int d, int radius, int power_of_t) {
  if (power_of_t < 1 || power_of_t > radius) throw DomainError("translation length must lie in [1, R]");
  const TreeBall ball(d, radius);
  const Word x = axis_vertex(0);
  const Word tx = axis_vertex(power_of_t);
  const BigInt forward = stabilizer_index(ball, {x}, tx, true);
  const BigInt backward = stabilizer_index(ball, {tx}, x, true);
  return Rational(forward, backward);
}

Rational edge_stabilizer_measure(const TreeBall& ball, const Word& u, const Word& v) {
  if (tree_distance(u, v) != 1) throw DomainError("'" + u + "' and '" + v + "' are not adjacent");
  const Word x0;
  // mu(A) / mu(B) = [A : A n B] / [B : A n B] for compact open A, B.
  const BigInt up = stabilizer_index(ball, {u, v}, x0);
  const BigInt down = stabilizer_index(ball, {x0}, u) * stabilizer_index(ball, {x0, u}, v);
  return Rational(up, down);
}

EdgeMeasures edge_stabilizer_measures_equal(int d, int radius,
                                           std::optional<std::vector<std::pair<Word, Word>>> edges) {
  const TreeBall ball(d, radius);
  EdgeMeasures out;
  out.edges = edges ? *edges : ball.edges(radius - 1);
  for (const auto& [u, v] : out.edges) out.measures.push_back(edge_stabilizer_measure(ball, u, v));

  CheckReport& r = out.report;
  r.name = "edge-stabilizer-measures";
  r.group = "Aut(T_" + std::to_string(d) + ")";
  r.anchor = "locally-transitive-tree-unimodular";
  r.samples = static_cast<long>(out.edges.size());
  r.tolerance = 0.0;
  bool equal = true;
  for (const auto& m : out.measures) equal = equal && m == out.measures.front();
  r.max_rel_deviation = equal ? 0.0 : 1.0;
  if (!out.measures.empty()) {
    const Rational lo = *std::min_element(out.measures.begin(), out.measures.end());
    const Rational hi = *std::max_element(out.measures.begin(), out.measures.end());
    r.estimate = static_cast<double>(hi);
    r.reference = static_cast<double>(lo);
    r.exact_estimate = to_exact_string(hi);
    r.exact_reference = to_exact_string(lo);
  }
  r.decide();
  return out;
}

namespace {

void check_coset(const TreeBall& ball, const CosetRef& c) {
  ball.index_of(c.image);
  if (!c.neighbours) return;
  const auto& nb = *c.neighbours;
  if (static_cast<int>(nb.size()) != ball.d()) throw DomainError("coset needs the images of all d neighbours of x0");
  auto expected = tree_neighbors(ball.d(), c.image);
  auto given = nb;
  std::sort(expected.begin(), expected.end());
  std::sort(given.begin(), given.end());
  if (expected != given) throw DomainError("neighbour images of '" + c.image + "' are not its neighbours");
  for (const auto& w : nb) ball.index_of(w);
}

}  // namespace

Rational van_dantzig_measure(const TreeBall& ball, std::span<const CosetRef> cosets) {
  const Rational fine(BigInt(1), factorial(ball.d()));
  Rational total = 0;
  for (std::size_t i = 0; i < cosets.size(); ++i) {
    check_coset(ball, cosets[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (cosets[j] == cosets[i]) throw DomainError("duplicate coset '" + cosets[i].image + "'");
      // A K1 coset lies inside the K coset with the same image of x0.
      const bool nested = cosets[j].image == cosets[i].image &&
                          (!cosets[j].neighbours || !cosets[i].neighbours);
      if (nested) throw DomainError("overlapping cosets at '" + cosets[i].image + "'");
    }
    total += cosets[i].neighbours ? fine : Rational(1);
  }
  return total;
}

Word relabel(const Word& w, std::span<const int> root, std::span<const int> child) {
  Word out = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& perm = i == 0 ? root : child;
    const int l = label_value(w[i]);
    if (l >= static_cast<int>(perm.size())) throw DomainError("relabelling permutation too short");
    out[i] = label_char(perm[static_cast<std::size_t>(l)]);
  }
  return out;
}

CosetRef relabel(const CosetRef& c, std::span<const int> root, std::span<const int> child) {
  CosetRef out{relabel(c.image, root, child), std::nullopt};
  if (c.neighbours) {
    std::vector<Word> nb;
    for (const auto& w : *c.neighbours) nb.push_back(relabel(w, root, child));
    out.neighbours = std::move(nb);
  }
  return out;
}

}  // namespace haarlib
