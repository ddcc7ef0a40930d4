#pragma once

// Exact combinatorics of Aut(T_d) at finite depth: ball automorphism counts,
// stabilizer indices as Haar measure ratios, the modular function of the
// horospherical stabilizer and van Dantzig coset measures.
//
// Vertices of T_d are words over port labels read from the base vertex x0:
// x0 has children 0..d-1, every other vertex has children 0..d-2. The end
// omega is the ray x0, 0, 00, 000, ...

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "haarlib/invariance.hpp"

namespace haarlib {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" with q > 0.
std::string to_exact_string(const Rational& r);

/// Vertex word; one character per port label ('0'..'9', 'a'..'z').
using Word = std::string;

inline constexpr int kMaxTreeDegree = 36;

char label_char(int label);
int label_value(char c);
Word make_word(std::initializer_list<int> labels);

bool is_vertex(int d, const Word& w);
std::vector<Word> tree_neighbors(int d, const Word& w);
int tree_distance(const Word& u, const Word& v);
/// Vertices from u to v inclusive.
std::vector<Word> tree_path(const Word& u, const Word& v);
/// Signed level relative to omega: -k on the k-th ray vertex, +1 per step
/// away from omega.
int busemann(const Word& w);
/// Axis vertex A_k: 0^k for k >= 0, "1" followed by 0^(-k-1) for k < 0.
Word axis_vertex(int k);

/// Ball of radius R around x0 in T_d.
class TreeBall {
 public:
  TreeBall(int d, int radius);

  int d() const noexcept { return d_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  /// Breadth-first order, x0 first.
  const std::vector<Word>& vertices() const noexcept { return vertices_; }
  bool contains(const Word& w) const { return index_.count(w) != 0; }
  std::size_t index_of(const Word& w) const;
  /// Edges {parent, child} with both ends inside B_r.
  std::vector<std::pair<Word, Word>> edges(int r) const;

  /// 1 + d ((d-1)^R - 1)/(d - 2).
  static BigInt expected_size(int d, int radius);

 private:
  int d_;
  int radius_;
  std::vector<Word> vertices_;
  std::unordered_map<Word, std::size_t> index_;
};

/// |Aut(B_R(x0))| from a(0) = 1, a(r) = (d-1)! a(r-1)^(d-1), |Aut| = d! a(R-1)^d.
BigInt ball_aut_order(int d, int radius);

/// Size of the orbit of `moved` under the pointwise stabilizer of `fixed` in
/// Aut(T_d). With `horospherical` the rays from the fixed vertices towards
/// omega are fixed as well. All vertices must lie in the ball.
BigInt stabilizer_index(const TreeBall& ball, std::span<const Word> fixed, const Word& moved,
                        bool horospherical = false);
BigInt stabilizer_index(const TreeBall& ball, std::initializer_list<Word> fixed, const Word& moved,
                        bool horospherical = false);

/// Delta(t^m) = [G_x : G_{x, t^m x}] / [G_{t^m x} : G_{x, t^m x}] for the
/// horospherical stabilizer, x = x0 and t the unit translation towards omega.
Rational horospherical_modular(int d, int radius = 2, int power = 1);

/// mu(G_e) for the edge {u, v} with mu(G_x0) = 1.
Rational edge_stabilizer_measure(const TreeBall& ball, const Word& u, const Word& v);

struct EdgeMeasures {
  CheckReport report;
  std::vector<std::pair<Word, Word>> edges;
  std::vector<Rational> measures;
};
/// Edge-stabilizer measures of all edges of B_(R-1), or of `edges` when given.
EdgeMeasures edge_stabilizer_measures_equal(int d, int radius,
                                           std::optional<std::vector<std::pair<Word, Word>>> edges = std::nullopt);

/// Left coset g K of K = G_x0, named by g(x0). When `neighbours` is set it
/// names the coset g K1 of K1 = G_x0 intersected with the stabilizers of the
/// neighbours of x0, by the images g(0), g(1), ..., g(d-1).
struct CosetRef {
  Word image;
  std::optional<std::vector<Word>> neighbours;

  friend bool operator==(const CosetRef&, const CosetRef&) = default;
};

/// Sum of nu-masses with nu(K) = 1, so nu(K1) = 1/d!. Throws DomainError on
/// duplicate or overlapping cosets or vertices outside the ball.
Rational van_dantzig_measure(const TreeBall& ball, std::span<const CosetRef> cosets);

/// Automorphism of T_d fixing x0: the first label goes through `root`
/// (a permutation of 0..d-1), later labels through `child` (of 0..d-2).
Word relabel(const Word& w, std::span<const int> root, std::span<const int> child);
CosetRef relabel(const CosetRef& c, std::span<const int> root, std::span<const int> child);

// --- Brute-force oracle ------------------------------------------------------

/// Ball of radius `radius` around `center` as an explicit graph.
struct BallGraph {
  int d = 0;
  Word center;
  std::vector<Word> words;  // breadth-first from center
  std::vector<int> parent;  // -1 for the center
  std::vector<int> depth;
  std::vector<std::vector<int>> adj;
  std::unordered_map<Word, int> index;
};
BallGraph ball_graph(int d, const Word& center, int radius);

/// Counts automorphisms of the ball fixing `pinned` pointwise by
/// backtracking. Stops and returns nullopt past `limit`.
std::optional<BigInt> count_ball_automorphisms(const BallGraph& g, std::span<const int> pinned,
                                               std::uint64_t limit = 1'000'000);
/// Whether some automorphism fixing `pinned` sends `from` to `to`.
bool ball_automorphism_exists(const BallGraph& g, std::span<const int> pinned, int from, int to);

/// Orbit size by exhaustive search in a ball around the first fixed vertex.
BigInt brute_force_orbit(int d, std::span<const Word> fixed, const Word& moved, bool horospherical, int radius);
/// |Aut(B_R(x0))| by enumeration.
std::optional<BigInt> brute_force_ball_aut_order(int d, int radius, std::uint64_t limit = 1'000'000);

}  // namespace haarlib
