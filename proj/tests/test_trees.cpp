#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "generators.hpp"
#include "haarlib/trees.hpp"

using namespace haarlib;
using haarlib::testing::Gen;

namespace {

/// |Aut(B_R)| fixing x0 by trying every permutation of the other vertices.
long permutation_count(int d, int radius) {
  const TreeBall ball(d, radius);
  const auto& v = ball.vertices();
  const std::size_t n = v.size();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::pair<std::size_t, std::size_t>> edge_set;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = ball.index_of(v[i].substr(0, v[i].size() - 1));
    edges.emplace_back(p, i);
    edge_set.insert({std::min(p, i), std::max(p, i)});
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long count = 0;
  do {
    bool ok = true;
    for (const auto& [a, b] : edges) {
      if (!edge_set.count({std::min(perm[a], perm[b]), std::max(perm[a], perm[b])})) {
        ok = false;
        break;
      }
    }
    count += ok;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return count;
}

std::vector<int> random_perm(Gen& gen, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(gen.integer(0, i))]);
  return p;
}

Word random_vertex(Gen& gen, const TreeBall& ball) {
  return ball.vertices()[static_cast<std::size_t>(gen.integer(0, static_cast<int>(ball.size()) - 1))];
}

Rational frac(long p, long q) { return Rational(BigInt(p), BigInt(q)); }

}  // namespace

TEST_SUITE("trees") {
  TEST_CASE("ball structure") {
    for (int d = 3; d <= 6; ++d) {
      for (int r = 1; r <= 3; ++r) {
        const TreeBall ball(d, r);
        CHECK(BigInt(ball.size()) == TreeBall::expected_size(d, r));
        BigInt closed = 1 + BigInt(d) * (boost::multiprecision::pow(BigInt(d - 1), static_cast<unsigned>(r)) - 1) / (d - 2);
        CHECK(BigInt(ball.size()) == closed);
        CHECK(ball.vertices().front().empty());
        std::set<Word> seen;
        for (const auto& w : ball.vertices()) {
          CHECK(seen.insert(w).second);
          CHECK(is_vertex(d, w));
          if (w.empty()) continue;
          CHECK(ball.contains(w.substr(0, w.size() - 1)));
          CHECK(static_cast<int>(tree_neighbors(d, w).size()) == d);
        }
      }
    }
    CHECK_THROWS(TreeBall(2, 1));
  }

  TEST_CASE("busemann levels") {
    CHECK(busemann("") == 0);
    CHECK(busemann("00") == -2);
    CHECK(busemann("1") == 1);
    const TreeBall ball(4, 3);
    for (const auto& w : ball.vertices()) {
      for (const auto& u : tree_neighbors(4, w)) CHECK(std::abs(busemann(u) - busemann(w)) == 1);
    }
    for (int k = -3; k <= 3; ++k) CHECK(busemann(axis_vertex(k)) == -k);
  }

  TEST_CASE("ball automorphism order") {
    CHECK(ball_aut_order(3, 1) == 6);
    CHECK(ball_aut_order(3, 2) == 48);
    CHECK(ball_aut_order(3, 0) == 1);
    CHECK(ball_aut_order(4, 2) == 24 * 1296);
    CHECK(permutation_count(3, 1) == 6);
    CHECK(permutation_count(3, 2) == 48);
    CHECK(permutation_count(4, 1) == 24);
    for (auto [d, r] : {std::pair{3, 1}, {3, 2}, {4, 1}, {3, 3}, {4, 2}, {5, 1}}) {
      CAPTURE(d);
      CAPTURE(r);
      const auto brute = brute_force_ball_aut_order(d, r);
      REQUIRE(brute.has_value());
      CHECK(*brute == ball_aut_order(d, r));
    }
    // Large orders stay exact.
    CHECK(ball_aut_order(8, 4) % ball_aut_order(8, 3) == 0);
  }

  TEST_CASE("stabilizer index examples") {
    const TreeBall ball(3, 2);
    CHECK(stabilizer_index(ball, {""}, "1") == 3);
    CHECK(stabilizer_index(ball, {""}, "0", true) == 1);
    for (int d = 3; d <= 6; ++d) {
      const TreeBall b(d, 2);
      CHECK(stabilizer_index(b, {"0"}, "", true) == d - 1);
      CHECK(stabilizer_index(b, {""}, "1") == d);
      CHECK(stabilizer_index(b, {""}, "11") == d * (d - 1));
    }
    CHECK_THROWS_AS(stabilizer_index(ball, {""}, "111"), DomainError);
  }

  TEST_CASE("stabilizer index equals brute-force orbits") {
    Gen gen(83);
    for (int d : {3, 4}) {
      const TreeBall ball(d, 2);
      for (int i = 0; i < 60; ++i) {
        const int nf = gen.integer(1, 3);
        std::vector<Word> fixed;
        for (int k = 0; k < nf; ++k) fixed.push_back(random_vertex(gen, ball));
        const Word moved = random_vertex(gen, ball);
        const bool horo = gen.coin();
        CAPTURE(d);
        CAPTURE(moved);
        CAPTURE(horo);
        int reach = 0;
        for (const auto& w : fixed) reach = std::max(reach, tree_distance(fixed.front(), w));
        reach = std::max(reach, tree_distance(fixed.front(), moved));
        const BigInt brute = brute_force_orbit(d, fixed, moved, horo, reach + 2);
        CHECK(stabilizer_index(ball, fixed, moved, horo) == brute);
      }
    }
  }

  TEST_CASE("horospherical modular function") {
    for (int d = 3; d <= 8; ++d) {
      const Rational delta = horospherical_modular(d);
      CHECK(delta == frac(1, d - 1));
      CHECK(delta * (d - 1) == 1);
      for (int r : {2, 3, 4}) {
        if (TreeBall::expected_size(d, r) > 200000) continue;
        CHECK(horospherical_modular(d, r) == delta);
      }
      CHECK(horospherical_modular(d, 2, 2) == delta * delta);
    }
    CHECK(to_exact_string(horospherical_modular(3)) == "1/2");
    CHECK(to_exact_string(horospherical_modular(4)) == "1/3");
    CHECK(to_exact_string(horospherical_modular(6)) == "1/5");
  }

  TEST_CASE("edge stabilizer measures") {
    const EdgeMeasures e3 = edge_stabilizer_measures_equal(3, 2);
    CHECK(e3.report.passed);
    CHECK(e3.edges.size() == 3);
    for (const auto& m : e3.measures) CHECK(m == frac(1, 3));
    const EdgeMeasures e4 = edge_stabilizer_measures_equal(4, 2);
    CHECK(e4.report.passed);
    for (const auto& m : e4.measures) CHECK(m == frac(1, 4));
    const EdgeMeasures e33 = edge_stabilizer_measures_equal(3, 3);
    CHECK(e33.report.passed);
    CHECK(e33.edges.size() == 9);

    const EdgeMeasures single =
        edge_stabilizer_measures_equal(3, 2, std::vector<std::pair<Word, Word>>{{"", "2"}});
    CHECK(single.report.passed);
    CHECK(single.measures.size() == 1);

    // mu(G_e) is 1 / [G_x0 : G_x0,e], the orbit of the far end under G_x0.
    const TreeBall ball(3, 3);
    CHECK(edge_stabilizer_measure(ball, "1", "10") == frac(1, 3));
  }

  TEST_CASE("van dantzig coset measures") {
    const TreeBall ball(3, 2);
    CHECK(van_dantzig_measure(ball, {}) == 0);
    const std::vector<CosetRef> k{{"", std::nullopt}};
    CHECK(van_dantzig_measure(ball, k) == 1);
    const std::vector<CosetRef> two{{"0", std::nullopt}, {"1", std::nullopt}};
    CHECK(van_dantzig_measure(ball, two) == 2);
    const std::vector<CosetRef> fine{{"", std::vector<Word>{"0", "1", "2"}}, {"", std::vector<Word>{"1", "0", "2"}}};
    CHECK(van_dantzig_measure(ball, fine) == frac(2, 6));

    const std::vector<CosetRef> dup{{"1", std::nullopt}, {"1", std::nullopt}};
    CHECK_THROWS_AS(van_dantzig_measure(ball, dup), DomainError);
    const std::vector<CosetRef> nested{{"", std::nullopt}, {"", std::vector<Word>{"0", "1", "2"}}};
    CHECK_THROWS_AS(van_dantzig_measure(ball, nested), DomainError);
    const std::vector<CosetRef> outside{{"111", std::nullopt}};
    CHECK_THROWS_AS(van_dantzig_measure(ball, outside), DomainError);
  }

  TEST_CASE("van dantzig measure is invariant under relabelling") {
    Gen gen(89);
    const int d = 4;
    const TreeBall ball(d, 3);
    for (int i = 0; i < 50; ++i) {
      std::vector<CosetRef> cosets;
      std::set<Word> used;
      for (int k = 0; k < 4; ++k) {
        const Word w = random_vertex(gen, ball);
        if (!used.insert(w).second || w.size() > 1) continue;
        cosets.push_back({w, std::nullopt});
      }
      // K1 cosets inside a K coset not used above; their images of the
      // neighbours of x0 are distinct neighbours of that vertex.
      Word base;
      for (const auto& w : ball.vertices()) {
        if (w.size() == 2 && !used.count(w)) {
          base = w;
          break;
        }
      }
      const auto nb = tree_neighbors(d, base);
      for (int k = 0; k < 2; ++k) {
        std::vector<Word> images(nb.begin(), nb.end());
        const auto p = random_perm(gen, d);
        std::vector<Word> shuffled;
        for (int j : p) shuffled.push_back(images[static_cast<std::size_t>(j)]);
        const CosetRef c{base, shuffled};
        if (std::find(cosets.begin(), cosets.end(), c) == cosets.end()) cosets.push_back(c);
      }
      const Rational before = van_dantzig_measure(ball, cosets);
      const auto root = random_perm(gen, d);
      const auto child = random_perm(gen, d - 1);
      std::vector<CosetRef> moved;
      for (const auto& c : cosets) moved.push_back(relabel(c, root, child));
      CHECK(van_dantzig_measure(ball, moved) == before);
    }
  }
}
