#include <algorithm>

#include "haarlib/trees.hpp"

namespace haarlib {

BallGraph ball_graph(int d, const Word& center, int radius) {
  if (!is_vertex(d, center)) throw DomainError("'" + center + "' is not a vertex of T_d");
  BallGraph g;
  g.d = d;
  g.center = center;
  g.words.push_back(center);
  g.parent.push_back(-1);
  g.depth.push_back(0);
  g.index.emplace(center, 0);
  for (std::size_t i = 0; i < g.words.size(); ++i) {
    if (g.depth[i] == radius) continue;
    for (const auto& n : tree_neighbors(d, g.words[i])) {
      if (g.index.count(n)) continue;
      g.index.emplace(n, static_cast<int>(g.words.size()));
      g.words.push_back(n);
      g.parent.push_back(static_cast<int>(i));
      g.depth.push_back(g.depth[i] + 1);
    }
  }
  g.adj.resize(g.words.size());
  for (std::size_t i = 1; i < g.words.size(); ++i) {
    g.adj[i].push_back(g.parent[i]);
    g.adj[static_cast<std::size_t>(g.parent[i])].push_back(static_cast<int>(i));
  }
  return g;
}

namespace {

// Backtracking: each vertex goes to an unused neighbour of its parent's image
// with the same degree. Constraints z -> t prune by ancestry: v is an ancestor
// of z iff its image is the ancestor of t at the same depth. Ancestors of
// constrained vertices are placed first, so a conflict is found before any
// free vertex is enumerated; free vertices always extend a consistent
// partial map.
class Search {
 public:
  Search(const BallGraph& g, std::vector<std::pair<int, int>> constraints, std::uint64_t limit, bool first_only)
      : g_(g), constraints_(std::move(constraints)), limit_(limit), first_only_(first_only) {
    const std::size_t n = g.words.size();
    image_.assign(n, -1);
    used_.assign(n, false);
    // ancestors_[v][k] = ancestor of v at depth k
    ancestors_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      ancestors_[v].assign(static_cast<std::size_t>(g.depth[v]) + 1, 0);
      int u = static_cast<int>(v);
      while (u >= 0) {
        ancestors_[v][static_cast<std::size_t>(g.depth[static_cast<std::size_t>(u)])] = u;
        u = g.parent[static_cast<std::size_t>(u)];
      }
    }
    std::vector<bool> pinned(n, false);
    pinned[0] = true;
    for (const auto& [z, t] : constraints_) {
      for (int a : ancestors_[static_cast<std::size_t>(z)]) pinned[static_cast<std::size_t>(a)] = true;
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t v = 0; v < n; ++v) {
        if (pinned[v] == (pass == 0)) order_.push_back(static_cast<int>(v));
      }
    }
  }

  /// Returns false when the limit was exceeded.
  bool run() {
    overflow_ = false;
    assign(0);
    return !overflow_;
  }
  std::uint64_t count() const { return count_; }

 private:
  bool is_ancestor(int a, int z) const {
    const auto da = static_cast<std::size_t>(g_.depth[static_cast<std::size_t>(a)]);
    const auto& anc = ancestors_[static_cast<std::size_t>(z)];
    return da < anc.size() && anc[da] == a;
  }

  bool feasible(int v, int u) const {
    if (g_.adj[static_cast<std::size_t>(v)].size() != g_.adj[static_cast<std::size_t>(u)].size()) return false;
    for (const auto& [z, t] : constraints_) {
      if (is_ancestor(v, z) != is_ancestor(u, t)) return false;
    }
    return true;
  }

  bool done() const { return overflow_ || (first_only_ && count_ > 0); }

  void assign(std::size_t pos) {
    if (done()) return;
    if (pos == g_.words.size()) {
      if (++count_ > limit_) overflow_ = true;
      return;
    }
    const int v = order_[pos];
    if (pos == 0) {
      if (!feasible(0, 0)) return;
      image_[0] = 0;
      used_[0] = true;
      assign(1);
      used_[0] = false;
      return;
    }
    const int p_image = image_[static_cast<std::size_t>(g_.parent[static_cast<std::size_t>(v)])];
    for (int u : g_.adj[static_cast<std::size_t>(p_image)]) {
      if (used_[static_cast<std::size_t>(u)] || !feasible(v, u)) continue;
      image_[static_cast<std::size_t>(v)] = u;
      used_[static_cast<std::size_t>(u)] = true;
      assign(pos + 1);
      used_[static_cast<std::size_t>(u)] = false;
      if (done()) return;
    }
  }

  const BallGraph& g_;
  std::vector<std::pair<int, int>> constraints_;
  std::uint64_t limit_;
  bool first_only_;
  std::vector<int> order_;
  std::vector<int> image_;
  std::vector<bool> used_;
  std::vector<std::vector<int>> ancestors_;
  std::uint64_t count_ = 0;
  bool overflow_ = false;
};

std::vector<std::pair<int, int>> pins_to_constraints(std::span<const int> pinned) {
  std::vector<std::pair<int, int>> c;
  for (int p : pinned) c.emplace_back(p, p);
  return c;
}

}  // namespace

std::optional<BigInt> count_ball_automorphisms(const BallGraph& g, std::span<const int> pinned, std::uint64_t limit) {
  Search s(g, pins_to_constraints(pinned), limit, false);
  if (!s.run()) return std::nullopt;
  return BigInt(s.count());
}

bool ball_automorphism_exists(const BallGraph& g, std::span<const int> pinned, int from, int to) {
  auto c = pins_to_constraints(pinned);
  c.emplace_back(from, to);
  Search s(g, std::move(c), 1, true);
  s.run();
  return s.count() > 0;
}

BigInt brute_force_orbit(int d, std::span<const Word> fixed, const Word& moved, bool horospherical, int radius) {
  if (fixed.empty()) throw DomainError("brute_force_orbit needs a fixed vertex");
  const BallGraph g = ball_graph(d, fixed.front(), radius);
  auto idx = [&](const Word& w) {
    auto it = g.index.find(w);
    if (it == g.index.end()) throw DomainError("vertex '" + w + "' outside the search ball");
    return it->second;
  };
  std::vector<int> pinned;
  for (const auto& f : fixed) {
    pinned.push_back(idx(f));
    if (!horospherical) continue;
    // Ray from f towards omega, as far as the ball reaches.
    std::size_t zeros = 0;
    while (zeros < f.size() && f[zeros] == '0') ++zeros;
    Word w = f;
    bool descending = false;
    while (true) {
      descending = descending || w.size() <= zeros;
      w = descending ? w + '0' : w.substr(0, w.size() - 1);
      auto it = g.index.find(w);
      if (it == g.index.end()) break;
      pinned.push_back(it->second);
    }
  }
  const int from = idx(moved);
  BigInt orbit = 0;
  for (std::size_t to = 0; to < g.words.size(); ++to) {
    if (g.depth[to] != g.depth[static_cast<std::size_t>(from)]) continue;
    if (ball_automorphism_exists(g, pinned, from, static_cast<int>(to))) orbit += 1;
  }
  return orbit;
}

std::optional<BigInt> brute_force_ball_aut_order(int d, int radius, std::uint64_t limit) {
  const BallGraph g = ball_graph(d, Word{}, radius);
  return count_ball_automorphisms(g, {}, limit);
}

}  // namespace haarlib
