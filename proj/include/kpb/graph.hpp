#pragma once

// Finite simple graphs on up to 32 vertices.  Vertex sets are bitmasks, so
// membership, independence and enumeration stay exact and fast at the scale
// this library targets.  All values are immutable after construction.

#include <kpb/counting.hpp>
#include <kpb/rational.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace kpb {

inline constexpr int kMaxVertices = 32;

class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(std::uint32_t mask) : mask_(mask) {}

  static constexpr VertexSet single(int v) { return VertexSet(std::uint32_t{1} << v); }
  static constexpr VertexSet full(int n) {
    return VertexSet(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int v) const { return (mask_ >> v) & 1u; }
  constexpr bool subset_of(VertexSet other) const { return (mask_ & ~other.mask_) == 0; }

  constexpr VertexSet with(int v) const { return VertexSet(mask_ | (std::uint32_t{1} << v)); }
  constexpr VertexSet without(int v) const { return VertexSet(mask_ & ~(std::uint32_t{1} << v)); }
  constexpr VertexSet unite(VertexSet o) const { return VertexSet(mask_ | o.mask_); }
  constexpr VertexSet intersect(VertexSet o) const { return VertexSet(mask_ & o.mask_); }
  constexpr VertexSet minus(VertexSet o) const { return VertexSet(mask_ & ~o.mask_); }

  // Least element, -1 when empty.
  constexpr int first() const { return mask_ == 0 ? -1 : std::countr_zero(mask_); }

  std::vector<int> elements() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend constexpr bool operator==(VertexSet a, VertexSet b) { return a.mask_ == b.mask_; }
  friend constexpr bool operator!=(VertexSet a, VertexSet b) { return a.mask_ != b.mask_; }

  std::string str() const {
    std::string s = "{";
    bool first_el = true;
    for (int v : elements()) {
      if (!first_el) s += ",";
      s += std::to_string(v);
      first_el = false;
    }
    return s + "}";
  }

 private:
  std::uint32_t mask_ = 0;
};

// Canonical order for set families: cardinality first, then bitmask value
// (vertex 0 is the least significant bit).
inline bool family_order(VertexSet a, VertexSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.mask() < b.mask();
}

class Graph {
 public:
  Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n), adj_(n > 0 ? n : 0, 0u) {
    require(n >= 1 && n <= kMaxVertices,
            "Graph: vertex count must be between 1 and " + std::to_string(kMaxVertices));
    for (auto [u, v] : edges) {
      require(u >= 0 && u < n && v >= 0 && v < n, "Graph: edge endpoint out of range");
      require(u != v, "Graph: loop edges are not allowed");
      if (u > v) std::swap(u, v);
      if (has_edge(u, v)) continue;
      adj_[u] |= std::uint32_t{1} << v;
      adj_[v] |= std::uint32_t{1} << u;
      edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
  }

  int vertex_count() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  std::uint32_t adjacency_mask(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const { return u != v && ((adj_[u] >> v) & 1u); }

  std::vector<std::pair<int, int>> non_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (!has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }

  bool is_independent(VertexSet s) const {
    for (std::uint32_t m = s.mask(); m != 0; m &= m - 1) {
      int v = std::countr_zero(m);
      if (adj_[v] & s.mask()) return false;
    }
    return true;
  }

  int degree(int v) const { return std::popcount(adj_[v]); }

 private:
  int n_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::pair<int, int>> edges_;
};

// ---------------------------------------------------------------------------
// Generators

inline Graph make_empty(int n) {
  require(n >= 1, "empty(n): n must be >= 1");
  return Graph(n, {});
}

inline Graph make_complete(int n) {
  require(n >= 1, "complete(n): n must be >= 1");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, std::move(e));
}

inline Graph make_cycle(int n) {
  require(n >= 3, "cycle(n): n must be >= 3");
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph(n, std::move(e));
}

inline Graph make_path(int n) {
  require(n >= 1, "path(n): n must be >= 1");
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, std::move(e));
}

// Outer cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
inline Graph make_petersen() {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < 5; ++v) {
    e.emplace_back(v, (v + 1) % 5);
    e.emplace_back(5 + v, 5 + (v + 2) % 5);
    e.emplace_back(v, v + 5);
  }
  return Graph(10, std::move(e));
}

// Vertices are the s-subsets of {0..m-1} in ascending bitmask order; two
// vertices are adjacent when the subsets are disjoint.
inline Graph make_kneser(int m, int s) {
  require(m >= 1 && s >= 1 && s <= m, "kneser(m,s): need 1 <= s <= m");
  require(binomial(m, s) <= kMaxVertices, "kneser(m,s): too many vertices");
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask)
    if (std::popcount(mask) == s) subsets.push_back(mask);
  int n = static_cast<int>(subsets.size());
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if ((subsets[u] & subsets[v]) == 0) e.emplace_back(u, v);
  return Graph(n, std::move(e));
}

// Deterministic 64-bit LCG (state = state*6364136223846793005 +
// 1442695040888963407).  Documented in the README so corpora are portable.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }
  // 53-bit uniform in [0,1).
  double next_unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
  // Uniform integer in [0, bound) by 64-bit modulo reduction.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

inline Graph make_gnp(int n, double p, std::uint64_t seed) {
  require(n >= 1, "gnp(n,p,seed): n must be >= 1");
  require(p >= 0.0 && p <= 1.0, "gnp(n,p,seed): p must be in [0,1]");
  Lcg64 rng(seed);
  const std::uint64_t threshold =
      static_cast<std::uint64_t>(p * 9007199254740992.0);  // p * 2^53
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if ((rng.next() >> 11) < threshold) e.emplace_back(u, v);
  return Graph(n, std::move(e));
}

// ---------------------------------------------------------------------------
// Independence number by branch and bound with the trivial cardinality bound.

namespace detail {
inline void alpha_search(const Graph& g, std::uint32_t candidates, int current, int& best) {
  if (current + std::popcount(candidates) <= best) return;
  if (candidates == 0) {
    best = std::max(best, current);
    return;
  }
  int v = std::countr_zero(candidates);
  std::uint32_t rest = candidates & (candidates - 1);
  // Include v: drop v and its neighbours from the candidate pool.
  alpha_search(g, rest & ~g.adjacency_mask(v), current + 1, best);
  // Exclude v.
  alpha_search(g, rest, current, best);
}
}  // namespace detail

inline int alpha_exact(const Graph& g) {
  int best = 0;
  detail::alpha_search(g, VertexSet::full(g.vertex_count()).mask(), 0, best);
  return best;
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism for tiny graphs (used to validate generators).

namespace detail {
inline bool extend_isomorphism(const Graph& g, const Graph& h, std::vector<int>& map,
                               std::vector<bool>& used, int v) {
  int n = g.vertex_count();
  if (v == n) return true;
  for (int w = 0; w < n; ++w) {
    if (used[w] || g.degree(v) != h.degree(w)) continue;
    bool ok = true;
    for (int u = 0; u < v && ok; ++u)
      if (g.has_edge(u, v) != h.has_edge(map[u], w)) ok = false;
    if (!ok) continue;
    map[v] = w;
    used[w] = true;
    if (extend_isomorphism(g, h, map, used, v + 1)) return true;
    used[w] = false;
  }
  return false;
}
}  // namespace detail

inline bool isomorphic_bruteforce(const Graph& g, const Graph& h) {
  if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return false;
  require(g.vertex_count() <= 12, "isomorphic_bruteforce: supported only for n <= 12");
  std::vector<int> deg_g, deg_h;
  for (int v = 0; v < g.vertex_count(); ++v) {
    deg_g.push_back(g.degree(v));
    deg_h.push_back(h.degree(v));
  }
  std::sort(deg_g.begin(), deg_g.end());
  std::sort(deg_h.begin(), deg_h.end());
  if (deg_g != deg_h) return false;
  std::vector<int> map(g.vertex_count(), -1);
  std::vector<bool> used(g.vertex_count(), false);
  return detail::extend_isomorphism(g, h, map, used, 0);
}

// ---------------------------------------------------------------------------
// DIMACS edge-list format: "p edge n m" header then "e u v" lines, 1-based.

inline Graph parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::optional<int> n;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string fmt;
      int nn = 0, mm = 0;
      if (!(ls >> fmt >> nn >> mm) || fmt != "edge")
        throw ParseError(line_no, "malformed problem line, expected 'p edge n m'");
      if (nn < 1 || nn > kMaxVertices)
        throw ParseError(line_no, "vertex count out of supported range");
      if (n) throw ParseError(line_no, "duplicate problem line");
      n = nn;
    } else if (tag == "e") {
      int u = 0, v = 0;
      if (!(ls >> u >> v)) throw ParseError(line_no, "malformed edge line");
      if (!n) throw ParseError(line_no, "edge line before problem line");
      if (u < 1 || u > *n || v < 1 || v > *n)
        throw ParseError(line_no, "vertex out of range");
      if (u == v) throw ParseError(line_no, "loop edge");
      edges.emplace_back(u - 1, v - 1);
    } else {
      throw ParseError(line_no, "unknown line type '" + tag + "'");
    }
  }
  if (!n) throw ParseError(line_no, "missing problem line");
  return Graph(*n, std::move(edges));
}

inline std::string write_dimacs(const Graph& g) {
  std::string out = "p edge " + std::to_string(g.vertex_count()) + " " +
                    std::to_string(g.edge_count()) + "\n";
  for (auto [u, v] : g.edges())
    out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
  return out;
}

}  // namespace kpb
