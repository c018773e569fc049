#pragma once

// Test-only brute-force oracles, independent of the library's enumeration and
// branch-and-bound paths.

#include <kpb/counting.hpp>
#include <kpb/graph.hpp>

#include <cstdint>
#include <vector>

namespace kpb::testing {

// All independent sets of cardinality <= k by scanning every subset.
inline std::vector<VertexSet> brute_independent_sets(const Graph& g, int k) {
  int n = g.vertex_count();
  std::vector<VertexSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    VertexSet s(static_cast<std::uint32_t>(mask));
    if (s.size() > k) continue;
    bool ok = true;
    for (auto [u, v] : g.edges())
      if (s.contains(u) && s.contains(v)) ok = false;
    if (ok) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), family_order);
  return out;
}

inline int brute_alpha(const Graph& g) {
  int best = 0;
  for (const auto& s : brute_independent_sets(g, g.vertex_count()))
    best = std::max(best, s.size());
  return best;
}

// Count tuples in {0..m-1}^t that use every symbol, by direct enumeration.
inline Int brute_covering_count(int t, int m) {
  if (m == 0) return t == 0 ? Int(1) : Int(0);
  Int count = 0;
  std::vector<int> tup(static_cast<std::size_t>(t), 0);
  while (true) {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (int v : tup) seen[static_cast<std::size_t>(v)] = true;
    bool all = true;
    for (bool b : seen) all = all && b;
    if (all) ++count;
    int pos = t - 1;
    while (pos >= 0 && tup[static_cast<std::size_t>(pos)] == m - 1) {
      tup[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++tup[static_cast<std::size_t>(pos)];
  }
  return count;
}

}  // namespace kpb::testing
