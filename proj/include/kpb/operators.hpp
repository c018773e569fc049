#pragma once

// The combinatorial linear operators, materialized as exact sparse matrices:
//
//   decomposition_map      aggregates kernels F(S,T,Q) over the splittings
//                          Q u S u T = I of each independent set, with the
//                          unordered (S,T) multiplicity folded into the entry;
//   symmetrization_map_*   lifts a symmetric two-point kernel to a symmetric
//                          function of r+2 points (tuple rows, or the
//                          multiset-collapsed integer rows);
//   cover_prefix_map       counts s-tuples covering I with a fixed t-prefix;
//   cover_count_vector     the per-set covering-tuple counts.
//
// Symmetric two-point kernels are indexed by Multisets(n,2): entry {a,b} is
// the common value Z(a,b) = Z(b,a).

#include <kpb/counting.hpp>
#include <kpb/family.hpp>
#include <kpb/graph.hpp>
#include <kpb/sparse_map.hpp>

#include <array>
#include <span>
#include <vector>

namespace kpb {

inline VertexSet flatten(std::span<const int> tuple) {
  VertexSet s;
  for (int v : tuple) {
    require(v >= 0 && v < kMaxVertices, "flatten: coordinate out of range");
    s = s.with(v);
  }
  return s;
}

// Entry at (I,(S,T,Q)) counts the ordered (S,T) arrangements with
// Q u S u T = I; columns whose triple never assembles an independent set
// stay empty.  The transpose realizes nu |-> nu(S u T u Q) on independent
// unions.
inline SparseLinearMap decomposition_map(const Graph& g, int k) {
  require(k >= 2, "decomposition_map: k must be >= 2");
  FamilyPtr rows = IndexedFamily::independent_sets(g, k);
  FamilyPtr cols = IndexedFamily::set_pairs_with_base(g, k);
  const auto& base = cols->base_family();
  std::vector<SparseLinearMap::Entry> entries;
  for (std::int64_t ri = 0; ri < rows->size(); ++ri) {
    VertexSet I = rows->set_at(ri);
    std::vector<int> sub1{0};
    for (int x : I.elements()) sub1.push_back(1 + x);
    for (std::size_t a = 0; a < sub1.size(); ++a) {
      for (std::size_t b = a; b < sub1.size(); ++b) {
        int si = sub1[a], ti = sub1[b];
        VertexSet u = cols->i1_set(si).unite(cols->i1_set(ti));
        VertexSet required = I.minus(u);
        // Q ranges over the supersets of I \ (S u T) inside I.
        std::uint32_t extra = u.mask();
        while (true) {
          VertexSet q = required.unite(VertexSet(extra));
          if (q.size() <= k - 2) {
            std::int64_t col = cols->index_of_triple(si, ti, base->index_of_set(q));
            entries.push_back({ri, col, Rational(si == ti ? 1 : 2)});
          }
          if (extra == 0) break;
          extra = (extra - 1) & u.mask();
        }
      }
    }
  }
  return SparseLinearMap(std::move(rows), std::move(cols), std::move(entries));
}

// Tuple-form rows: row x asserts sum_{i != j} Z(x_i, x_j) / ((r+2)(r+1)) for
// symmetric Z.
inline SparseLinearMap symmetrization_map_tuples(int n, int r) {
  require(r >= 0 && n >= 1, "symmetrization_map_tuples: need r >= 0, n >= 1");
  FamilyPtr rows = IndexedFamily::tuples(n, r + 2);
  FamilyPtr cols = IndexedFamily::multisets(n, 2);
  const Rational scale(1, static_cast<long>(r + 2) * (r + 1));
  std::vector<SparseLinearMap::Entry> entries;
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (std::int64_t ri = 0; ri < rows->size(); ++ri) {
    auto tuple = rows->tuple_at(ri);
    std::fill(counts.begin(), counts.end(), 0);
    for (int v : tuple) ++counts[static_cast<std::size_t>(v)];
    for (int v = 0; v < n; ++v) {
      if (counts[v] >= 2) {
        std::array<int, 2> ms{v, v};
        entries.push_back({ri, cols->index_of_multiset(ms),
                           Rational(counts[v]) * (counts[v] - 1) * scale});
      }
      for (int w = v + 1; w < n; ++w) {
        if (counts[v] > 0 && counts[w] > 0) {
          std::array<int, 2> ms{v, w};
          entries.push_back({ri, cols->index_of_multiset(ms),
                             Rational(2) * counts[v] * counts[w] * scale});
        }
      }
    }
  }
  return SparseLinearMap(std::move(rows), std::move(cols), std::move(entries));
}

// Multiset-collapsed integer rows: row m has entry m_v(m_v - 1) at {v,v} and
// 2 m_v m_w at {v,w}.  Each tuple row above is this row divided by
// (r+2)(r+1), so the two forms have the same sign pattern.
inline SparseLinearMap symmetrization_map_multisets(int n, int r) {
  require(r >= 0 && n >= 1, "symmetrization_map_multisets: need r >= 0, n >= 1");
  FamilyPtr rows = IndexedFamily::multisets(n, r + 2);
  FamilyPtr cols = IndexedFamily::multisets(n, 2);
  std::vector<SparseLinearMap::Entry> entries;
  for (std::int64_t ri = 0; ri < rows->size(); ++ri) {
    auto counts = rows->multiset_counts_at(ri);
    for (int v = 0; v < n; ++v) {
      if (counts[v] >= 2) {
        std::array<int, 2> ms{v, v};
        entries.push_back({ri, cols->index_of_multiset(ms),
                           Rational(counts[v]) * (counts[v] - 1)});
      }
      for (int w = v + 1; w < n; ++w) {
        if (counts[v] > 0 && counts[w] > 0) {
          std::array<int, 2> ms{v, w};
          entries.push_back({ri, cols->index_of_multiset(ms),
                             Rational(2) * counts[v] * counts[w]});
        }
      }
    }
  }
  return SparseLinearMap(std::move(rows), std::move(cols), std::move(entries));
}

// Reads a symmetric kernel at an ordered pair: Tuples(n,2) -> Multisets(n,2).
inline SparseLinearMap unfold_pairs_map(int n) {
  FamilyPtr rows = IndexedFamily::tuples(n, 2);
  FamilyPtr cols = IndexedFamily::multisets(n, 2);
  std::vector<SparseLinearMap::Entry> entries;
  for (std::int64_t ri = 0; ri < rows->size(); ++ri) {
    auto t = rows->tuple_at(ri);
    std::array<int, 2> ms{std::min(t[0], t[1]), std::max(t[0], t[1])};
    entries.push_back({ri, cols->index_of_multiset(ms), Rational(1)});
  }
  return SparseLinearMap(std::move(rows), std::move(cols), std::move(entries));
}

// Entry (I, w) counts the tuples v in V^s with flattening I and prefix
// (v_1..v_t) = w.  Nonzero only when the prefix stays inside I.
inline SparseLinearMap cover_prefix_map(const Graph& g, int s, int t, int k) {
  require(s >= 1 && t >= 0 && t <= s, "cover_prefix_map: need 1 <= s and 0 <= t <= s");
  FamilyPtr rows = IndexedFamily::independent_sets(g, k);
  FamilyPtr cols = IndexedFamily::tuples(g.vertex_count(), t);
  std::vector<SparseLinearMap::Entry> entries;
  std::vector<int> idx(static_cast<std::size_t>(t), 0), w(static_cast<std::size_t>(t), 0);
  for (std::int64_t ri = 0; ri < rows->size(); ++ri) {
    VertexSet I = rows->set_at(ri);
    auto els = I.elements();
    int card = I.size();
    if (card == 0 && t > 0) continue;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      VertexSet seen;
      for (int i = 0; i < t; ++i) {
        w[static_cast<std::size_t>(i)] = els[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        seen = seen.with(w[static_cast<std::size_t>(i)]);
      }
      Int cnt = cover_completion_count(s - t, card, card - seen.size());
      if (cnt != 0) entries.push_back({ri, cols->index_of_tuple(w), Rational(cnt)});
      // Odometer over I^t, last coordinate fastest.
      int pos = t - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == card - 1) {
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
    }
  }
  return SparseLinearMap(std::move(rows), std::move(cols), std::move(entries));
}

// Vector over IndependentSets(g,k) whose entry at I counts the t-tuples
// covering I.
inline std::vector<Rational> cover_count_vector(const Graph& g, int k, int t) {
  FamilyPtr fam = IndexedFamily::independent_sets(g, k);
  std::vector<Rational> out(static_cast<std::size_t>(fam->size()));
  for (std::int64_t i = 0; i < fam->size(); ++i)
    out[static_cast<std::size_t>(i)] = Rational(covering_tuple_count(t, fam->set_at(i).size()));
  return out;
}

}  // namespace kpb
