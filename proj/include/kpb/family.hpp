#pragma once

// Canonical bijections between combinatorial families and contiguous indices.
//
// Orderings are fixed so operator matrices are reproducible bit for bit:
//   - set families: sorted by (cardinality, then bitmask value);
//   - tuples over V^t: row-major order, last coordinate varying fastest;
//   - multisets of size m: as nondecreasing tuples in lexicographic order;
//   - (S,T,Q) triples: Q-major over the base family, then the upper-triangle
//     rank of (S,T) over I_1 with S <= T, where I_1 is indexed 0 -> empty set,
//     1+x -> {x}.
// Index 0 of an independent-set family is always the empty set.

#include <kpb/counting.hpp>
#include <kpb/graph.hpp>
#include <kpb/rational.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace kpb {

enum class FamilyKind { IndependentSets, Tuples, Multisets, SetPairsWithBase };

inline constexpr std::int64_t kMaxTupleSpace = 2000000;  // refuse n^t above this

class IndexedFamily;
using FamilyPtr = std::shared_ptr<const IndexedFamily>;

class IndexedFamily {
 public:
  static FamilyPtr independent_sets(const Graph& g, int k);
  static FamilyPtr tuples(int n, int t);
  static FamilyPtr multisets(int n, int m);
  static FamilyPtr set_pairs_with_base(const Graph& g, int k);

  FamilyKind kind() const { return kind_; }
  std::int64_t size() const { return size_; }
  int ground_size() const { return n_; }
  int arity() const { return arity_; }  // k for sets, t for tuples, m for multisets
  const Graph& graph() const {
    require(graph_.has_value(), "IndexedFamily: no underlying graph");
    return *graph_;
  }

  // --- IndependentSets accessors ---
  VertexSet set_at(std::int64_t index) const {
    check_kind(FamilyKind::IndependentSets);
    return sets_[static_cast<std::size_t>(index)];
  }
  std::int64_t index_of_set(VertexSet s) const {
    check_kind(FamilyKind::IndependentSets);
    auto it = set_index_.find(s.mask());
    require(it != set_index_.end(), "IndexedFamily: set not in family " + s.str());
    return it->second;
  }
  bool contains_set(VertexSet s) const {
    check_kind(FamilyKind::IndependentSets);
    return set_index_.count(s.mask()) > 0;
  }
  int max_cardinality() const { return static_cast<int>(card_count_.size()) - 1; }
  std::int64_t count_of_cardinality(int r) const {
    check_kind(FamilyKind::IndependentSets);
    if (r < 0 || r >= static_cast<int>(card_count_.size())) return 0;
    return card_count_[r];
  }

  // --- Tuples accessors (implicit indexing) ---
  std::vector<int> tuple_at(std::int64_t index) const {
    check_kind(FamilyKind::Tuples);
    std::vector<int> out(arity_);
    for (int i = arity_ - 1; i >= 0; --i) {
      out[i] = static_cast<int>(index % n_);
      index /= n_;
    }
    return out;
  }
  std::int64_t index_of_tuple(std::span<const int> t) const {
    check_kind(FamilyKind::Tuples);
    require(static_cast<int>(t.size()) == arity_, "IndexedFamily: tuple arity mismatch");
    std::int64_t index = 0;
    for (int v : t) {
      require(v >= 0 && v < n_, "IndexedFamily: tuple coordinate out of range");
      index = index * n_ + v;
    }
    return index;
  }

  // --- Multisets accessors (sorted-tuple form and per-vertex counts) ---
  std::vector<int> multiset_at(std::int64_t index) const;
  std::int64_t index_of_multiset(std::span<const int> sorted) const;
  std::vector<int> multiset_counts_at(std::int64_t index) const {
    std::vector<int> counts(n_, 0);
    for (int v : multiset_at(index)) ++counts[v];
    return counts;
  }

  // --- SetPairsWithBase accessors ---
  struct Triple {
    int s;        // I_1 index of S (0 = empty, 1+x = {x})
    int t;        // I_1 index of T, s <= t
    VertexSet q;  // base element
    std::int64_t q_index;
  };
  Triple triple_at(std::int64_t index) const {
    check_kind(FamilyKind::SetPairsWithBase);
    std::int64_t pairs = pair_space();
    std::int64_t qi = index / pairs;
    int rank = static_cast<int>(index % pairs);
    auto [s, t] = unrank_pair(rank);
    return Triple{s, t, base_->set_at(qi), qi};
  }
  std::int64_t index_of_triple(int s, int t, std::int64_t q_index) const {
    check_kind(FamilyKind::SetPairsWithBase);
    require(0 <= s && s <= t && t <= n_, "IndexedFamily: bad I_1 pair indices");
    return q_index * pair_space() + rank_pair(s, t);
  }
  const FamilyPtr& base_family() const { return base_; }

  // I_1 convention shared by the triple space and the bound builders.
  VertexSet i1_set(int index) const {
    return index == 0 ? VertexSet() : VertexSet::single(index - 1);
  }
  int i1_size() const { return n_ + 1; }

  std::string label(std::int64_t index) const;
  std::string describe() const;

 private:
  IndexedFamily() = default;
  void check_kind(FamilyKind k) const {
    require(kind_ == k, "IndexedFamily: accessor does not match kind " + describe());
  }
  std::int64_t pair_space() const {
    std::int64_t l = n_ + 1;
    return l * (l + 1) / 2;
  }
  int rank_pair(int a, int b) const {
    int l = n_ + 1;  // indices 0..n, a <= b
    return a * l - a * (a - 1) / 2 + (b - a);
  }
  std::pair<int, int> unrank_pair(int rank) const {
    int l = n_ + 1;
    int a = 0;
    while (rank >= l - a) {
      rank -= l - a;
      ++a;
    }
    return {a, a + rank};
  }

  FamilyKind kind_ = FamilyKind::IndependentSets;
  int n_ = 0;
  int arity_ = 0;
  std::int64_t size_ = 0;
  std::optional<Graph> graph_;
  std::vector<VertexSet> sets_;
  std::unordered_map<std::uint32_t, std::int64_t> set_index_;
  std::vector<std::int64_t> card_count_;
  FamilyPtr base_;
};

// ---------------------------------------------------------------------------

inline FamilyPtr IndexedFamily::independent_sets(const Graph& g, int k) {
  require(k >= 0, "independent_sets: k must be >= 0");
  auto fam = std::shared_ptr<IndexedFamily>(new IndexedFamily());
  fam->kind_ = FamilyKind::IndependentSets;
  fam->n_ = g.vertex_count();
  fam->arity_ = k;
  fam->graph_ = g;

  // Depth-first extension by increasing vertex, pruned by adjacency.
  std::vector<VertexSet> out{VertexSet()};
  std::vector<std::pair<VertexSet, int>> stack{{VertexSet(), -1}};
  while (!stack.empty()) {
    auto [s, last] = stack.back();
    stack.pop_back();
    if (s.size() >= k) continue;
    for (int v = last + 1; v < g.vertex_count(); ++v) {
      if (g.adjacency_mask(v) & s.mask()) continue;
      VertexSet next = s.with(v);
      out.push_back(next);
      stack.emplace_back(next, v);
    }
  }
  std::sort(out.begin(), out.end(), family_order);
  fam->sets_ = std::move(out);
  fam->size_ = static_cast<std::int64_t>(fam->sets_.size());
  fam->card_count_.assign(static_cast<std::size_t>(k) + 1, 0);
  for (std::int64_t i = 0; i < fam->size_; ++i) {
    fam->set_index_[fam->sets_[static_cast<std::size_t>(i)].mask()] = i;
    ++fam->card_count_[static_cast<std::size_t>(fam->sets_[static_cast<std::size_t>(i)].size())];
  }
  return fam;
}

inline FamilyPtr IndexedFamily::tuples(int n, int t) {
  require(n >= 1 && t >= 0, "tuples: need n >= 1, t >= 0");
  std::int64_t size = 1;
  for (int i = 0; i < t; ++i) {
    size *= n;
    require(size <= kMaxTupleSpace, "tuples: space n^t exceeds materialization cap");
  }
  auto fam = std::shared_ptr<IndexedFamily>(new IndexedFamily());
  fam->kind_ = FamilyKind::Tuples;
  fam->n_ = n;
  fam->arity_ = t;
  fam->size_ = size;
  return fam;
}

inline FamilyPtr IndexedFamily::multisets(int n, int m) {
  require(n >= 1 && m >= 0, "multisets: need n >= 1, m >= 0");
  Int count = binomial(n + m - 1, m);
  require(count <= Int(kMaxTupleSpace), "multisets: family exceeds materialization cap");
  auto fam = std::shared_ptr<IndexedFamily>(new IndexedFamily());
  fam->kind_ = FamilyKind::Multisets;
  fam->n_ = n;
  fam->arity_ = m;
  fam->size_ = count.convert_to<std::int64_t>();
  return fam;
}

inline FamilyPtr IndexedFamily::set_pairs_with_base(const Graph& g, int k) {
  require(k >= 2, "set_pairs_with_base: k must be >= 2");
  auto fam = std::shared_ptr<IndexedFamily>(new IndexedFamily());
  fam->kind_ = FamilyKind::SetPairsWithBase;
  fam->n_ = g.vertex_count();
  fam->arity_ = k;
  fam->graph_ = g;
  fam->base_ = independent_sets(g, k - 2);
  fam->size_ = fam->base_->size() * fam->pair_space();
  return fam;
}

// Lexicographic rank of a nondecreasing tuple via the strictly-increasing
// shift c_i + i and the combinatorial number system.
inline std::int64_t IndexedFamily::index_of_multiset(std::span<const int> sorted) const {
  check_kind(FamilyKind::Multisets);
  require(static_cast<int>(sorted.size()) == arity_, "IndexedFamily: multiset arity mismatch");
  int m = arity_, big = n_ + m - 1;
  Int rank = 0;
  int prev = -1;
  for (int i = 0; i < m; ++i) {
    require(sorted[i] >= 0 && sorted[i] < n_ && (i == 0 || sorted[i] >= sorted[i - 1]),
            "IndexedFamily: multiset tuple not sorted or out of range");
    int d = sorted[i] + i;
    for (int x = prev + 1; x < d; ++x) rank += binomial(big - 1 - x, m - 1 - i);
    prev = d;
  }
  return rank.convert_to<std::int64_t>();
}

inline std::vector<int> IndexedFamily::multiset_at(std::int64_t index) const {
  check_kind(FamilyKind::Multisets);
  require(index >= 0 && index < size_, "IndexedFamily: multiset index out of range");
  int m = arity_, big = n_ + m - 1;
  std::vector<int> out(m);
  Int rank = index;
  int x = 0;
  for (int i = 0; i < m; ++i) {
    while (true) {
      Int block = binomial(big - 1 - x, m - 1 - i);
      if (rank < block) break;
      rank -= block;
      ++x;
    }
    out[i] = x - i;
    ++x;
  }
  return out;
}

inline std::string IndexedFamily::label(std::int64_t index) const {
  switch (kind_) {
    case FamilyKind::IndependentSets:
      return set_at(index).str();
    case FamilyKind::Tuples: {
      std::string s = "(";
      auto t = tuple_at(index);
      for (std::size_t i = 0; i < t.size(); ++i)
        s += (i ? "," : "") + std::to_string(t[i]);
      return s + ")";
    }
    case FamilyKind::Multisets: {
      std::string s = "[";
      auto t = multiset_at(index);
      for (std::size_t i = 0; i < t.size(); ++i)
        s += (i ? "," : "") + std::to_string(t[i]);
      return s + "]";
    }
    case FamilyKind::SetPairsWithBase: {
      auto tr = triple_at(index);
      return "(" + i1_set(tr.s).str() + "," + i1_set(tr.t).str() + "," + tr.q.str() + ")";
    }
  }
  return "?";
}

inline std::string IndexedFamily::describe() const {
  std::string g;
  if (graph_) {
    g = ",G=" + std::to_string(graph_->vertex_count()) + ":";
    for (auto [u, v] : graph_->edges()) g += std::to_string(u) + "-" + std::to_string(v) + ";";
  }
  switch (kind_) {
    case FamilyKind::IndependentSets:
      return "IndependentSets(k=" + std::to_string(arity_) + g + ")";
    case FamilyKind::Tuples:
      return "Tuples(n=" + std::to_string(n_) + ",t=" + std::to_string(arity_) + ")";
    case FamilyKind::Multisets:
      return "Multisets(n=" + std::to_string(n_) + ",m=" + std::to_string(arity_) + ")";
    case FamilyKind::SetPairsWithBase:
      return "SetPairsWithBase(k=" + std::to_string(arity_) + g + ")";
  }
  return "?";
}

}  // namespace kpb
