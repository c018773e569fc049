#pragma once

// Exact sparse matrices between indexed spaces.  Entries are rationals kept
// sorted by (row, col) with no duplicates; the adjoint is the transpose.

#include <kpb/family.hpp>
#include <kpb/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace kpb {

class SparseLinearMap {
 public:
  struct Entry {
    std::int64_t row;
    std::int64_t col;
    Rational value;
  };

  SparseLinearMap(FamilyPtr row_space, FamilyPtr col_space, std::vector<Entry> entries)
      : rows_(std::move(row_space)), cols_(std::move(col_space)) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (auto& e : entries) {
      require(e.row >= 0 && e.row < rows_->size() && e.col >= 0 && e.col < cols_->size(),
              "SparseLinearMap: entry out of range");
      if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
        entries_.back().value += e.value;
      } else {
        entries_.push_back(std::move(e));
      }
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0; });
  }

  const FamilyPtr& row_space() const { return rows_; }
  const FamilyPtr& col_space() const { return cols_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  template <class T>
  std::vector<T> apply(std::span<const T> x) const {
    require(static_cast<std::int64_t>(x.size()) == cols_->size(),
            "SparseLinearMap::apply: dimension mismatch");
    std::vector<T> y(static_cast<std::size_t>(rows_->size()), T(0));
    for (const auto& e : entries_) y[static_cast<std::size_t>(e.row)] += scalar<T>(e.value) * x[static_cast<std::size_t>(e.col)];
    return y;
  }

  template <class T>
  std::vector<T> apply_transpose(std::span<const T> x) const {
    require(static_cast<std::int64_t>(x.size()) == rows_->size(),
            "SparseLinearMap::apply_transpose: dimension mismatch");
    std::vector<T> y(static_cast<std::size_t>(cols_->size()), T(0));
    for (const auto& e : entries_) y[static_cast<std::size_t>(e.col)] += scalar<T>(e.value) * x[static_cast<std::size_t>(e.row)];
    return y;
  }

  SparseLinearMap transpose() const {
    std::vector<Entry> t;
    t.reserve(entries_.size());
    for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
    return SparseLinearMap(cols_, rows_, std::move(t));
  }

  // Exact matrix product this * other (this.cols must equal other.rows).
  SparseLinearMap compose(const SparseLinearMap& other) const {
    require(cols_->size() == other.rows_->size() &&
                cols_->describe() == other.rows_->describe(),
            "SparseLinearMap::compose: inner spaces differ");
    // Bucket the right factor by row for the merge.
    std::vector<std::size_t> start(static_cast<std::size_t>(other.rows_->size()) + 1, 0);
    for (const auto& e : other.entries_) ++start[static_cast<std::size_t>(e.row) + 1];
    for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
    std::vector<Entry> out;
    for (const auto& a : entries_) {
      std::size_t lo = start[static_cast<std::size_t>(a.col)];
      std::size_t hi = start[static_cast<std::size_t>(a.col) + 1];
      for (std::size_t i = lo; i < hi; ++i) {
        const auto& b = other.entries_[i];
        out.push_back({a.row, b.col, a.value * b.value});
      }
    }
    return SparseLinearMap(rows_, other.cols_, std::move(out));
  }

  bool same_entries(const SparseLinearMap& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& a = entries_[i];
      const auto& b = other.entries_[i];
      if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
    }
    return true;
  }

  // Triplet text dump: one "row col numerator/denominator" line per entry.
  void dump_triplets(std::ostream& os) const {
    for (const auto& e : entries_)
      os << e.row << " " << e.col << " " << to_string(e.value) << "\n";
  }

 private:
  template <class T>
  static T scalar(const Rational& q) {
    if constexpr (std::is_same_v<T, Rational>) {
      return q;
    } else {
      return static_cast<T>(to_double(q));
    }
  }

  FamilyPtr rows_, cols_;
  std::vector<Entry> entries_;
};

}  // namespace kpb
