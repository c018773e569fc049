#pragma once

// Vectors over an indexed family (discrete measures) and a small dense
// rational matrix used for transferred two-point measures.

#include <kpb/family.hpp>
#include <kpb/rational.hpp>

#include <vector>

namespace kpb {

template <class T>
struct MeasureVector {
  FamilyPtr family;
  std::vector<T> values;

  T& operator[](std::int64_t i) { return values[static_cast<std::size_t>(i)]; }
  const T& operator[](std::int64_t i) const { return values[static_cast<std::size_t>(i)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

  T at_set(VertexSet s) const { return values[static_cast<std::size_t>(family->index_of_set(s))]; }

  static MeasureVector zero(FamilyPtr fam) {
    return MeasureVector{fam, std::vector<T>(static_cast<std::size_t>(fam->size()), T(0))};
  }
};

inline MeasureVector<Rational> to_rational(const MeasureVector<double>& m) {
  MeasureVector<Rational> out{m.family, {}};
  out.values.reserve(m.values.size());
  for (double v : m.values) out.values.push_back(exact_rational(v));
  return out;
}

inline MeasureVector<double> to_double(const MeasureVector<Rational>& m) {
  MeasureVector<double> out{m.family, {}};
  out.values.reserve(m.values.size());
  for (const auto& v : m.values) out.values.push_back(to_double(v));
  return out;
}

class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(0)) {}

  int size() const { return n_; }
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }

  Rational trace() const {
    Rational t = 0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }
  Rational total() const {
    Rational t = 0;
    for (const auto& v : a_) t += v;
    return t;
  }
  Rational min_entry() const {
    Rational best = a_.empty() ? Rational(0) : a_[0];
    for (const auto& v : a_) best = std::min(best, v);
    return best;
  }

 private:
  int n_ = 0;
  std::vector<Rational> a_;
};

// Exact positive-semidefiniteness by symmetric Gaussian elimination: a zero
// pivot forces a zero row, a negative pivot refutes.
inline bool exact_psd(RationalMatrix m) {
  int n = m.size();
  for (int col = 0; col < n; ++col) {
    if (m(col, col) < 0) return false;
    if (m(col, col) == 0) {
      for (int j = col + 1; j < n; ++j)
        if (m(col, j) != 0) return false;
      continue;
    }
    for (int i = col + 1; i < n; ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / m(col, col);
      for (int j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return true;
}

}  // namespace kpb
