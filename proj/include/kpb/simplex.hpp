#pragma once

// Exact rational simplex for the pure-LP subset of ConicProgram (all blocks
// diagonal).  Two-phase tableau method with Bland's rule, so termination is
// guaranteed and infeasibility/unboundedness are decided exactly.

#include <kpb/conic.hpp>
#include <kpb/rational.hpp>

#include <cstdint>
#include <vector>

namespace kpb {

struct RationalSolution {
  SolveStatus status = SolveStatus::NumericalTrouble;
  std::vector<Rational> x;      // per diagonal variable, program order
  std::vector<int> basis;       // basic column indices (>= n marks artificials)
  Rational objective = 0;       // in the program's own sense
  std::vector<Rational> dual;   // row multipliers, program sense
};

namespace simplex_detail {

class Tableau {
 public:
  // max c'x  s.t.  Ax = b, x >= 0 (artificials appended internally).
  Tableau(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
          std::vector<Rational> c)
      : m_(static_cast<int>(a.size())), n_(static_cast<int>(c.size())), cost_(std::move(c)),
        flipped_(static_cast<std::size_t>(m_), false) {
    for (int i = 0; i < m_; ++i)
      if (b[static_cast<std::size_t>(i)] < 0) {
        b[static_cast<std::size_t>(i)] = -b[static_cast<std::size_t>(i)];
        for (auto& v : a[static_cast<std::size_t>(i)]) v = -v;
        flipped_[static_cast<std::size_t>(i)] = true;
      }
    rows_.assign(static_cast<std::size_t>(m_), std::vector<Rational>(static_cast<std::size_t>(n_ + m_ + 1), Rational(0)));
    basis_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(n_ + i)] = 1;
      rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(n_ + m_)] = b[static_cast<std::size_t>(i)];
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  // Returns false when phase 1 proves infeasibility.
  bool phase1() {
    // maximize -sum(artificials); with the artificial basis the reduced cost
    // of column j is the column sum over rows.
    reduced_.assign(static_cast<std::size_t>(n_ + m_), Rational(0));
    value_ = 0;
    for (int i = 0; i < m_; ++i) {
      value_ -= rhs(i);
      for (int j = 0; j < n_; ++j) reduced_[static_cast<std::size_t>(j)] += rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    run(/*allow_artificial=*/false);
    return value_ == 0;
  }

  void phase2() {
    // Recompute reduced costs for the true objective over the current basis.
    reduced_.assign(static_cast<std::size_t>(n_ + m_), Rational(0));
    for (int j = 0; j < n_; ++j) reduced_[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)];
    value_ = 0;
    for (int i = 0; i < m_; ++i) {
      Rational cb = basis_[static_cast<std::size_t>(i)] < n_ ? cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] : Rational(0);
      if (cb == 0) continue;
      value_ += cb * rhs(i);
      for (int j = 0; j < n_ + m_; ++j) reduced_[static_cast<std::size_t>(j)] -= cb * rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    unbounded_ = false;
    run(/*allow_artificial=*/false);
  }

  bool unbounded() const { return unbounded_; }
  Rational objective() const { return value_; }
  const std::vector<int>& basis() const { return basis_; }

  std::vector<Rational> primal() const {
    std::vector<Rational> x(static_cast<std::size_t>(n_), Rational(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] < n_) x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = rhs(i);
    return x;
  }

  // y_i = -reduced cost of the i-th artificial column (cost 0 in phase 2),
  // with the sign restored on rows that were flipped for a nonnegative rhs.
  std::vector<Rational> duals() const {
    std::vector<Rational> y(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      y[static_cast<std::size_t>(i)] = -reduced_[static_cast<std::size_t>(n_ + i)];
      if (flipped_[static_cast<std::size_t>(i)]) y[static_cast<std::size_t>(i)] = -y[static_cast<std::size_t>(i)];
    }
    return y;
  }

 private:
  Rational rhs(int i) const { return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(n_ + m_)]; }

  void run(bool allow_artificial) {
    while (true) {
      // Bland: entering = smallest-index column with positive reduced cost.
      int enter = -1;
      int limit = allow_artificial ? n_ + m_ : n_;
      for (int j = 0; j < limit; ++j)
        if (reduced_[static_cast<std::size_t>(j)] > 0) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      // Bland: leaving = tightest ratio, ties by smallest basic variable.
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        const Rational& a = rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (a <= 0) continue;
        Rational ratio = rhs(i) / a;
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        unbounded_ = true;
        return;
      }
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    auto& prow = rows_[static_cast<std::size_t>(r)];
    Rational inv = Rational(1) / prow[static_cast<std::size_t>(c)];
    for (auto& v : prow) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      Rational f = rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      auto& row = rows_[static_cast<std::size_t>(i)];
      for (int j = 0; j <= n_ + m_; ++j) row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
    }
    Rational f = reduced_[static_cast<std::size_t>(c)];
    if (f != 0) {
      for (int j = 0; j < n_ + m_; ++j) reduced_[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
      value_ += f * rhs(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  int m_, n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> reduced_;
  std::vector<Rational> cost_;
  std::vector<int> basis_;
  std::vector<bool> flipped_;
  Rational value_ = 0;
  bool unbounded_ = false;
};

}  // namespace simplex_detail

inline RationalSolution solve_lp_exact(const ConicProgram& prog) {
  prog.validate();
  for (const auto& b : prog.blocks)
    require(b.kind == BlockKind::Diagonal, "solve_lp_exact: PSD block present");
  const bool minimize = prog.sense == ConicProgram::Sense::Minimize;

  // Flatten diagonal blocks into one variable vector.
  std::vector<int> offset(prog.blocks.size() + 1, 0);
  for (std::size_t bl = 0; bl < prog.blocks.size(); ++bl)
    offset[bl + 1] = offset[bl] + prog.blocks[bl].size;
  int n = offset.back();
  int m = static_cast<int>(prog.constraints.size());
  require(static_cast<std::int64_t>(m) * (n + m) <= 8000000,
          "solve_lp_exact: tableau exceeds the exact-mode size cap");

  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
  std::vector<Rational> b(static_cast<std::size_t>(m)), c(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < m; ++i) {
    b[static_cast<std::size_t>(i)] = prog.constraints[static_cast<std::size_t>(i)].rhs;
    for (std::size_t bl = 0; bl < prog.blocks.size(); ++bl)
      for (const auto& e : prog.constraints[static_cast<std::size_t>(i)].coeff[bl])
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(offset[bl] + e.i)] += e.value;
  }
  for (std::size_t bl = 0; bl < prog.blocks.size(); ++bl)
    for (const auto& e : prog.objective[bl]) {
      Rational v = minimize ? -e.value : e.value;
      c[static_cast<std::size_t>(offset[bl] + e.i)] += v;
    }

  simplex_detail::Tableau tab(std::move(a), std::move(b), std::move(c));
  RationalSolution out;
  if (!tab.phase1()) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  tab.phase2();
  if (tab.unbounded()) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.x = tab.primal();
  out.basis = tab.basis();
  out.objective = minimize ? -tab.objective() : tab.objective();
  out.dual = tab.duals();
  if (minimize)
    for (auto& v : out.dual) v = -v;
  return out;
}

}  // namespace kpb
