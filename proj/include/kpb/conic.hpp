#pragma once

// Block-structured conic programs over diagonal (LP) and dense PSD blocks:
//
//   optimize <C,X>  subject to  <A_i,X> = b_i,  X in the block cone.
//
// Coefficient matrices are stored as sparse symmetric entry lists with i <= j;
// an off-diagonal entry value v stands for both mirrored positions, so
// <A,X> = sum v * X_ij * (2 - [i==j]).  Data is exact rational; the floating
// solver takes double views.

#include <kpb/rational.hpp>
#include <kpb/report.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace kpb {

enum class BlockKind { Diagonal, Psd };

struct Block {
  BlockKind kind;
  int size;
};

struct SymEntry {
  int i;
  int j;  // i <= j
  Rational value;
};

using BlockCoeff = std::vector<SymEntry>;

inline constexpr int kMaxPsdDim = 200;
inline constexpr int kMaxConstraints = 5000;

struct ConicProgram {
  enum class Sense { Maximize, Minimize };

  Sense sense = Sense::Maximize;
  std::vector<Block> blocks;
  std::vector<BlockCoeff> objective;  // one coefficient list per block

  struct Constraint {
    std::vector<BlockCoeff> coeff;  // one list per block
    Rational rhs;
  };
  std::vector<Constraint> constraints;

  int total_psd_dim() const {
    int total = 0;
    for (const auto& b : blocks)
      if (b.kind == BlockKind::Psd) total += b.size;
    return total;
  }
  std::int64_t variable_count() const {
    std::int64_t total = 0;
    for (const auto& b : blocks)
      total += b.kind == BlockKind::Diagonal ? b.size
                                             : std::int64_t(b.size) * (b.size + 1) / 2;
    return total;
  }

  void validate() const {
    require(!blocks.empty(), "ConicProgram: no blocks");
    require(objective.size() == blocks.size(), "ConicProgram: objective/block mismatch");
    require(static_cast<int>(constraints.size()) <= kMaxConstraints,
            "ConicProgram: constraint cap exceeded");
    require(total_psd_dim() <= kMaxPsdDim, "ConicProgram: PSD dimension cap exceeded");
    auto check_coeff = [&](const std::vector<BlockCoeff>& c) {
      require(c.size() == blocks.size(), "ConicProgram: coefficient/block mismatch");
      for (std::size_t bl = 0; bl < blocks.size(); ++bl) {
        for (const auto& e : c[bl]) {
          require(0 <= e.i && e.i <= e.j && e.j < blocks[bl].size,
                  "ConicProgram: symmetric entry out of range");
          require(blocks[bl].kind == BlockKind::Psd || e.i == e.j,
                  "ConicProgram: off-diagonal entry in a diagonal block");
        }
      }
    };
    check_coeff(objective);
    for (const auto& con : constraints) check_coeff(con.coeff);
  }

  ConicProgram negated() const {
    ConicProgram out = *this;
    out.sense = sense == Sense::Maximize ? Sense::Minimize : Sense::Maximize;
    for (auto& c : out.objective)
      for (auto& e : c) e.value = -e.value;
    return out;
  }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalTrouble };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "?";
}

struct BlockValue {
  BlockKind kind = BlockKind::Diagonal;
  Eigen::VectorXd diag;   // Diagonal blocks
  Eigen::MatrixXd dense;  // Psd blocks

  double entry(int i, int j) const {
    if (kind == BlockKind::Diagonal) return i == j ? diag(i) : 0.0;
    return dense(i, j);
  }
};

struct Residuals {
  double primal_infeasibility = 0;  // max |<A_i,X> - b_i| / (1 + |b|_inf)
  double dual_infeasibility = 0;    // max |sum y_i A_i - Z - C| / (1 + |C|_max)
  double relative_gap = 0;          // |pobj - dobj| / (1 + max(|pobj|,|dobj|))
  double duality_gap = 0;           // dobj - pobj in the maximize convention
  double min_block_eigenvalue = 0;  // over primal blocks
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalTrouble;
  std::vector<BlockValue> X;
  Eigen::VectorXd y;
  std::vector<BlockValue> Z;
  double primal_objective = 0;
  double dual_objective = 0;
  Residuals residuals;  // recomputed from the returned values
  int iterations = 0;
};

// --- double views ------------------------------------------------------------

namespace detail {

inline double coeff_inner(const BlockCoeff& c, const BlockValue& v) {
  double total = 0;
  for (const auto& e : c) {
    double factor = e.i == e.j ? 1.0 : 2.0;
    total += to_double(e.value) * factor * v.entry(e.i, e.j);
  }
  return total;
}

inline double program_inner(const std::vector<BlockCoeff>& c, const std::vector<BlockValue>& v) {
  double total = 0;
  for (std::size_t bl = 0; bl < c.size(); ++bl) total += coeff_inner(c[bl], v[bl]);
  return total;
}

inline double coeff_abs_max(const std::vector<BlockCoeff>& c) {
  double m = 0;
  for (const auto& bc : c)
    for (const auto& e : bc) m = std::max(m, std::abs(to_double(e.value)));
  return m;
}

inline double block_fro_norm(const BlockValue& v) {
  return v.kind == BlockKind::Diagonal ? v.diag.norm() : v.dense.norm();
}

inline double min_eigenvalue(const BlockValue& v) {
  if (v.kind == BlockKind::Diagonal) return v.diag.size() == 0 ? 0.0 : v.diag.minCoeff();
  if (v.dense.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v.dense, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

// Recomputes feasibility of a returned point against the program data; never
// trusts numbers from the solver loop.
inline CheckSet check_solution(const ConicProgram& p, const Solution& s, double tol) {
  require(s.X.size() == p.blocks.size(), "check_solution: block shape mismatch");
  for (std::size_t bl = 0; bl < p.blocks.size(); ++bl) {
    const auto& x = s.X[bl];
    bool shape_ok = x.kind == p.blocks[bl].kind &&
                    (x.kind == BlockKind::Diagonal
                         ? x.diag.size() == p.blocks[bl].size
                         : x.dense.rows() == p.blocks[bl].size &&
                               x.dense.cols() == p.blocks[bl].size);
    require(shape_ok, "check_solution: block shape mismatch");
  }
  CheckSet out;
  double bmax = 0;
  for (const auto& con : p.constraints) bmax = std::max(bmax, std::abs(to_double(con.rhs)));
  double worst = 0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double lhs = detail::program_inner(p.constraints[i].coeff, s.X);
    double resid = std::abs(lhs - to_double(p.constraints[i].rhs));
    worst = std::max(worst, resid);
    if (resid > tol * (1 + bmax))
      out.check_le("constraint[" + std::to_string(i) + "] residual", resid, 0, tol * (1 + bmax));
  }
  out.check_le("max constraint residual", worst, 0, tol * (1 + bmax));
  for (std::size_t bl = 0; bl < p.blocks.size(); ++bl) {
    double mineig = detail::min_eigenvalue(s.X[bl]);
    double scale = detail::block_fro_norm(s.X[bl]);
    out.check_le("block[" + std::to_string(bl) + "] min eigenvalue", -mineig, 0,
                 tol * (1 + scale));
  }
  double pobj = detail::program_inner(p.objective, s.X);
  out.check_eq("objective recomputation", pobj, s.primal_objective,
               tol * (1 + std::abs(pobj)));
  return out;
}

}  // namespace kpb
