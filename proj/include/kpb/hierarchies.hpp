#pragma once

// The two bound hierarchies on a finite graph.
//
// Delta (SDP, one level per k >= 2): measures nu on independent sets of size
// at most k, normalized at the empty set, whose split slices
// M_Q(S,T) = nu(S u T u Q) are PSD over I_1 for every base Q; the objective
// is the singleton mass.  Two builds are provided: the literal form with one
// (n+1)-dimensional PSD block per Q and explicit zero pins, and the reduced
// solver form that drops the rows forced to zero (a PSD matrix with a zero
// diagonal entry has a zero row, so the two programs have equal optima; the
// reduced one keeps a strictly feasible interior, which the literal one
// lacks).
//
// Xi (LP, one level per r >= 0): the dual program minimizes lambda over
// kernels Z with Z(x,x) <= lambda-1, Z <= -1 on non-edges, and nonnegative
// symmetrized (r+2)-point rows; the primal maximizes the total mass of a
// nonnegative multiset measure beta whose induced two-point measure has unit
// diagonal mass and vanishes on edges.  The dual is encoded with
// sign-restricted variables (lambda >= 0, diagonal >= 0, nonedge = -1 - u,
// edge >= 0), which preserves the optimum: every feasible kernel has a
// nonnegative diagonal and lambda >= 1 (forced by the constant-multiset
// rows), and raising edge entries to zero keeps feasibility.

#include <kpb/conic.hpp>
#include <kpb/graph.hpp>
#include <kpb/ipm.hpp>
#include <kpb/measure.hpp>
#include <kpb/operators.hpp>
#include <kpb/report.hpp>
#include <kpb/simplex.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

namespace kpb {

inline constexpr double kFeasTol = 1e-6;

enum class LpEngine { Auto, Ipm, ExactSimplex };

struct BoundResult {
  std::string name;
  double value = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::NumericalTrouble;
  std::optional<Rational> exact_value;
  MeasureVector<double> witness;      // nu (delta) or beta (xi primal)
  std::optional<double> lambda;       // xi dual
  Eigen::MatrixXd kernel;             // xi dual Z, or the two-point matrix of beta
  CheckSet verification;
  Residuals residuals;
  int iterations = 0;
  double runtime_sec = 0;
};

// ---------------------------------------------------------------------------
// Delta build

enum class DeltaForm { Reduced, Full };

struct DeltaBuild {
  ConicProgram program;
  FamilyPtr family;    // IndependentSets(g, k)
  FamilyPtr q_family;  // IndependentSets(g, k-2)
  DeltaForm form = DeltaForm::Reduced;
  struct QBlock {
    std::int64_t q_index;
    VertexSet q;
    int block_index;
    std::vector<int> members;  // I_1 indices included in this block
  };
  std::vector<QBlock> qblocks;
};

inline DeltaBuild build_delta(const Graph& g, int k, DeltaForm form = DeltaForm::Reduced) {
  require(k >= 2, "build_delta: k must be >= 2");
  DeltaBuild out;
  out.form = form;
  out.family = IndexedFamily::independent_sets(g, k);
  out.q_family = IndexedFamily::independent_sets(g, k - 2);
  const int n = g.vertex_count();

  ConicProgram& p = out.program;
  p.sense = ConicProgram::Sense::Maximize;
  p.blocks.push_back({BlockKind::Diagonal, static_cast<int>(out.family->size())});
  for (std::int64_t qi = 0; qi < out.q_family->size(); ++qi) {
    VertexSet q = out.q_family->set_at(qi);
    std::vector<int> members{0};
    for (int x = 0; x < n; ++x) {
      if (form == DeltaForm::Full || g.is_independent(q.with(x))) members.push_back(1 + x);
    }
    out.qblocks.push_back({qi, q, static_cast<int>(p.blocks.size()), std::move(members)});
    p.blocks.push_back({BlockKind::Psd, static_cast<int>(out.qblocks.back().members.size())});
  }
  const std::size_t nblocks = p.blocks.size();
  p.objective.assign(nblocks, {});
  for (std::int64_t i = 0; i < out.family->size(); ++i)
    if (out.family->set_at(i).size() == 1)
      p.objective[0].push_back({static_cast<int>(i), static_cast<int>(i), Rational(1)});

  // nu(empty) = 1; the empty set is index 0 by the canonical order.
  {
    ConicProgram::Constraint con;
    con.coeff.assign(nblocks, {});
    con.coeff[0].push_back({0, 0, Rational(1)});
    con.rhs = 1;
    p.constraints.push_back(std::move(con));
  }
  for (const auto& qb : out.qblocks) {
    for (std::size_t a = 0; a < qb.members.size(); ++a) {
      for (std::size_t b = a; b < qb.members.size(); ++b) {
        VertexSet u = out.family->i1_set(qb.members[a])
                          .unite(out.family->i1_set(qb.members[b]))
                          .unite(qb.q);
        ConicProgram::Constraint con;
        con.coeff.assign(nblocks, {});
        Rational w = a == b ? Rational(1) : Rational(1, 2);
        con.coeff[static_cast<std::size_t>(qb.block_index)].push_back(
            {static_cast<int>(a), static_cast<int>(b), w});
        if (g.is_independent(u)) {
          con.coeff[0].push_back(
              {static_cast<int>(out.family->index_of_set(u)),
               static_cast<int>(out.family->index_of_set(u)), Rational(-1)});
        }
        con.rhs = 0;
        p.constraints.push_back(std::move(con));
      }
    }
  }
  p.validate();
  return out;
}

// The slice of the split adjoint at base Q, over the full I_1 index set.
inline Eigen::MatrixXd delta_slice(const Graph& g, const MeasureVector<double>& nu,
                                   VertexSet q) {
  const auto& fam = nu.family;
  int l = fam->i1_size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(l, l);
  for (int a = 0; a < l; ++a)
    for (int b = a; b < l; ++b) {
      VertexSet u = fam->i1_set(a).unite(fam->i1_set(b)).unite(q);
      if (g.is_independent(u)) {
        double v = nu.values[static_cast<std::size_t>(fam->index_of_set(u))];
        m(a, b) = m(b, a) = v;
      }
    }
  return m;
}

inline RationalMatrix delta_slice_exact(const Graph& g, const MeasureVector<Rational>& nu,
                                        VertexSet q) {
  const auto& fam = nu.family;
  int l = fam->i1_size();
  RationalMatrix m(l);
  for (int a = 0; a < l; ++a)
    for (int b = a; b < l; ++b) {
      VertexSet u = fam->i1_set(a).unite(fam->i1_set(b)).unite(q);
      if (g.is_independent(u)) {
        m(a, b) = nu.values[static_cast<std::size_t>(fam->index_of_set(u))];
        m(b, a) = m(a, b);
      }
    }
  return m;
}

inline CheckSet verify_delta_feasible(const Graph& g, int k, const MeasureVector<double>& nu,
                                      double tol) {
  require(nu.family->kind() == FamilyKind::IndependentSets && nu.family->arity() == k,
          "verify_delta_feasible: measure family mismatch");
  CheckSet out;
  double minnu = nu.values.empty() ? 0 : *std::min_element(nu.values.begin(), nu.values.end());
  out.check_le("nu nonnegativity (-min entry)", -minnu, 0, tol);
  out.check_eq("nu(empty) normalization", nu.values[0], 1.0, tol);
  auto qfam = IndexedFamily::independent_sets(g, k - 2);
  for (std::int64_t qi = 0; qi < qfam->size(); ++qi) {
    VertexSet q = qfam->set_at(qi);
    Eigen::MatrixXd slice = delta_slice(g, nu, q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slice, Eigen::EigenvaluesOnly);
    double mineig = es.eigenvalues().minCoeff();
    out.check_le("slice " + q.str() + " min eigenvalue (-)", -mineig, 0,
                 tol * (1 + slice.norm()));
  }
  return out;
}

inline CheckSet verify_delta_feasible_exact(const Graph& g, int k,
                                            const MeasureVector<Rational>& nu) {
  require(nu.family->kind() == FamilyKind::IndependentSets && nu.family->arity() == k,
          "verify_delta_feasible_exact: measure family mismatch");
  CheckSet out;
  Rational minnu = nu.values.empty() ? Rational(0)
                                     : *std::min_element(nu.values.begin(), nu.values.end());
  out.check_le_exact("nu nonnegativity (-min entry)", -minnu, 0, 0);
  out.check_eq_exact("nu(empty) normalization", nu.values[0], 1, 0);
  auto qfam = IndexedFamily::independent_sets(g, k - 2);
  for (std::int64_t qi = 0; qi < qfam->size(); ++qi) {
    VertexSet q = qfam->set_at(qi);
    out.check_true("slice " + q.str() + " PSD (exact)",
                   exact_psd(delta_slice_exact(g, nu, q)));
  }
  return out;
}

// nu = sum of Dirac measures at the independent subsets of I of size <= k.
inline MeasureVector<Rational> dirac_solution(const Graph& g, VertexSet i, int k) {
  require(g.is_independent(i), "dirac_solution: the base set must be independent");
  auto fam = IndexedFamily::independent_sets(g, k);
  auto nu = MeasureVector<Rational>::zero(fam);
  for (std::int64_t idx = 0; idx < fam->size(); ++idx)
    if (fam->set_at(idx).subset_of(i)) nu.values[static_cast<std::size_t>(idx)] = 1;
  return nu;
}

// A returned point is usable when its recomputed residuals sit within the
// feasibility tolerance, even if the solver stopped at its accuracy floor
// just short of the Optimal target; the status is preserved either way.
inline bool point_usable(const Solution& s) {
  return s.status == SolveStatus::Optimal ||
         ((s.status == SolveStatus::IterationLimit ||
           s.status == SolveStatus::NumericalTrouble) &&
          s.residuals.relative_gap <= kFeasTol &&
          s.residuals.primal_infeasibility <= kFeasTol &&
          s.residuals.dual_infeasibility <= kFeasTol);
}

inline BoundResult solve_delta(const Graph& g, int k, const SolveOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  DeltaBuild build = build_delta(g, k, DeltaForm::Reduced);
  Solution s = solve_conic(build.program, opts);
  BoundResult out;
  out.name = "delta(k=" + std::to_string(k) + ")";
  out.status = s.status;
  out.residuals = s.residuals;
  out.iterations = s.iterations;
  out.witness = MeasureVector<double>{build.family, {}};
  if (point_usable(s)) {
    out.value = s.primal_objective;
    out.witness.values.assign(s.X[0].diag.data(), s.X[0].diag.data() + s.X[0].diag.size());
    out.verification = verify_delta_feasible(g, k, out.witness, kFeasTol);
  } else if (s.status == SolveStatus::Unbounded) {
    out.value = std::numeric_limits<double>::infinity();
  }
  out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---------------------------------------------------------------------------
// Xi builds

enum class XiRowForm { Multiset, Tuple };

struct XiDualBuild {
  ConicProgram program;
  int n = 0, r = 0;
  std::vector<std::pair<int, int>> edges, nonedges;
  FamilyPtr row_family;  // multisets (or tuples) of size r+2
  // Variable offsets inside the single diagonal block.
  int off_lambda = 0, off_d = 0, off_u = 0, off_e = 0, off_s = 0, off_t = 0;
};

inline XiDualBuild build_xi_dual(const Graph& g, int r, XiRowForm form = XiRowForm::Multiset) {
  require(r >= 0, "build_xi_dual: r must be >= 0");
  XiDualBuild out;
  out.n = g.vertex_count();
  out.r = r;
  out.edges = g.edges();
  out.nonedges = g.non_edges();
  const int n = out.n;
  out.row_family = form == XiRowForm::Multiset ? IndexedFamily::multisets(n, r + 2)
                                               : IndexedFamily::tuples(n, r + 2);
  const std::int64_t rows = out.row_family->size();

  out.off_lambda = 0;
  out.off_d = 1;
  out.off_u = out.off_d + n;
  out.off_e = out.off_u + static_cast<int>(out.nonedges.size());
  out.off_s = out.off_e + static_cast<int>(out.edges.size());
  out.off_t = out.off_s + n;
  const int nvars = out.off_t + static_cast<int>(rows);

  auto pair_pos = [&](const std::vector<std::pair<int, int>>& list, int x, int y) {
    auto it = std::find(list.begin(), list.end(),
                        std::make_pair(std::min(x, y), std::max(x, y)));
    return static_cast<int>(it - list.begin());
  };

  ConicProgram& p = out.program;
  p.sense = ConicProgram::Sense::Minimize;
  p.blocks.push_back({BlockKind::Diagonal, nvars});
  p.objective.assign(1, {});
  p.objective[0].push_back({out.off_lambda, out.off_lambda, Rational(1)});

  // Diagonal bounds: d_x - lambda + s_x = -1  (i.e. Z(x,x) <= lambda - 1).
  for (int x = 0; x < n; ++x) {
    ConicProgram::Constraint con;
    con.coeff.assign(1, {});
    con.coeff[0].push_back({out.off_d + x, out.off_d + x, Rational(1)});
    con.coeff[0].push_back({out.off_lambda, out.off_lambda, Rational(-1)});
    con.coeff[0].push_back({out.off_s + x, out.off_s + x, Rational(1)});
    con.rhs = -1;
    p.constraints.push_back(std::move(con));
  }
  // Symmetrized rows, one per multiset (or per tuple, for the equivalence
  // tests): with Z = diag d, -1-u on nonedges and e on edges,
  //   sum_v m_v(m_v-1) d_v + sum_E 2 m_v m_w e - sum_NE 2 m_v m_w u - t
  //     = sum_NE 2 m_v m_w.
  std::vector<int> counts(static_cast<std::size_t>(n));
  for (std::int64_t mi = 0; mi < rows; ++mi) {
    if (form == XiRowForm::Multiset) {
      counts = out.row_family->multiset_counts_at(mi);
    } else {
      std::fill(counts.begin(), counts.end(), 0);
      for (int v : out.row_family->tuple_at(mi)) ++counts[static_cast<std::size_t>(v)];
    }
    ConicProgram::Constraint con;
    con.coeff.assign(1, {});
    Rational rhs = 0;
    for (int v = 0; v < n; ++v) {
      if (counts[static_cast<std::size_t>(v)] >= 2)
        con.coeff[0].push_back({out.off_d + v, out.off_d + v,
                                Rational(counts[static_cast<std::size_t>(v)]) *
                                    (counts[static_cast<std::size_t>(v)] - 1)});
      for (int w = v + 1; w < n; ++w) {
        long prod = 2L * counts[static_cast<std::size_t>(v)] * counts[static_cast<std::size_t>(w)];
        if (prod == 0) continue;
        if (g.has_edge(v, w)) {
          int idx = out.off_e + pair_pos(out.edges, v, w);
          con.coeff[0].push_back({idx, idx, Rational(prod)});
        } else {
          int idx = out.off_u + pair_pos(out.nonedges, v, w);
          con.coeff[0].push_back({idx, idx, Rational(-prod)});
          rhs += prod;
        }
      }
    }
    int tidx = out.off_t + static_cast<int>(mi);
    con.coeff[0].push_back({tidx, tidx, Rational(-1)});
    con.rhs = rhs;
    p.constraints.push_back(std::move(con));
  }
  p.validate();
  return out;
}

inline Eigen::MatrixXd xi_dual_kernel(const XiDualBuild& b, const std::vector<double>& x) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(b.n, b.n);
  for (int v = 0; v < b.n; ++v) z(v, v) = x[static_cast<std::size_t>(b.off_d + v)];
  for (std::size_t i = 0; i < b.nonedges.size(); ++i) {
    auto [v, w] = b.nonedges[i];
    z(v, w) = z(w, v) = -1.0 - x[static_cast<std::size_t>(b.off_u) + i];
  }
  for (std::size_t i = 0; i < b.edges.size(); ++i) {
    auto [v, w] = b.edges[i];
    z(v, w) = z(w, v) = x[static_cast<std::size_t>(b.off_e) + i];
  }
  return z;
}

struct XiPrimalBuild {
  ConicProgram program;
  int n = 0, r = 0;
  FamilyPtr multisets;
  std::vector<std::pair<int, int>> edges;
};

inline XiPrimalBuild build_xi_primal(const Graph& g, int r) {
  require(r >= 0, "build_xi_primal: r must be >= 0");
  XiPrimalBuild out;
  out.n = g.vertex_count();
  out.r = r;
  out.multisets = IndexedFamily::multisets(out.n, r + 2);
  out.edges = g.edges();
  const std::int64_t m = out.multisets->size();

  ConicProgram& p = out.program;
  p.sense = ConicProgram::Sense::Maximize;
  p.blocks.push_back({BlockKind::Diagonal, static_cast<int>(m)});
  p.objective.assign(1, {});
  // alpha(V^2) = total beta mass, since each multiset spreads exactly one
  // unit over the ordered pairs.
  for (std::int64_t mi = 0; mi < m; ++mi)
    p.objective[0].push_back({static_cast<int>(mi), static_cast<int>(mi), Rational(1)});

  const long scale = static_cast<long>(r + 2) * (r + 1);
  ConicProgram::Constraint diag;
  diag.coeff.assign(1, {});
  std::vector<ConicProgram::Constraint> edge_rows(out.edges.size());
  for (auto& con : edge_rows) con.coeff.assign(1, {});
  for (std::int64_t mi = 0; mi < m; ++mi) {
    auto counts = out.multisets->multiset_counts_at(mi);
    long dmass = 0;
    for (int v = 0; v < out.n; ++v)
      dmass += static_cast<long>(counts[static_cast<std::size_t>(v)]) * (counts[static_cast<std::size_t>(v)] - 1);
    if (dmass != 0)
      diag.coeff[0].push_back({static_cast<int>(mi), static_cast<int>(mi), Rational(dmass)});
    for (std::size_t ei = 0; ei < out.edges.size(); ++ei) {
      auto [v, w] = out.edges[ei];
      long prod = static_cast<long>(counts[static_cast<std::size_t>(v)]) * counts[static_cast<std::size_t>(w)];
      if (prod != 0)
        edge_rows[ei].coeff[0].push_back({static_cast<int>(mi), static_cast<int>(mi), Rational(prod)});
    }
  }
  diag.rhs = scale;  // alpha(diagonal) = 1
  p.constraints.push_back(std::move(diag));
  for (auto& con : edge_rows) {
    con.rhs = 0;  // alpha vanishes on every edge
    p.constraints.push_back(std::move(con));
  }
  p.validate();
  return out;
}

// Two-point matrix of a multiset measure: alpha(x,y) is the ordered-pair mass
// m_x m_y b_m / ((r+2)(r+1)), diagonal m_x(m_x - 1) b_m / ((r+2)(r+1)).
inline RationalMatrix two_point_from_beta(const MeasureVector<Rational>& beta, int n, int r) {
  RationalMatrix alpha(n);
  const Rational scale(1, static_cast<long>(r + 2) * (r + 1));
  for (std::int64_t mi = 0; mi < beta.size(); ++mi) {
    if (beta[mi] == 0) continue;
    auto counts = beta.family->multiset_counts_at(mi);
    for (int v = 0; v < n; ++v) {
      if (counts[static_cast<std::size_t>(v)] == 0) continue;
      if (counts[static_cast<std::size_t>(v)] >= 2)
        alpha(v, v) += beta[mi] * counts[static_cast<std::size_t>(v)] *
                       (counts[static_cast<std::size_t>(v)] - 1) * scale;
      for (int w = 0; w < n; ++w)
        if (w != v && counts[static_cast<std::size_t>(w)] > 0)
          alpha(v, w) += beta[mi] * counts[static_cast<std::size_t>(v)] *
                         counts[static_cast<std::size_t>(w)] * scale;
    }
  }
  return alpha;
}

inline CheckSet verify_xi_dual_feasible(const Graph& g, int r, double lambda,
                                        const Eigen::MatrixXd& z, double tol) {
  CheckSet out;
  double worst_diag = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < g.vertex_count(); ++x)
    worst_diag = std::max(worst_diag, z(x, x) - (lambda - 1));
  out.check_le("diagonal bound Z(x,x) <= lambda-1", worst_diag, 0, tol);
  double worst_ne = -std::numeric_limits<double>::infinity();
  for (auto [x, y] : g.non_edges()) worst_ne = std::max(worst_ne, z(x, y) + 1);
  if (!g.non_edges().empty())
    out.check_le("non-edge bound Z(x,y) <= -1", worst_ne, 0, tol);
  auto ms = IndexedFamily::multisets(g.vertex_count(), r + 2);
  double min_row = std::numeric_limits<double>::infinity();
  for (std::int64_t mi = 0; mi < ms->size(); ++mi) {
    auto counts = ms->multiset_counts_at(mi);
    double sum = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      sum += z(v, v) * counts[static_cast<std::size_t>(v)] * (counts[static_cast<std::size_t>(v)] - 1);
      for (int w = v + 1; w < g.vertex_count(); ++w)
        sum += 2.0 * z(v, w) * counts[static_cast<std::size_t>(v)] * counts[static_cast<std::size_t>(w)];
    }
    min_row = std::min(min_row, sum);
  }
  double scale = 1 + z.cwiseAbs().maxCoeff() * (r + 2) * (r + 1);
  out.check_le("symmetrized rows nonnegative (-min row)", -min_row, 0, tol * scale);
  return out;
}

namespace hierarchy_detail {

inline std::int64_t tableau_cells(const ConicProgram& p) {
  std::int64_t m = static_cast<std::int64_t>(p.constraints.size());
  return m * (m + p.variable_count());
}

inline constexpr int kExactRowCap = 100;
inline constexpr std::int64_t kExactCellCap = 8000000;

}  // namespace hierarchy_detail

inline BoundResult solve_xi_dual(const Graph& g, int r, const SolveOptions& opts = {},
                                 LpEngine engine = LpEngine::Auto) {
  auto t0 = std::chrono::steady_clock::now();
  XiDualBuild build = build_xi_dual(g, r);
  BoundResult out;
  out.name = "xi-dual(r=" + std::to_string(r) + ")";
  const double inf = std::numeric_limits<double>::infinity();

  bool use_exact = engine == LpEngine::ExactSimplex ||
                   (engine == LpEngine::Auto &&
                    static_cast<int>(build.program.constraints.size()) <=
                        hierarchy_detail::kExactRowCap);
  auto finish_exact = [&](const RationalSolution& rs) {
    out.status = rs.status;
    if (rs.status == SolveStatus::Optimal) {
      out.exact_value = rs.objective;
      out.value = to_double(rs.objective);
      std::vector<double> x;
      x.reserve(rs.x.size());
      for (const auto& v : rs.x) x.push_back(to_double(v));
      out.lambda = x[0];
      out.kernel = xi_dual_kernel(build, x);
      out.verification = verify_xi_dual_feasible(g, r, *out.lambda, out.kernel, kFeasTol);
    } else if (rs.status == SolveStatus::Infeasible) {
      out.value = inf;  // minimization: empty feasible set reports +inf
    } else if (rs.status == SolveStatus::Unbounded) {
      out.value = -inf;
    }
  };

  if (use_exact) {
    finish_exact(solve_lp_exact(build.program));
  } else {
    Solution s = solve_conic(build.program, opts);
    out.residuals = s.residuals;
    out.iterations = s.iterations;
    if (point_usable(s)) {
      out.status = s.status;
      out.value = s.primal_objective;
      std::vector<double> x(s.X[0].diag.data(), s.X[0].diag.data() + s.X[0].diag.size());
      out.lambda = x[0];
      out.kernel = xi_dual_kernel(build, x);
      out.verification = verify_xi_dual_feasible(g, r, *out.lambda, out.kernel, kFeasTol);
    } else if (hierarchy_detail::tableau_cells(build.program) <=
               hierarchy_detail::kExactCellCap) {
      // Non-optimal floating outcomes are confirmed exactly.
      finish_exact(solve_lp_exact(build.program));
    } else {
      out.status = s.status;
      if (s.status == SolveStatus::Infeasible) out.value = inf;
    }
  }
  out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline BoundResult solve_xi_primal(const Graph& g, int r, const SolveOptions& opts = {},
                                   LpEngine engine = LpEngine::Auto) {
  auto t0 = std::chrono::steady_clock::now();
  XiPrimalBuild build = build_xi_primal(g, r);
  BoundResult out;
  out.name = "xi-primal(r=" + std::to_string(r) + ")";
  const double inf = std::numeric_limits<double>::infinity();

  bool use_exact = engine != LpEngine::Ipm &&
                   hierarchy_detail::tableau_cells(build.program) <=
                       hierarchy_detail::kExactCellCap;
  auto attach_witness = [&](MeasureVector<Rational> beta) {
    RationalMatrix alpha = two_point_from_beta(beta, build.n, r);
    out.kernel = Eigen::MatrixXd(build.n, build.n);
    for (int i = 0; i < build.n; ++i)
      for (int j = 0; j < build.n; ++j) out.kernel(i, j) = to_double(alpha(i, j));
    out.witness = to_double(beta);
    CheckSet v;
    v.check_le_exact("beta nonnegativity (-min entry)",
                     -(*std::min_element(beta.values.begin(), beta.values.end())), 0, 0);
    v.check_eq_exact("alpha diagonal mass", alpha.trace(), 1,
                     exact_rational(kFeasTol));
    Rational worst_edge = 0;
    for (auto [x, y] : build.edges) worst_edge = std::max(worst_edge, Rational(abs(alpha(x, y))));
    v.check_le_exact("alpha vanishes on edges", worst_edge, 0, exact_rational(kFeasTol));
    out.verification = v;
  };

  if (use_exact) {
    RationalSolution rs = solve_lp_exact(build.program);
    out.status = rs.status;
    if (rs.status == SolveStatus::Optimal) {
      out.exact_value = rs.objective;
      out.value = to_double(rs.objective);
      attach_witness(MeasureVector<Rational>{build.multisets, rs.x});
    } else if (rs.status == SolveStatus::Unbounded) {
      out.value = inf;  // maximization: improving rays report +inf
    } else if (rs.status == SolveStatus::Infeasible) {
      out.value = -inf;
    }
  } else {
    Solution s = solve_conic(build.program, opts);
    out.residuals = s.residuals;
    out.iterations = s.iterations;
    out.status = s.status;
    if (s.status == SolveStatus::Optimal) {
      out.value = s.primal_objective;
      MeasureVector<double> beta{build.multisets,
                                 std::vector<double>(s.X[0].diag.data(),
                                                     s.X[0].diag.data() + s.X[0].diag.size())};
      attach_witness(to_rational(beta));
    } else if (s.status == SolveStatus::Unbounded) {
      out.value = inf;
    }
  }
  out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
  std::string kind;  // alpha | delta | xi-dual | xi-primal
  int param = 0;     // k or r (0 for alpha)
  double value = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::Optimal;
  double runtime_sec = 0;
};

struct SweepResult {
  int alpha = 0;
  std::vector<SweepRow> rows;
  CheckSet flags;
};

inline SweepResult hierarchy_sweep(const Graph& g, int kmax, int rmax,
                                   const SolveOptions& opts = {}, int jobs = 1) {
  require(kmax >= 2, "hierarchy_sweep: kmax must be >= 2");
  require(rmax >= 0, "hierarchy_sweep: rmax must be >= 0");
  SweepResult out;
  out.alpha = alpha_exact(g);

  struct Cell {
    std::string kind;
    int param;
  };
  std::vector<Cell> cells;
  for (int k = 2; k <= kmax; ++k) cells.push_back({"delta", k});
  for (int r = 0; r <= rmax; ++r) cells.push_back({"xi-dual", r});
  for (int r = 0; r <= rmax; ++r) cells.push_back({"xi-primal", r});

  std::vector<SweepRow> rows(cells.size());
  std::counting_semaphore<64> slots(std::max(1, std::min(jobs, 64)));
  std::vector<std::future<void>> futures;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      slots.acquire();
      const Cell& c = cells[i];
      BoundResult r = c.kind == "delta"     ? solve_delta(g, c.param, opts)
                      : c.kind == "xi-dual" ? solve_xi_dual(g, c.param, opts)
                                            : solve_xi_primal(g, c.param, opts);
      rows[i] = {c.kind, c.param, r.value, r.status, r.runtime_sec};
      slots.release();
    }));
  }
  for (auto& f : futures) f.get();

  out.rows.push_back({"alpha", 0, static_cast<double>(out.alpha), SolveStatus::Optimal, 0});
  out.rows.insert(out.rows.end(), rows.begin(), rows.end());

  auto value_of = [&](const std::string& kind, int param) -> double {
    for (const auto& row : out.rows)
      if (row.kind == kind && row.param == param) return row.value;
    return std::numeric_limits<double>::quiet_NaN();
  };
  // Monotonicity along each hierarchy and the sandwich across them.
  for (int k = 2; k < kmax; ++k)
    out.flags.check_le("delta monotone k=" + std::to_string(k) + "->" + std::to_string(k + 1),
                       value_of("delta", k + 1), value_of("delta", k), 1e-6);
  for (int r = 0; r < rmax; ++r) {
    double a = value_of("xi-dual", r), b = value_of("xi-dual", r + 1);
    if (std::isinf(a) && a > 0) continue;  // +inf dominates everything after it
    out.flags.check_le("xi-dual monotone r=" + std::to_string(r) + "->" + std::to_string(r + 1),
                       b, a, 1e-6);
  }
  for (int r = 0; r <= std::min(rmax, kmax - 2); ++r) {
    double dk = value_of("delta", r + 2);
    double xp = value_of("xi-primal", r), xd = value_of("xi-dual", r);
    out.flags.check_le("alpha <= delta(k=" + std::to_string(r + 2) + ")",
                       static_cast<double>(out.alpha), dk, 1e-5);
    if (!std::isinf(xp))
      out.flags.check_le("delta(k=" + std::to_string(r + 2) + ") <= xi(r=" + std::to_string(r) + ")",
                         dk, xp, 1e-5);
    if (!std::isinf(xd))
      out.flags.check_le("xi(r=" + std::to_string(r) + ") <= xi*(r=" + std::to_string(r) + ")",
                         xp, xd, 1e-5);
  }
  return out;
}

}  // namespace kpb
