#pragma once

// Inner-cone copositivity certificates.  A symmetric kernel Z lies in the
// level-r cone when every multiset m of size r+2 over the vertices satisfies
//
//   sum_v m_v(m_v-1) Z(v,v) + sum_{v != w} m_v m_w Z(v,w) >= 0,
//
// equivalently all symmetrized (r+2)-point averages of Z are nonnegative.
// Membership scans run over multisets; certificates can be re-validated by
// enumerating raw tuples, which exercises an independent route to the same
// sums.  The interior kernel Z0 is assembled from a PSD kernel F <= -1 off
// the edges (found by a small SDP) mixed with the all-ones kernel.

#include <kpb/conic.hpp>
#include <kpb/graph.hpp>
#include <kpb/ipm.hpp>
#include <kpb/measure.hpp>
#include <kpb/report.hpp>

#include <Eigen/Dense>
#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

namespace kpb {

enum class CertMode { Exact, Float };

struct CopositivityCertificate {
  int r = 0;
  CertMode mode = CertMode::Float;
  bool member = false;
  std::vector<int> worst_multiset;  // sorted tuple attaining the minimal sum
  double worst_sum = 0;
  Rational worst_sum_exact = 0;  // meaningful in exact mode
  double tolerance = 0;          // float mode: member means every sum >= -tolerance
};

inline nlohmann::json to_json(const CopositivityCertificate& c) {
  return {{"level", c.r},
          {"mode", c.mode == CertMode::Exact ? "exact" : "float"},
          {"member", c.member},
          {"worst_multiset", c.worst_multiset},
          {"worst_sum", c.worst_sum},
          {"worst_sum_exact", to_string(c.worst_sum_exact)},
          {"tolerance", c.tolerance}};
}

namespace cop_detail {

// Lexicographic enumeration of nondecreasing tuples of length m over [0,n).
template <class F>
void for_each_multiset(int n, int m, F&& fn) {
  std::vector<int> c(static_cast<std::size_t>(m), 0);
  if (m == 0) {
    fn(c);
    return;
  }
  while (true) {
    fn(c);
    int i = m - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - 1) --i;
    if (i < 0) break;
    int v = ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) c[static_cast<std::size_t>(j)] = v;
  }
}

template <class Scalar, class Matrix>
Scalar multiset_sum(const Matrix& z, const std::vector<int>& tuple) {
  Scalar total(0);
  for (std::size_t i = 0; i < tuple.size(); ++i)
    for (std::size_t j = 0; j < tuple.size(); ++j)
      if (i != j) total += Scalar(z(tuple[i], tuple[j]));
  return total;
}

}  // namespace cop_detail

inline RationalMatrix rationalize_kernel(const Eigen::MatrixXd& z,
                                         std::int64_t denominator = 1000000) {
  RationalMatrix out(static_cast<int>(z.rows()));
  for (int i = 0; i < z.rows(); ++i)
    for (int j = i; j < z.cols(); ++j) {
      out(i, j) = rationalize(0.5 * (z(i, j) + z(j, i)), denominator);
      out(j, i) = out(i, j);
    }
  return out;
}

inline CopositivityCertificate cr_membership(const RationalMatrix& z, int r) {
  require(r >= 0, "cr_membership: r must be >= 0");
  int n = z.size();
  require(binomial(n + r + 1, r + 2) <= Int(kMaxTupleSpace),
          "cr_membership: multiset space exceeds the enumeration cap");
  CopositivityCertificate out;
  out.r = r;
  out.mode = CertMode::Exact;
  bool first = true;
  Rational worst = 0;
  std::vector<int> worst_tuple;
  cop_detail::for_each_multiset(n, r + 2, [&](const std::vector<int>& c) {
    Rational s = cop_detail::multiset_sum<Rational>(z, c);
    if (first || s < worst) {
      first = false;
      worst = s;
      worst_tuple = c;
    }
  });
  out.worst_sum_exact = worst;
  out.worst_sum = to_double(worst);
  out.worst_multiset = worst_tuple;
  out.member = worst >= 0;
  return out;
}

inline CopositivityCertificate cr_membership(const Eigen::MatrixXd& z, int r,
                                             CertMode mode = CertMode::Float,
                                             double tol = 1e-9) {
  if (mode == CertMode::Exact) {
    CopositivityCertificate out = cr_membership(rationalize_kernel(z), r);
    return out;
  }
  require(r >= 0, "cr_membership: r must be >= 0");
  int n = static_cast<int>(z.rows());
  require(binomial(n + r + 1, r + 2) <= Int(kMaxTupleSpace),
          "cr_membership: multiset space exceeds the enumeration cap");
  CopositivityCertificate out;
  out.r = r;
  out.mode = CertMode::Float;
  out.tolerance = tol;
  bool first = true;
  double worst = 0;
  std::vector<int> worst_tuple;
  cop_detail::for_each_multiset(n, r + 2, [&](const std::vector<int>& c) {
    double s = cop_detail::multiset_sum<double>(z, c);
    if (first || s < worst) {
      first = false;
      worst = s;
      worst_tuple = c;
    }
  });
  out.worst_sum = worst;
  out.worst_multiset = worst_tuple;
  out.member = worst >= -tol;
  return out;
}

// Independent route to the same verdict: enumerate every raw tuple instead of
// collapsed multisets.
inline bool revalidate_by_tuples(const Eigen::MatrixXd& z, int r, double tol = 1e-9) {
  int n = static_cast<int>(z.rows());
  std::int64_t space = 1;
  for (int i = 0; i < r + 2; ++i) {
    space *= n;
    require(space <= kMaxTupleSpace, "revalidate_by_tuples: tuple space exceeds the cap");
  }
  std::vector<int> tup(static_cast<std::size_t>(r + 2), 0);
  while (true) {
    double s = cop_detail::multiset_sum<double>(z, tup);
    if (s < -tol) return false;
    int pos = r + 1;
    while (pos >= 0 && tup[static_cast<std::size_t>(pos)] == n - 1) {
      tup[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++tup[static_cast<std::size_t>(pos)];
  }
  return true;
}

inline bool revalidate_by_tuples_exact(const RationalMatrix& z, int r) {
  int n = z.size();
  std::int64_t space = 1;
  for (int i = 0; i < r + 2; ++i) {
    space *= n;
    require(space <= kMaxTupleSpace, "revalidate_by_tuples_exact: tuple space exceeds the cap");
  }
  std::vector<int> tup(static_cast<std::size_t>(r + 2), 0);
  while (true) {
    if (cop_detail::multiset_sum<Rational>(z, tup) < 0) return false;
    int pos = r + 1;
    while (pos >= 0 && tup[static_cast<std::size_t>(pos)] == n - 1) {
      tup[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++tup[static_cast<std::size_t>(pos)];
  }
  return true;
}

struct MinRResult {
  bool found = false;
  int r = -1;
  int rcap = 0;
  CopositivityCertificate certificate;
};

inline nlohmann::json to_json(const MinRResult& m) {
  nlohmann::json out = {{"found", m.found}, {"rcap", m.rcap}};
  if (m.found) {
    out["level"] = m.r;
    out["certificate"] = to_json(m.certificate);
  }
  return out;
}

// Smallest level at or below rcap containing Z.  Levels are nested (a
// multiset sum of size r+3 is a positive combination of size-(r+2) sums over
// its sub-multisets), so membership at the next level is verified as a
// consistency assertion whenever a level is found.
inline MinRResult min_r(const Eigen::MatrixXd& z, int rcap, CertMode mode = CertMode::Float,
                        double tol = 1e-9) {
  MinRResult out;
  out.rcap = rcap;
  for (int r = 0; r <= rcap; ++r) {
    CopositivityCertificate cert = cr_membership(z, r, mode, tol);
    if (cert.member) {
      CopositivityCertificate next = cr_membership(z, r + 1, mode, tol);
      require(next.member, "min_r: nesting violated, membership lost at the next level");
      out.found = true;
      out.r = r;
      out.certificate = cert;
      return out;
    }
  }
  return out;
}

// PSD kernel with F <= -1 on non-edges, of minimal trace; the all-zero
// kernel when the graph is complete.
inline Eigen::MatrixXd find_F(const Graph& g, const SolveOptions& opts = {}) {
  const int n = g.vertex_count();
  auto nonedges = g.non_edges();
  if (nonedges.empty()) return Eigen::MatrixXd::Zero(n, n);

  ConicProgram p;
  p.sense = ConicProgram::Sense::Minimize;
  p.blocks = {{BlockKind::Psd, n}, {BlockKind::Diagonal, static_cast<int>(nonedges.size())}};
  p.objective.assign(2, {});
  for (int v = 0; v < n; ++v) p.objective[0].push_back({v, v, Rational(1)});
  for (std::size_t i = 0; i < nonedges.size(); ++i) {
    auto [x, y] = nonedges[i];
    ConicProgram::Constraint con;
    con.coeff.assign(2, {});
    con.coeff[0].push_back({x, y, Rational(1, 2)});
    con.coeff[1].push_back({static_cast<int>(i), static_cast<int>(i), Rational(1)});
    con.rhs = -1;
    p.constraints.push_back(std::move(con));
  }
  Solution s = solve_conic(p, opts);
  require(s.status == SolveStatus::Optimal, "find_F: SDP solve failed with status " + to_string(s.status));
  Eigen::MatrixXd f = s.X[0].dense;
  f = 0.5 * (f + f.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-7 * (1 + f.norm()),
          "find_F: returned kernel is not PSD within tolerance");
  for (auto [x, y] : nonedges)
    require(f(x, y) <= -1 + 1e-6, "find_F: non-edge bound violated");
  return f;
}

// Z0 = theta * J + (1-theta) * 2F: strictly inside the copositive cone and
// still <= -1 off the edges provided theta <= 1/3.
inline Eigen::MatrixXd build_Z0(const Eigen::MatrixXd& f, double theta, const Graph& g) {
  require(theta > 0 && theta <= 1.0 / 3.0 + 1e-15,
          "build_Z0: theta must lie in (0, 1/3] for the off-edge bound");
  const int n = g.vertex_count();
  require(f.rows() == n && f.cols() == n, "build_Z0: kernel size mismatch");
  Eigen::MatrixXd z0 = theta * Eigen::MatrixXd::Ones(n, n) + (1 - theta) * 2.0 * f;
  for (auto [x, y] : g.non_edges())
    require(z0(x, y) <= -1 + 1e-6, "build_Z0: non-edge entry above -1");
  return z0;
}

struct PerturbReport {
  double epsilon = 0;
  double lambda_mixed = 0;
  CheckSet checks;
  MinRResult search;
};

inline nlohmann::json to_json(const PerturbReport& p) {
  return {{"epsilon", p.epsilon},
          {"lambda_mixed", p.lambda_mixed},
          {"checks", to_json(p.checks)},
          {"search", to_json(p.search)}};
}

// Mixes a feasible kernel toward the interior point and reports the level at
// which the mixture certifies, along with the retained constraints.  eps = 0
// degenerates to a report on Z itself, where no finite level is guaranteed.
inline PerturbReport perturb_certify(const Graph& g, const Eigen::MatrixXd& z, double lambda,
                                     const Eigen::MatrixXd& z0, double lambda0, double eps,
                                     int rcap, CertMode mode = CertMode::Float,
                                     double tol = 1e-6) {
  require(eps >= 0 && eps <= 1, "perturb_certify: need 0 <= eps <= 1");
  PerturbReport out;
  out.epsilon = eps;
  Eigen::MatrixXd w = eps * z0 + (1 - eps) * z;
  out.lambda_mixed = eps * lambda0 + (1 - eps) * lambda;
  double worst_ne = -std::numeric_limits<double>::infinity();
  for (auto [x, y] : g.non_edges()) worst_ne = std::max(worst_ne, w(x, y) + 1);
  if (!g.non_edges().empty())
    out.checks.check_le("mixture non-edge bound W(x,y) <= -1", worst_ne, 0, tol);
  double worst_diag = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < g.vertex_count(); ++x)
    worst_diag = std::max(worst_diag, w(x, x) - (out.lambda_mixed - 1));
  out.checks.check_le("mixture diagonal bound W(x,x) <= lambda'-1", worst_diag, 0, tol);
  out.search = min_r(w, rcap, mode);
  return out;
}

}  // namespace kpb
