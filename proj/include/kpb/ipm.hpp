#pragma once

// Dense primal-dual path-following solver for the block conic programs in
// conic.hpp, in the maximize convention
//
//   (P) max <C,X>   s.t. <A_i,X> = b_i,  X >= 0 (block diagonal/PSD)
//   (D) min b'y     s.t. Z = sum_i y_i A_i - C >= 0.
//
// Infeasible start, HKM-style scaling with a Mehrotra predictor-corrector,
// dense Schur complement solved by Cholesky (assembled from its upper
// triangle, Jacobi-scaled, one step of iterative refinement).  Step lengths
// come from exact minimum-eigenvalue computations per block.  Near the
// floor of attainable accuracy a step that worsens the combined merit is
// retracted, the best iterate seen is tracked, and the loop stops once no
// progress is made; the returned status reflects the tolahieved tolerance
// honestly.  Divergence triggers Farkas-style certificate tests, re-verified
// at opts.cert_tol before Infeasible/Unbounded is reported.

#include <kpb/conic.hpp>
#include <kpb/rational.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace kpb {

struct SolveOptions {
  double tol = 1e-8;       // relative gap and residual target
  int max_iter = 200;
  double cert_tol = 1e-6;  // residual tolerance for infeasibility certificates
  bool verbose = false;
};

namespace ipm_detail {

struct FullEntry {
  int i, j;
  double v;
};

struct BlockEntries {
  int bl;
  std::vector<FullEntry> e;
};

using ConEntries = std::vector<BlockEntries>;

inline ConEntries expand(const std::vector<BlockCoeff>& coeff) {
  ConEntries out;
  for (std::size_t bl = 0; bl < coeff.size(); ++bl) {
    if (coeff[bl].empty()) continue;
    BlockEntries be;
    be.bl = static_cast<int>(bl);
    for (const auto& s : coeff[bl]) {
      double v = to_double(s.value);
      be.e.push_back({s.i, s.j, v});
      if (s.i != s.j) be.e.push_back({s.j, s.i, v});
    }
    out.push_back(std::move(be));
  }
  return out;
}

struct BlockState {
  BlockKind kind = BlockKind::Diagonal;
  int size = 0;
  // Psd blocks
  Eigen::MatrixXd X, Z, Zinv, Rd, dX, dZ, dXaff, dZaff, C;
  // Diagonal blocks
  Eigen::VectorXd xd, zd, zinvd, rdd, dxd, dzd, dxaffd, dzaffd, cd;
};

inline double entries_dot_mat(const std::vector<FullEntry>& e, const Eigen::MatrixXd& m,
                              bool transpose_index) {
  double total = 0;
  for (const auto& f : e) total += f.v * (transpose_index ? m(f.j, f.i) : m(f.i, f.j));
  return total;
}

inline double entries_dot_vec(const std::vector<FullEntry>& e, const Eigen::VectorXd& v) {
  double total = 0;
  for (const auto& f : e) total += f.v * v(f.i);  // diagonal blocks carry i == j only
  return total;
}

// Largest a with S + a*D staying in the cone; huge when D points inward.
inline double max_step(const BlockState& s, bool primal) {
  const double huge = 1e30;
  if (s.kind == BlockKind::Diagonal) {
    const Eigen::VectorXd& base = primal ? s.xd : s.zd;
    const Eigen::VectorXd& dir = primal ? s.dxd : s.dzd;
    double best = huge;
    for (int i = 0; i < base.size(); ++i)
      if (dir(i) < 0) best = std::min(best, -base(i) / dir(i));
    return best;
  }
  const Eigen::MatrixXd& base = primal ? s.X : s.Z;
  const Eigen::MatrixXd& dir = primal ? s.dX : s.dZ;
  Eigen::LLT<Eigen::MatrixXd> llt(base);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd g = l.triangularView<Eigen::Lower>().solve(dir);
  g = l.triangularView<Eigen::Lower>().solve(g.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()),
                                                    Eigen::EigenvaluesOnly);
  double lam = es.eigenvalues().minCoeff();
  if (lam >= -1e-14) return huge;
  return -1.0 / lam;
}

}  // namespace ipm_detail

inline Solution solve_conic(const ConicProgram& prog_in, const SolveOptions& opts = {}) {
  using namespace ipm_detail;
  prog_in.validate();
  require(!prog_in.constraints.empty(), "solve_conic: program has no constraints");
  const bool minimize = prog_in.sense == ConicProgram::Sense::Minimize;
  const ConicProgram prog = minimize ? prog_in.negated() : prog_in;

  const int m = static_cast<int>(prog.constraints.size());
  const int nblocks = static_cast<int>(prog.blocks.size());

  std::vector<ConEntries> acons(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    acons[static_cast<std::size_t>(i)] = expand(prog.constraints[static_cast<std::size_t>(i)].coeff);
  ConEntries cobj = expand(prog.objective);

  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b(i) = to_double(prog.constraints[static_cast<std::size_t>(i)].rhs);
  const double bmax = b.cwiseAbs().maxCoeff();

  double amax = 0, cmax = 0;
  for (const auto& con : acons)
    for (const auto& be : con)
      for (const auto& f : be.e) amax = std::max(amax, std::abs(f.v));
  for (const auto& be : cobj)
    for (const auto& f : be.e) cmax = std::max(cmax, std::abs(f.v));

  int total_dim = 0;
  for (const auto& blk : prog.blocks) total_dim += blk.size;

  std::vector<BlockState> st(static_cast<std::size_t>(nblocks));
  const double init_scale = 10.0 * std::max({1.0, bmax, cmax, amax});
  for (int bl = 0; bl < nblocks; ++bl) {
    auto& s = st[static_cast<std::size_t>(bl)];
    s.kind = prog.blocks[static_cast<std::size_t>(bl)].kind;
    s.size = prog.blocks[static_cast<std::size_t>(bl)].size;
    if (s.kind == BlockKind::Psd) {
      s.X = init_scale * Eigen::MatrixXd::Identity(s.size, s.size);
      s.Z = s.X;
      s.C = Eigen::MatrixXd::Zero(s.size, s.size);
    } else {
      s.xd = init_scale * Eigen::VectorXd::Ones(s.size);
      s.zd = s.xd;
      s.cd = Eigen::VectorXd::Zero(s.size);
    }
  }
  for (const auto& be : cobj) {
    auto& s = st[static_cast<std::size_t>(be.bl)];
    for (const auto& f : be.e) {
      if (s.kind == BlockKind::Psd)
        s.C(f.i, f.j) = f.v;
      else
        s.cd(f.i) = f.v;
    }
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  auto dense_from_y = [&](const Eigen::VectorXd& w, int bl) {
    auto& s = st[static_cast<std::size_t>(bl)];
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s.size, s.size);
    for (int i = 0; i < m; ++i) {
      if (w(i) == 0) continue;
      for (const auto& be : acons[static_cast<std::size_t>(i)])
        if (be.bl == bl)
          for (const auto& f : be.e) out(f.i, f.j) += w(i) * f.v;
    }
    return out;
  };
  auto diag_from_y = [&](const Eigen::VectorXd& w, int bl) {
    auto& s = st[static_cast<std::size_t>(bl)];
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.size);
    for (int i = 0; i < m; ++i) {
      if (w(i) == 0) continue;
      for (const auto& be : acons[static_cast<std::size_t>(i)])
        if (be.bl == bl)
          for (const auto& f : be.e) out(f.i) += w(i) * f.v;
    }
    return out;
  };

  struct Metrics {
    double pobj = 0, dobj = 0, relgap = 0, prinf = 0, duinf = 0;
    double merit() const { return std::max({relgap, prinf, duinf}); }
  };
  auto measure = [&]() {
    Metrics mt;
    Eigen::VectorXd ax(m);
    for (int i = 0; i < m; ++i) {
      double total = 0;
      for (const auto& be : acons[static_cast<std::size_t>(i)]) {
        const auto& s = st[static_cast<std::size_t>(be.bl)];
        total += s.kind == BlockKind::Psd ? entries_dot_mat(be.e, s.X, false)
                                          : entries_dot_vec(be.e, s.xd);
      }
      ax(i) = total;
    }
    mt.prinf = (b - ax).cwiseAbs().maxCoeff() / (1 + bmax);
    double dual_resid = 0;
    for (int bl = 0; bl < nblocks; ++bl) {
      auto& s = st[static_cast<std::size_t>(bl)];
      if (s.kind == BlockKind::Psd) {
        s.Rd = dense_from_y(y, bl) - s.Z - s.C;
        dual_resid = std::max(dual_resid, s.Rd.cwiseAbs().maxCoeff());
        mt.pobj += (s.C.array() * s.X.array()).sum();
      } else {
        s.rdd = diag_from_y(y, bl) - s.zd - s.cd;
        if (s.size > 0) dual_resid = std::max(dual_resid, s.rdd.cwiseAbs().maxCoeff());
        mt.pobj += s.cd.dot(s.xd);
      }
    }
    mt.duinf = dual_resid / (1 + cmax);
    mt.dobj = b.dot(y);
    mt.relgap = std::abs(mt.pobj - mt.dobj) /
                (1 + std::max(std::abs(mt.pobj), std::abs(mt.dobj)));
    return mt;
  };

  Solution sol;
  sol.status = SolveStatus::IterationLimit;

  auto try_primal_infeasibility = [&]() -> bool {
    double t = -b.dot(y);
    if (t <= 0) return false;
    Eigen::VectorXd yhat = y / t;  // b' yhat = -1
    double worst = 0, scale = 0;
    for (int bl = 0; bl < nblocks; ++bl) {
      const auto& s = st[static_cast<std::size_t>(bl)];
      if (s.kind == BlockKind::Psd) {
        Eigen::MatrixXd zray = dense_from_y(yhat, bl);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (zray + zray.transpose()),
                                                          Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff());
        scale = std::max(scale, zray.norm());
      } else {
        Eigen::VectorXd zray = diag_from_y(yhat, bl);
        if (zray.size() > 0) worst = std::min(worst, zray.minCoeff());
        scale = std::max(scale, zray.norm());
      }
    }
    if (worst >= -opts.cert_tol * (1 + scale)) {
      sol.status = SolveStatus::Infeasible;
      sol.y = minimize ? Eigen::VectorXd(-yhat) : yhat;
      return true;
    }
    return false;
  };

  auto try_dual_infeasibility = [&]() -> bool {
    double t = 0;
    for (int bl = 0; bl < nblocks; ++bl) {
      const auto& s = st[static_cast<std::size_t>(bl)];
      t += s.kind == BlockKind::Psd ? (s.C.array() * s.X.array()).sum() : s.cd.dot(s.xd);
    }
    if (t <= 0) return false;
    Eigen::VectorXd ax(m);
    for (int i = 0; i < m; ++i) {
      double total = 0;
      for (const auto& be : acons[static_cast<std::size_t>(i)]) {
        const auto& s = st[static_cast<std::size_t>(be.bl)];
        total += s.kind == BlockKind::Psd ? entries_dot_mat(be.e, s.X, false)
                                          : entries_dot_vec(be.e, s.xd);
      }
      ax(i) = total;
    }
    if ((ax / t).cwiseAbs().maxCoeff() <= opts.cert_tol * (1 + amax)) {
      sol.status = SolveStatus::Unbounded;
      return true;
    }
    return false;
  };

  // Best iterate seen, restored before returning.
  struct Snapshot {
    std::vector<Eigen::MatrixXd> X, Z;
    std::vector<Eigen::VectorXd> xd, zd;
    Eigen::VectorXd y;
    double merit = 1e300;
  } best;
  auto snapshot = [&]() {
    best.X.clear();
    best.Z.clear();
    best.xd.clear();
    best.zd.clear();
    for (const auto& s : st) {
      best.X.push_back(s.X);
      best.Z.push_back(s.Z);
      best.xd.push_back(s.xd);
      best.zd.push_back(s.zd);
    }
    best.y = y;
  };
  auto restore_best = [&]() {
    if (best.y.size() == 0) return;
    for (int bl = 0; bl < nblocks; ++bl) {
      auto& s = st[static_cast<std::size_t>(bl)];
      s.X = best.X[static_cast<std::size_t>(bl)];
      s.Z = best.Z[static_cast<std::size_t>(bl)];
      s.xd = best.xd[static_cast<std::size_t>(bl)];
      s.zd = best.zd[static_cast<std::size_t>(bl)];
    }
    y = best.y;
  };

  int iter = 0;
  bool trouble = false;
  int no_progress = 0;

  for (iter = 1; iter <= opts.max_iter; ++iter) {
    Metrics mt = measure();
    double gap = 0;
    for (const auto& s : st)
      gap += s.kind == BlockKind::Psd ? (s.X.array() * s.Z.array()).sum() : s.xd.dot(s.zd);
    double mu = gap / total_dim;

    if (opts.verbose)
      std::fprintf(stderr, "it %3d  pobj % .9e  dobj % .9e  gap %.2e  rp %.2e  rd %.2e\n",
                   iter, mt.pobj, mt.dobj, mt.relgap, mt.prinf, mt.duinf);

    if (mt.merit() < best.merit) {
      best.merit = mt.merit();
      snapshot();
      no_progress = 0;
    } else if (++no_progress >= 20) {
      break;  // accuracy floor reached; the best iterate is returned
    }

    if (mt.relgap <= opts.tol && mt.prinf <= opts.tol && mt.duinf <= opts.tol) {
      sol.status = SolveStatus::Optimal;
      break;
    }

    double ynorm = y.cwiseAbs().maxCoeff();
    double xnorm = 0;
    for (const auto& s : st)
      xnorm = std::max(xnorm, s.kind == BlockKind::Psd ? s.X.cwiseAbs().maxCoeff()
                                                       : s.xd.cwiseAbs().maxCoeff());
    const double diverge = 1e7 * std::max(1.0, init_scale);
    if (ynorm > diverge && try_primal_infeasibility()) break;
    if (xnorm > diverge && try_dual_infeasibility()) break;
    if (ynorm > 1e4 * diverge || xnorm > 1e4 * diverge) {
      trouble = true;
      break;
    }

    bool factor_ok = true;
    for (auto& s : st) {
      if (s.kind == BlockKind::Psd) {
        Eigen::LLT<Eigen::MatrixXd> llt(s.Z);
        if (llt.info() != Eigen::Success) {
          factor_ok = false;
          break;
        }
        s.Zinv = llt.solve(Eigen::MatrixXd::Identity(s.size, s.size));
      } else {
        s.zinvd = s.zd.cwiseInverse();
      }
    }
    if (!factor_ok) {
      trouble = true;
      break;
    }

    // Schur complement, upper triangle, then Jacobi-scaled Cholesky.
    Eigen::MatrixXd schur(m, m);
    for (int p = 0; p < m; ++p) {
      for (int q = p; q < m; ++q) {
        double total = 0;
        auto itp = acons[static_cast<std::size_t>(p)].begin();
        auto itq = acons[static_cast<std::size_t>(q)].begin();
        while (itp != acons[static_cast<std::size_t>(p)].end() &&
               itq != acons[static_cast<std::size_t>(q)].end()) {
          if (itp->bl < itq->bl) {
            ++itp;
          } else if (itq->bl < itp->bl) {
            ++itq;
          } else {
            const auto& s = st[static_cast<std::size_t>(itp->bl)];
            if (s.kind == BlockKind::Psd) {
              for (const auto& fp : itp->e)
                for (const auto& fq : itq->e)
                  total += fp.v * fq.v * s.Zinv(fp.j, fq.i) * s.X(fq.j, fp.i);
            } else {
              for (const auto& fp : itp->e)
                for (const auto& fq : itq->e)
                  if (fp.i == fq.i) total += fp.v * fq.v * s.zinvd(fp.i) * s.xd(fp.i);
            }
            ++itp;
            ++itq;
          }
        }
        schur(p, q) = total;
        schur(q, p) = total;
      }
    }
    Eigen::VectorXd jac = schur.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd scaled = jac.asDiagonal() * schur * jac.asDiagonal();

    Eigen::LLT<Eigen::MatrixXd> schur_llt;
    bool solved = false;
    for (double shift : {0.0, 1e-12, 1e-10}) {
      Eigen::MatrixXd reg = scaled;
      if (shift > 0) reg.diagonal().array() += shift * 2.0;
      schur_llt.compute(reg);
      if (schur_llt.info() == Eigen::Success) {
        solved = true;
        break;
      }
    }
    if (!solved) {
      trouble = true;
      break;
    }
    // Scaled solve with two steps of iterative refinement.
    auto schur_solve = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd v = jac.asDiagonal() * schur_llt.solve(jac.asDiagonal() * rhs);
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd resid = rhs - schur * v;
        v += jac.asDiagonal() * schur_llt.solve(jac.asDiagonal() * resid);
      }
      return v;
    };

    Eigen::VectorXd dvec(m), qvec(m);
    std::vector<Eigen::MatrixXd> w1(static_cast<std::size_t>(nblocks));
    std::vector<Eigen::VectorXd> w1d(static_cast<std::size_t>(nblocks));
    for (int bl = 0; bl < nblocks; ++bl) {
      auto& s = st[static_cast<std::size_t>(bl)];
      if (s.kind == BlockKind::Psd)
        w1[static_cast<std::size_t>(bl)] = s.Zinv * s.Rd * s.X;
      else
        w1d[static_cast<std::size_t>(bl)] = s.zinvd.array() * s.rdd.array() * s.xd.array();
    }
    for (int p = 0; p < m; ++p) {
      double dv = 0, qv = 0;
      for (const auto& be : acons[static_cast<std::size_t>(p)]) {
        const auto& s = st[static_cast<std::size_t>(be.bl)];
        if (s.kind == BlockKind::Psd) {
          dv += entries_dot_mat(be.e, s.Zinv, false);
          qv += entries_dot_mat(be.e, w1[static_cast<std::size_t>(be.bl)], true);
        } else {
          dv += entries_dot_vec(be.e, s.zinvd);
          qv += entries_dot_vec(be.e, w1d[static_cast<std::size_t>(be.bl)]);
        }
      }
      dvec(p) = dv;
      qvec(p) = qv;
    }

    // Predictor (affine scaling).
    Eigen::VectorXd dy_aff = schur_solve(-qvec - b);
    for (int bl = 0; bl < nblocks; ++bl) {
      auto& s = st[static_cast<std::size_t>(bl)];
      if (s.kind == BlockKind::Psd) {
        s.dZaff = dense_from_y(dy_aff, bl) + s.Rd;
        Eigen::MatrixXd raw = -s.X - s.Zinv * (s.dZaff * s.X);
        s.dXaff = 0.5 * (raw + raw.transpose());
        s.dZ = s.dZaff;
        s.dX = s.dXaff;
      } else {
        s.dzaffd = diag_from_y(dy_aff, bl) + s.rdd;
        s.dxaffd = -s.xd.array() - s.zinvd.array() * s.dzaffd.array() * s.xd.array();
        s.dzd = s.dzaffd;
        s.dxd = s.dxaffd;
      }
    }
    double ap_aff = 1.0, ad_aff = 1.0;
    for (const auto& s : st) {
      ap_aff = std::min(ap_aff, max_step(s, true));
      ad_aff = std::min(ad_aff, max_step(s, false));
    }
    double gap_aff = 0;
    for (const auto& s : st) {
      if (s.kind == BlockKind::Psd)
        gap_aff += ((s.X + ap_aff * s.dXaff).array() * (s.Z + ad_aff * s.dZaff).array()).sum();
      else
        gap_aff += (s.xd + ap_aff * s.dxaffd).dot(s.zd + ad_aff * s.dzaffd);
    }
    double sigma = std::clamp(std::pow(std::max(gap_aff, 0.0) / gap, 3.0), 1e-8, 1.0);

    // Corrector.
    Eigen::VectorXd corr(m);
    for (int bl = 0; bl < nblocks; ++bl) {
      auto& s = st[static_cast<std::size_t>(bl)];
      if (s.kind == BlockKind::Psd)
        w1[static_cast<std::size_t>(bl)] = s.Zinv * s.dZaff * s.dXaff;
      else
        w1d[static_cast<std::size_t>(bl)] =
            s.zinvd.array() * s.dzaffd.array() * s.dxaffd.array();
    }
    for (int p = 0; p < m; ++p) {
      double cv = 0;
      for (const auto& be : acons[static_cast<std::size_t>(p)]) {
        const auto& s = st[static_cast<std::size_t>(be.bl)];
        cv += s.kind == BlockKind::Psd
                  ? entries_dot_mat(be.e, w1[static_cast<std::size_t>(be.bl)], true)
                  : entries_dot_vec(be.e, w1d[static_cast<std::size_t>(be.bl)]);
      }
      corr(p) = cv;
    }
    Eigen::VectorXd dy = schur_solve(sigma * mu * dvec - qvec - corr - b);
    for (int bl = 0; bl < nblocks; ++bl) {
      auto& s = st[static_cast<std::size_t>(bl)];
      if (s.kind == BlockKind::Psd) {
        s.dZ = dense_from_y(dy, bl) + s.Rd;
        Eigen::MatrixXd raw =
            sigma * mu * s.Zinv - s.X - s.Zinv * (s.dZ * s.X + s.dZaff * s.dXaff);
        s.dX = 0.5 * (raw + raw.transpose());
      } else {
        s.dzd = diag_from_y(dy, bl) + s.rdd;
        s.dxd = (sigma * mu * s.zinvd.array() - s.xd.array() -
                 s.zinvd.array() *
                     (s.dzd.array() * s.xd.array() + s.dzaffd.array() * s.dxaffd.array()))
                    .matrix();
      }
    }

    double tau = (mu < 1e-5 || mt.relgap < 1e-5) ? 0.99 : 0.97;
    if (mt.merit() < 1e-6) tau = 0.995;
    double ap = 1.0, ad = 1.0;
    for (const auto& s : st) {
      ap = std::min(ap, tau * max_step(s, true));
      ad = std::min(ad, tau * max_step(s, false));
    }
    ap = std::min(ap, 1.0);
    ad = std::min(ad, 1.0);

    // Endgame guard: retract steps that visibly worsen the merit.
    auto take_step = [&](double sp, double sd) {
      for (auto& s : st) {
        if (s.kind == BlockKind::Psd) {
          s.X += sp * s.dX;
          s.Z += sd * s.dZ;
        } else {
          s.xd += sp * s.dxd;
          s.zd += sd * s.dzd;
        }
      }
      y += sd * dy;
    };
    bool endgame = mt.merit() < 1e-5;
    take_step(ap, ad);
    if (endgame) {
      double scale_back = 1.0;
      for (int attempt = 0; attempt < 3; ++attempt) {
        Metrics after = measure();
        if (after.merit() <= mt.merit() * 1.05) break;
        take_step(-ap * scale_back / 2, -ad * scale_back / 2);  // halve the net step
        scale_back /= 2;
      }
    }
    if (ap < 1e-10 && ad < 1e-10) {
      if (try_primal_infeasibility() || try_dual_infeasibility()) break;
    }
  }

  if (trouble) sol.status = SolveStatus::NumericalTrouble;
  if (sol.status != SolveStatus::Infeasible && sol.status != SolveStatus::Unbounded &&
      sol.status != SolveStatus::Optimal) {
    restore_best();
    Metrics mt = measure();
    if (mt.relgap <= opts.tol && mt.prinf <= opts.tol && mt.duinf <= opts.tol)
      sol.status = SolveStatus::Optimal;
    else if (iter > opts.max_iter && !trouble) {
      if (!try_primal_infeasibility() && !try_dual_infeasibility())
        sol.status = SolveStatus::IterationLimit;
    } else if (!trouble) {
      sol.status = SolveStatus::IterationLimit;
    }
  }
  sol.iterations = std::min(iter, opts.max_iter);

  // Package the point and recompute every reported residual from it.
  sol.X.resize(static_cast<std::size_t>(nblocks));
  sol.Z.resize(static_cast<std::size_t>(nblocks));
  for (int bl = 0; bl < nblocks; ++bl) {
    auto& s = st[static_cast<std::size_t>(bl)];
    auto& xv = sol.X[static_cast<std::size_t>(bl)];
    auto& zv = sol.Z[static_cast<std::size_t>(bl)];
    xv.kind = zv.kind = s.kind;
    if (s.kind == BlockKind::Psd) {
      xv.dense = s.X;
      zv.dense = s.Z;
    } else {
      xv.diag = s.xd;
      zv.diag = s.zd;
    }
  }
  if (sol.status != SolveStatus::Infeasible) sol.y = minimize ? Eigen::VectorXd(-y) : y;

  Metrics mt = measure();
  double mineig = 0;
  for (int bl = 0; bl < nblocks; ++bl) {
    const auto& s = st[static_cast<std::size_t>(bl)];
    if (s.kind == BlockKind::Psd)
      mineig = std::min(mineig, detail::min_eigenvalue(sol.X[static_cast<std::size_t>(bl)]));
    else if (s.size > 0)
      mineig = std::min(mineig, s.xd.minCoeff());
  }
  sol.primal_objective = minimize ? -mt.pobj : mt.pobj;
  sol.dual_objective = minimize ? -mt.dobj : mt.dobj;
  sol.residuals.primal_infeasibility = mt.prinf;
  sol.residuals.dual_infeasibility = mt.duinf;
  sol.residuals.duality_gap = mt.dobj - mt.pobj;
  sol.residuals.relative_gap = mt.relgap;
  sol.residuals.min_block_eigenvalue = mineig;
  return sol;
}

}  // namespace kpb
