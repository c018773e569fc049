#pragma once

// Solution transfer between the hierarchies: a feasible measure nu for the
// level-(r+2) split bound induces a multiset measure beta and a two-point
// matrix alpha feasible for the level-r symmetrized program with at least the
// same objective value.  Everything here runs in exact rational arithmetic
// (floating witnesses convert exactly, doubles being binary rationals), so
// the construction identities hold with zero slack and only genuine solver
// error shows up in the tolerance checks:
//
//   beta_m   = multinomial(m) nu(supp m) / phi_{r+1}   (supp m independent)
//   alpha    = two-point mass of beta
//   phi_t    = sum_I coveringcount(t,|I|) nu(I)
//   alpha(diagonal) = 1 and alpha(V^2) = phi_{r+2}/phi_{r+1} identically.

#include <kpb/counting.hpp>
#include <kpb/graph.hpp>
#include <kpb/hierarchies.hpp>
#include <kpb/measure.hpp>
#include <kpb/report.hpp>

#include <string>
#include <vector>

namespace kpb {

struct MomentVector {
  std::vector<Rational> phi;  // phi[t] for t = 0..tmax

  const Rational& at(int t) const { return phi[static_cast<std::size_t>(t)]; }
  int tmax() const { return static_cast<int>(phi.size()) - 1; }
};

inline MomentVector phi_moments(const Graph& g, const MeasureVector<Rational>& nu, int tmax) {
  require(nu.family->kind() == FamilyKind::IndependentSets, "phi_moments: measure over sets required");
  (void)g;
  MomentVector out;
  out.phi.assign(static_cast<std::size_t>(tmax) + 1, Rational(0));
  for (int t = 0; t <= tmax; ++t) {
    Rational total = 0;
    for (std::int64_t i = 0; i < nu.size(); ++i) {
      int card = nu.family->set_at(i).size();
      if (card > t) continue;  // no covering tuples
      total += Rational(covering_tuple_count(t, card)) * nu[i];
    }
    out.phi[static_cast<std::size_t>(t)] = total;
  }
  return out;
}

struct TransferResult {
  int r = 0;
  MeasureVector<Rational> beta;  // over Multisets(n, r+2)
  RationalMatrix alpha;          // symmetric n x n, ordered-pair masses
  MomentVector phi;              // t = 0..r+2
  CheckSet report;
};

inline CheckSet verify_transfer(const Graph& g, int r, const TransferResult& result,
                                const MeasureVector<Rational>& nu, double tol);

inline TransferResult transfer(const Graph& g, const MeasureVector<Rational>& nu, int r,
                               double degeneracy_tol = 1e-9) {
  require(nu.family->kind() == FamilyKind::IndependentSets && nu.family->arity() == r + 2,
          "transfer: measure must live on independent sets of size <= r+2");
  const int n = g.vertex_count();
  TransferResult out;
  out.r = r;
  out.phi = phi_moments(g, nu, r + 2);

  Rational singleton_mass = 0;
  for (std::int64_t i = 0; i < nu.size(); ++i)
    if (nu.family->set_at(i).size() == 1) singleton_mass += nu[i];
  require(singleton_mass > exact_rational(degeneracy_tol),
          "transfer: degenerate input, singleton mass is not positive");
  require(out.phi.at(r + 1) > exact_rational(degeneracy_tol),
          "transfer: degenerate input, phi_{r+1} is not positive");

  auto multisets = IndexedFamily::multisets(n, r + 2);
  out.beta = MeasureVector<Rational>::zero(multisets);
  const Rational inv_phi = Rational(1) / out.phi.at(r + 1);
  for (std::int64_t mi = 0; mi < multisets->size(); ++mi) {
    auto counts = multisets->multiset_counts_at(mi);
    VertexSet support;
    for (int v = 0; v < n; ++v)
      if (counts[static_cast<std::size_t>(v)] > 0) support = support.with(v);
    if (!g.is_independent(support)) continue;  // tuples with adjacent coordinates carry no mass
    out.beta[mi] = Rational(multinomial(counts)) * nu.at_set(support) * inv_phi;
  }
  out.alpha = two_point_from_beta(out.beta, n, r);
  out.report = verify_transfer(g, r, out, nu, 1e-6);
  return out;
}

// The five feasibility/objective checks of the transferred pair, each with
// its numeric slack.
inline CheckSet verify_transfer(const Graph& g, int r, const TransferResult& result,
                                const MeasureVector<Rational>& nu, double tol) {
  CheckSet out;
  Rational rtol = exact_rational(tol);
  Rational min_beta = result.beta.values.empty()
                          ? Rational(0)
                          : *std::min_element(result.beta.values.begin(), result.beta.values.end());
  out.check_le_exact("beta nonnegativity (-min entry)", -min_beta, 0, rtol);
  out.check_le_exact("alpha nonnegativity (-min entry)", -result.alpha.min_entry(), 0, rtol);
  out.check_eq_exact("alpha diagonal mass = 1", result.alpha.trace(), 1, rtol);
  Rational worst_edge = 0;
  for (auto [x, y] : g.edges())
    worst_edge = std::max(worst_edge, Rational(abs(result.alpha(x, y))));
  out.check_le_exact("alpha vanishes on edges", worst_edge, 0, rtol);
  Rational singleton_mass = 0;
  for (std::int64_t i = 0; i < nu.size(); ++i)
    if (nu.family->set_at(i).size() == 1) singleton_mass += nu[i];
  out.check_le_exact("alpha total mass >= nu singleton mass", singleton_mass,
                     result.alpha.total(), rtol);
  return out;
}

// Two-point moment slice at a fixed covering order t <= r: entry (S,T) sums
// coveringcount(t,|Q|) nu(S u T u Q) over independent bases Q of size <= r.
// Its I_1-block sums reproduce phi_t, phi_{t+1}, phi_{t+2}.
inline RationalMatrix mu_matrix(const Graph& g, const MeasureVector<Rational>& nu, int r,
                                int t) {
  require(0 <= t && t <= r, "mu_matrix: need 0 <= t <= r");
  require(nu.family->kind() == FamilyKind::IndependentSets && nu.family->arity() == r + 2,
          "mu_matrix: measure must live on independent sets of size <= r+2");
  auto qfam = IndexedFamily::independent_sets(g, r);
  int l = nu.family->i1_size();
  RationalMatrix mu(l);
  for (std::int64_t qi = 0; qi < qfam->size(); ++qi) {
    VertexSet q = qfam->set_at(qi);
    Rational weight(covering_tuple_count(t, q.size()));
    if (weight == 0) continue;
    for (int a = 0; a < l; ++a)
      for (int b = a; b < l; ++b) {
        VertexSet u = nu.family->i1_set(a).unite(nu.family->i1_set(b)).unite(q);
        if (!g.is_independent(u)) continue;
        Rational v = weight * nu.at_set(u);
        mu(a, b) += v;
        if (a != b) mu(b, a) += v;
      }
  }
  return mu;
}

// 2x2 moment matrices [[phi_t, phi_{t+1}], [phi_{t+1}, phi_{t+2}]] for
// t = 0..r: nonnegative trace and determinant, and the chained consequence
// phi_{r+2}/phi_{r+1} >= phi_1/phi_0.
inline CheckSet moment_psd_check(const MomentVector& phi, int r, double tol = 1e-9) {
  require(phi.tmax() >= r + 2, "moment_psd_check: need moments up to r+2");
  CheckSet out;
  Rational rtol = exact_rational(tol);
  for (int t = 0; t <= r; ++t) {
    Rational det = phi.at(t) * phi.at(t + 2) - phi.at(t + 1) * phi.at(t + 1);
    out.check_le_exact("moment matrix t=" + std::to_string(t) + " determinant >= 0", -det, 0,
                       rtol);
    out.check_le_exact("moment matrix t=" + std::to_string(t) + " trace >= 0",
                       -(phi.at(t) + phi.at(t + 2)), 0, rtol);
  }
  if (phi.at(r + 1) > 0 && phi.at(0) > 0) {
    Rational lhs = phi.at(1) / phi.at(0);
    Rational rhs = phi.at(r + 2) / phi.at(r + 1);
    out.check_le_exact("chain phi_{r+2}/phi_{r+1} >= phi_1/phi_0", lhs, rhs, rtol);
  } else {
    out.check_true("chain skipped: nonpositive phi", false);
  }
  return out;
}

}  // namespace kpb
