#pragma once

// In-process invariant battery behind the `selftest` subcommand: a compact
// pass over the identities and cross-checks the test suite covers in full.

#include <kpb/copositive.hpp>
#include <kpb/hierarchies.hpp>
#include <kpb/operators.hpp>
#include <kpb/sdpa.hpp>
#include <kpb/simplex.hpp>
#include <kpb/transfer.hpp>

#include <cmath>

namespace kpb {

inline CheckSet run_selftest() {
  CheckSet out;

  {  // covering counts against the total-functions identity
    bool ok = true;
    for (int i = 0; i <= 4 && ok; ++i)
      for (int t = 0; t <= 5 && ok; ++t) {
        Int total = 0;
        for (int m = 0; m <= i; ++m) total += binomial(i, m) * covering_tuple_count(t, m);
        ok = total == int_pow(Int(i), t);
      }
    out.check_true("covering counts satisfy the total-functions identity", ok);
  }

  {  // adjoint image mass equals the covering moment (exact)
    Graph g = make_gnp(4, 0.5, 7);
    Lcg64 rng(1);
    auto fam = IndexedFamily::independent_sets(g, 3);
    std::vector<Rational> nu;
    for (std::int64_t i = 0; i < fam->size(); ++i)
      nu.push_back(Rational(static_cast<long>(rng.next_below(9)), 2));
    auto ns = cover_count_vector(g, 3, 3);
    Rational moment = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) moment += ns[i] * nu[i];
    bool ok = true;
    for (int t = 0; t <= 3 && ok; ++t) {
      auto image = cover_prefix_map(g, 3, t, 3).apply_transpose<Rational>(nu);
      Rational mass = 0;
      for (const auto& x : image) mass += x;
      ok = mass == moment;
    }
    out.check_true("adjoint prefix maps preserve covering mass", ok);
  }

  {  // prefix collapse identity as exact matrices
    Graph g = make_empty(3);
    SparseLinearMap lhs = cover_prefix_map(g, 4, 3, 4).compose(symmetrization_map_tuples(3, 1));
    SparseLinearMap rhs = cover_prefix_map(g, 4, 2, 4).compose(unfold_pairs_map(3));
    out.check_true("prefix collapse matrix identity", lhs.same_entries(rhs));
  }

  {  // evaluation identities at level r = 1
    Graph g = make_gnp(4, 0.4, 3);
    SparseLinearMap b = decomposition_map(g, 3);
    auto cols = b.col_space();
    bool ok = true;
    for (int t = 0; t <= 1 && ok; ++t) {
      std::vector<Rational> mixed(static_cast<std::size_t>(cols->size()), Rational(0));
      for (std::int64_t ci = 0; ci < cols->size(); ++ci) {
        auto tr = cols->triple_at(ci);
        if ((tr.s == 0) != (tr.t == 0))
          mixed[static_cast<std::size_t>(ci)] =
              Rational(covering_tuple_count(t, tr.q.size())) / 2;
      }
      ok = b.apply<Rational>(mixed) == cover_count_vector(g, 3, t + 1);
    }
    out.check_true("split evaluation identities reproduce covering counts", ok);
  }

  {  // dirac transfer closed form, zero slack
    Graph host = make_empty(4);
    auto nu = dirac_solution(host, VertexSet::full(2), 3);
    TransferResult tr = transfer(host, nu, 1);
    out.check_true("dirac transfer closed form (phi and total mass)",
                   tr.phi.at(3) == 8 && tr.alpha.total() == 2 &&
                       verify_transfer(host, 1, tr, nu, 0.0).all_pass());
  }

  {  // split bound on the five-cycle
    BoundResult d2 = solve_delta(make_cycle(5), 2);
    out.check_eq("delta(k=2) on the five-cycle vs sqrt(5)", d2.value, std::sqrt(5.0), 1e-4);
    out.check_true("delta witness verifies", d2.verification.all_pass());
  }

  {  // symmetrized LP pair on the five-cycle
    BoundResult xd = solve_xi_dual(make_cycle(5), 1);
    BoundResult xp = solve_xi_primal(make_cycle(5), 1);
    out.check_true("xi dual exact value at level 1",
                   xd.exact_value.has_value() && *xd.exact_value == 3);
    out.check_le("xi weak duality at level 1", xp.value, xd.value, 1e-6);
  }

  {  // sdpa byte round-trip
    ConicProgram p;
    p.blocks = {{BlockKind::Psd, 2}};
    p.objective = {{{0, 1, Rational(1, 2)}}};
    p.constraints.push_back({{{{0, 0, Rational(1)}}}, Rational(1)});
    p.constraints.push_back({{{{1, 1, Rational(1)}}}, Rational(1)});
    std::string text = export_sdpa(p);
    out.check_true("sdpa export/import/export is byte identical",
                   export_sdpa(import_sdpa(text)) == text);
  }

  {  // exact and floating LP paths agree
    Lcg64 rng(99);
    bool ok = true;
    for (int trial = 0; trial < 5 && ok; ++trial) {
      ConicProgram p;
      int n = 5;
      p.blocks = {{BlockKind::Diagonal, n + 1}};
      p.objective.resize(1);
      std::vector<long> x0(static_cast<std::size_t>(n));
      for (auto& v : x0) v = 1 + static_cast<long>(rng.next_below(4));
      for (int j = 0; j < n; ++j)
        p.objective[0].push_back({j, j, Rational(static_cast<long>(rng.next_below(9)) - 4)});
      long total = 10;
      ConicProgram::Constraint bound;
      bound.coeff.resize(1);
      for (int j = 0; j < n; ++j) {
        bound.coeff[0].push_back({j, j, Rational(1)});
        total += x0[static_cast<std::size_t>(j)];
      }
      bound.coeff[0].push_back({n, n, Rational(1)});
      bound.rhs = total;
      p.constraints.push_back(std::move(bound));
      RationalSolution ex = solve_lp_exact(p);
      Solution fl = solve_conic(p);
      ok = ex.status == SolveStatus::Optimal && fl.status == SolveStatus::Optimal &&
           std::abs(fl.primal_objective - to_double(ex.objective)) <= 1e-6;
    }
    out.check_true("exact and floating LP solvers agree", ok);
  }

  {  // boundary kernel stays outside the inner cones
    RationalMatrix b(2);
    b(0, 0) = 1;
    b(1, 1) = 1;
    b(0, 1) = -1;
    b(1, 0) = -1;
    bool ok = true;
    for (int r = 0; r <= 4 && ok; ++r) ok = !cr_membership(b, r).member;
    out.check_true("boundary kernel is a non-member through level 4", ok);
  }

  {  // sweep consistency flags
    SweepResult sw = hierarchy_sweep(make_cycle(5), 4, 1, {}, 2);
    out.check_true("five-cycle sweep satisfies sandwich and monotonicity",
                   sw.flags.all_pass());
  }

  return out;
}

}  // namespace kpb
