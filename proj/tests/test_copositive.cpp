#include <kpb/copositive.hpp>
#include <kpb/hierarchies.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace kpb;

namespace {

RationalMatrix random_int_kernel(Lcg64& rng, int n, long low = -3, long high = 3) {
  RationalMatrix z(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      z(i, j) = Rational(low + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(high - low + 1))));
      z(j, i) = z(i, j);
    }
  return z;
}

Eigen::MatrixXd to_dense(const RationalMatrix& z) {
  Eigen::MatrixXd out(z.size(), z.size());
  for (int i = 0; i < z.size(); ++i)
    for (int j = 0; j < z.size(); ++j) out(i, j) = to_double(z(i, j));
  return out;
}

}  // namespace

TEST_CASE("interior kernel construction") {
  SECTION("complete graphs need no kernel") {
    CHECK(find_F(make_complete(5)).norm() == 0.0);
  }

  SECTION("the textbook kernel for two isolated vertices is valid") {
    Eigen::MatrixXd f(2, 2);
    f << 1, -1, -1, 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= 0);
    CHECK(es.eigenvalues().maxCoeff() == Catch::Approx(2.0));
    CHECK(f(0, 1) <= -1);
    Eigen::MatrixXd z0 = build_Z0(f, 1.0 / 3.0, make_empty(2));
    CHECK(z0(0, 1) == Catch::Approx(-1.0).margin(1e-12));
  }

  SECTION("five-cycle kernel from the SDP") {
    Graph c5 = make_cycle(5);
    Eigen::MatrixXd f = find_F(c5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-7 * (1 + f.norm()));
    for (auto [x, y] : c5.non_edges()) CHECK(f(x, y) <= -1 + 1e-6);
    Eigen::MatrixXd z0 = build_Z0(f, 0.25, c5);
    for (auto [x, y] : c5.non_edges()) CHECK(z0(x, y) <= -1 + 1e-6);
  }

  SECTION("theta above one third is rejected") {
    Eigen::MatrixXd f(2, 2);
    f << 1, -1, -1, 1;
    CHECK_THROWS_AS(build_Z0(f, 0.5, make_empty(2)), Error);
  }
}

TEST_CASE("membership certificates") {
  SECTION("the all-ones kernel is a member at every level") {
    Eigen::MatrixXd j = Eigen::MatrixXd::Ones(3, 3);
    for (int r = 0; r <= 6; ++r) {
      auto c = cr_membership(j, r);
      CHECK(c.member);
      // Every position pair contributes one, so every sum is (r+2)(r+1).
      CHECK(c.worst_sum == Catch::Approx((r + 2.0) * (r + 1.0)));
    }
    CHECK(min_r(j, 6).r == 0);
  }

  SECTION("zero-diagonal exchange kernel is a member at level 0") {
    Eigen::MatrixXd z(2, 2);
    z << 0, 1, 1, 0;
    auto c = cr_membership(z, 0);
    CHECK(c.member);
    CHECK(c.worst_sum == 0.0);
  }

  SECTION("the boundary kernel never enters the inner cones") {
    RationalMatrix b(2);
    b(0, 0) = 1;
    b(1, 1) = 1;
    b(0, 1) = -1;
    b(1, 0) = -1;
    for (int r = 0; r <= 6; ++r) {
      auto c = cr_membership(b, r);
      CHECK_FALSE(c.member);
      CHECK(c.worst_sum_exact < 0);
      // The violating multiset re-evaluates negative on its own.
      CHECK(cop_detail::multiset_sum<Rational>(b, c.worst_multiset) == c.worst_sum_exact);
    }
    MinRResult mr = min_r(to_dense(b), 6, CertMode::Exact);
    CHECK_FALSE(mr.found);
  }

  SECTION("nesting: members stay members one level up") {
    Lcg64 rng(2121);
    int members_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
      int n = 2 + static_cast<int>(rng.next_below(3));
      RationalMatrix z = random_int_kernel(rng, n);
      for (int r = 0; r <= 3; ++r) {
        if (cr_membership(z, r).member) {
          ++members_seen;
          CHECK(cr_membership(z, r + 1).member);
        }
      }
    }
    CHECK(members_seen > 50);  // the generator hits the cone often enough
  }

  SECTION("exact members revalidate under raw tuple enumeration") {
    Lcg64 rng(808);
    int checked = 0;
    for (int trial = 0; trial < 120 && checked < 25; ++trial) {
      RationalMatrix z = random_int_kernel(rng, 3, -1, 5);
      for (int r = 0; r <= 3; ++r)
        if (cr_membership(z, r).member) {
          CHECK(revalidate_by_tuples_exact(z, r));
          ++checked;
        }
    }
    CHECK(checked >= 25);
  }

  SECTION("members pass a nonnegative-vector spot check") {
    Lcg64 rng(33);
    int tested = 0;
    for (int trial = 0; trial < 200 && tested < 5; ++trial) {
      RationalMatrix z = random_int_kernel(rng, 4, -1, 5);
      if (!cr_membership(z, 2).member) continue;
      ++tested;
      Eigen::MatrixXd zd = to_dense(z);
      for (int probe = 0; probe < 1000; ++probe) {
        Eigen::VectorXd y(4);
        for (int i = 0; i < 4; ++i) y(i) = rng.next_unit();
        CHECK(y.dot(zd * y) >= -1e-9);
      }
    }
    CHECK(tested == 5);
  }
}

TEST_CASE("interior kernel certificate level on the five-cycle") {
  Graph c5 = make_cycle(5);
  Eigen::MatrixXd z0 = build_Z0(find_F(c5), 0.25, c5);

  // Regression baseline from the first verified run: the smallest level
  // containing this kernel is 7, so the default cap of 6 reports not-found.
  MinRResult capped = min_r(z0, 6);
  CHECK_FALSE(capped.found);

  MinRResult mr = min_r(z0, 8);
  REQUIRE(mr.found);
  CHECK(mr.r == 7);
  CHECK(revalidate_by_tuples(z0, mr.r, 1e-9));

  // Exact mode on the rationalized kernel agrees on both sides of the cut.
  CHECK_FALSE(cr_membership(z0, 6, CertMode::Exact).member);
  CHECK(cr_membership(z0, 7, CertMode::Exact).member);
}

TEST_CASE("perturbation toward the interior point") {
  Graph c5 = make_cycle(5);
  Eigen::MatrixXd f = find_F(c5);
  Eigen::MatrixXd z0 = build_Z0(f, 0.25, c5);
  double lambda0 = 1 + z0.diagonal().maxCoeff();

  SECTION("eps = 1 reduces to the interior kernel itself") {
    PerturbReport rep =
        perturb_certify(c5, Eigen::MatrixXd::Zero(5, 5), 1.0, z0, lambda0, 1.0, 8);
    CHECK(rep.search.found);
    CHECK(rep.search.r == min_r(z0, 8).r);
  }

  SECTION("eps = 0 only reports on the kernel itself") {
    // The boundary-style kernel from the level-3 dual witness need not lie in
    // any finite level; the report is informational.
    BoundResult xd = solve_xi_dual(c5, 3);
    REQUIRE(xd.status == SolveStatus::Optimal);
    PerturbReport rep = perturb_certify(c5, xd.kernel, *xd.lambda, z0, lambda0, 0.0, 3);
    CHECK(rep.checks.all_pass());
  }

  SECTION("mixing the level-3 dual witness certifies with valid constraints") {
    BoundResult xd = solve_xi_dual(c5, 3);
    REQUIRE(xd.status == SolveStatus::Optimal);
    PerturbReport rep = perturb_certify(c5, xd.kernel, *xd.lambda, z0, lambda0, 0.1, 8);
    CHECK(rep.checks.all_pass());  // non-edge and diagonal bounds hold at 1e-6
    if (rep.search.found) CHECK(revalidate_by_tuples(0.1 * z0 + 0.9 * xd.kernel, rep.search.r));
  }
}
