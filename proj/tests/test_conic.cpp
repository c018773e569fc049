#include <kpb/conic.hpp>
#include <kpb/ipm.hpp>
#include <kpb/sdpa.hpp>
#include <kpb/simplex.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "oracles.hpp"

using namespace kpb;

namespace {

// max X_12 over a 2x2 PSD block with unit diagonal.
ConicProgram toy_sdp() {
  ConicProgram p;
  p.sense = ConicProgram::Sense::Maximize;
  p.blocks = {{BlockKind::Psd, 2}};
  p.objective = {{{0, 1, Rational(1, 2)}}};
  p.constraints.push_back({{{{0, 0, Rational(1)}}}, Rational(1)});
  p.constraints.push_back({{{{1, 1, Rational(1)}}}, Rational(1)});
  return p;
}

// max x subject to x + s = rhs over a nonnegative pair.
ConicProgram toy_lp(const Rational& rhs) {
  ConicProgram p;
  p.blocks = {{BlockKind::Diagonal, 2}};
  p.objective = {{{0, 0, Rational(1)}}};
  p.constraints.push_back({{{{0, 0, Rational(1)}, {1, 1, Rational(1)}}}, rhs});
  return p;
}

ConicProgram random_feasible_lp(Lcg64& rng, int n, int m) {
  // Equality rows from an interior point, plus a bounding row with slack.
  std::vector<std::vector<long>> a(static_cast<std::size_t>(m), std::vector<long>(static_cast<std::size_t>(n)));
  std::vector<long> x0(static_cast<std::size_t>(n));
  for (auto& v : x0) v = 1 + static_cast<long>(rng.next_below(4));
  ConicProgram p;
  p.blocks = {{BlockKind::Diagonal, n + 1}};
  p.objective.resize(1);
  for (int j = 0; j < n; ++j)
    p.objective[0].push_back({j, j, Rational(static_cast<long>(rng.next_below(11)) - 5)});
  for (int i = 0; i < m; ++i) {
    long rhs = 0;
    ConicProgram::Constraint con;
    con.coeff.resize(1);
    for (int j = 0; j < n; ++j) {
      long v = static_cast<long>(rng.next_below(7)) - 3;
      if (v != 0) con.coeff[0].push_back({j, j, Rational(v)});
      rhs += v * x0[static_cast<std::size_t>(j)];
    }
    con.rhs = rhs;
    p.constraints.push_back(std::move(con));
  }
  ConicProgram::Constraint bound;
  bound.coeff.resize(1);
  long total = 10;
  for (int j = 0; j < n; ++j) {
    bound.coeff[0].push_back({j, j, Rational(1)});
    total += x0[static_cast<std::size_t>(j)];
  }
  bound.coeff[0].push_back({n, n, Rational(1)});
  bound.rhs = total;
  p.constraints.push_back(std::move(bound));
  return p;
}

}  // namespace

TEST_CASE("interior point on toy problems") {
  SECTION("2x2 correlation-style SDP") {
    Solution s = solve_conic(toy_sdp());
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal_objective == Catch::Approx(1.0).margin(1e-7));
    CHECK(s.residuals.duality_gap >= -1e-6);
    CHECK(check_solution(toy_sdp(), s, 1e-6).all_pass());
  }

  SECTION("slack-form LP") {
    Solution s = solve_conic(toy_lp(Rational(1)));
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal_objective == Catch::Approx(1.0).margin(1e-7));
  }

  SECTION("minimize sense round-trips signs") {
    ConicProgram p = toy_lp(Rational(3, 2));
    p = p.negated();  // min -x: optimum -3/2
    Solution s = solve_conic(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal_objective == Catch::Approx(-1.5).margin(1e-7));
    CHECK(s.dual_objective == Catch::Approx(-1.5).margin(1e-6));
  }

  SECTION("infeasible equality is certified") {
    ConicProgram p;
    p.blocks = {{BlockKind::Diagonal, 1}};
    p.objective = {{{0, 0, Rational(1)}}};
    p.constraints.push_back({{{{0, 0, Rational(1)}}}, Rational(-1)});
    Solution s = solve_conic(p);
    CHECK(s.status == SolveStatus::Infeasible);
  }

  SECTION("unbounded objective is certified") {
    ConicProgram p;
    p.blocks = {{BlockKind::Diagonal, 2}};
    p.objective = {{{0, 0, Rational(1)}, {1, 1, Rational(1)}}};
    p.constraints.push_back({{{{0, 0, Rational(1)}, {1, 1, Rational(-1)}}}, Rational(1)});
    Solution s = solve_conic(p);
    CHECK(s.status == SolveStatus::Unbounded);
  }

  SECTION("deterministic reruns") {
    Solution a = solve_conic(toy_sdp());
    Solution b = solve_conic(toy_sdp());
    REQUIRE(a.X[0].dense.size() == b.X[0].dense.size());
    CHECK(std::memcmp(a.X[0].dense.data(), b.X[0].dense.data(),
                      sizeof(double) * static_cast<std::size_t>(a.X[0].dense.size())) == 0);
    CHECK(a.y == b.y);
    CHECK(a.iterations == b.iterations);
  }

  SECTION("size caps are enforced") {
    ConicProgram p;
    p.blocks = {{BlockKind::Psd, kMaxPsdDim + 1}};
    p.objective.resize(1);
    p.constraints.push_back({{{{0, 0, Rational(1)}}}, Rational(1)});
    CHECK_THROWS_AS(solve_conic(p), Error);
  }
}

TEST_CASE("check_solution flags violations") {
  ConicProgram p = toy_lp(Rational(1));
  Solution s;
  s.status = SolveStatus::Optimal;
  s.X.push_back({BlockKind::Diagonal, Eigen::Vector2d(1.0, 0.0), {}});
  s.y = Eigen::VectorXd::Zero(1);
  s.Z.push_back({BlockKind::Diagonal, Eigen::Vector2d(0.0, 0.0), {}});
  s.primal_objective = 1.0;
  CHECK(check_solution(p, s, 0.0).all_pass());

  s.X[0].diag(1) = -1e-3;  // violates both the equality and the cone
  CheckSet bad = check_solution(p, s, 1e-6);
  CHECK_FALSE(bad.all_pass());
}

TEST_CASE("exact simplex") {
  SECTION("bounded maximum is exact") {
    RationalSolution s = solve_lp_exact(toy_lp(Rational(3, 2)));
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == Rational(3, 2));
    CHECK(s.x[0] == Rational(3, 2));
  }

  SECTION("infeasible and unbounded are decided exactly") {
    ConicProgram inf;
    inf.blocks = {{BlockKind::Diagonal, 1}};
    inf.objective = {{{0, 0, Rational(1)}}};
    inf.constraints.push_back({{{{0, 0, Rational(1)}}}, Rational(-1)});
    CHECK(solve_lp_exact(inf).status == SolveStatus::Infeasible);

    ConicProgram unb;
    unb.blocks = {{BlockKind::Diagonal, 2}};
    unb.objective = {{{0, 0, Rational(1)}, {1, 1, Rational(1)}}};
    unb.constraints.push_back({{{{0, 0, Rational(1)}, {1, 1, Rational(-1)}}}, Rational(1)});
    CHECK(solve_lp_exact(unb).status == SolveStatus::Unbounded);
  }

  SECTION("PSD blocks are rejected") {
    CHECK_THROWS_AS(solve_lp_exact(toy_sdp()), Error);
  }

  SECTION("duals certify optimality exactly") {
    Lcg64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      ConicProgram p = random_feasible_lp(rng, 6, 3);
      RationalSolution s = solve_lp_exact(p);
      REQUIRE(s.status == SolveStatus::Optimal);
      // Strong duality: b'y equals the optimum.
      Rational by = 0;
      for (std::size_t i = 0; i < p.constraints.size(); ++i)
        by += p.constraints[i].rhs * s.dual[i];
      CHECK(by == s.objective);
      // Constraints hold exactly.
      for (const auto& con : p.constraints) {
        Rational lhs = 0;
        for (const auto& e : con.coeff[0]) lhs += e.value * s.x[static_cast<std::size_t>(e.i)];
        CHECK(lhs == con.rhs);
      }
    }
  }
}

TEST_CASE("floating and exact LP paths agree") {
  Lcg64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    ConicProgram p = random_feasible_lp(rng, 5 + static_cast<int>(rng.next_below(6)), 3);
    RationalSolution ex = solve_lp_exact(p);
    Solution fl = solve_conic(p);
    REQUIRE(ex.status == SolveStatus::Optimal);
    REQUIRE(fl.status == SolveStatus::Optimal);
    CHECK(fl.primal_objective == Catch::Approx(to_double(ex.objective)).margin(1e-6));
    CHECK(fl.residuals.duality_gap >= -1e-6);
  }
}

TEST_CASE("sdpa format") {
  SECTION("round-trip is byte identical") {
    std::string text = export_sdpa(toy_sdp());
    ConicProgram back = import_sdpa(text);
    CHECK(export_sdpa(back) == text);

    ConicProgram min_form = toy_sdp().negated();
    std::string min_text = export_sdpa(min_form);
    ConicProgram min_back = import_sdpa(min_text);
    CHECK(min_back.sense == ConicProgram::Sense::Minimize);
    CHECK(export_sdpa(min_back) == min_text);
  }

  SECTION("import preserves the optimum") {
    ConicProgram back = import_sdpa(export_sdpa(toy_sdp()));
    Solution s = solve_conic(back);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal_objective == Catch::Approx(1.0).margin(1e-7));
  }

  SECTION("golden bytes for the one-constraint toy") {
    ConicProgram p;
    p.blocks = {{BlockKind::Psd, 2}};
    p.objective = {{{0, 1, Rational(1, 2)}}};
    p.constraints.push_back({{{{0, 0, Rational(1)}, {1, 1, Rational(1)}}}, Rational(1)});
    std::ifstream golden(std::string(KPB_TEST_DATA_DIR) + "/toy.dat-s", std::ios::binary);
    REQUIRE(golden.good());
    std::stringstream buf;
    buf << golden.rdbuf();
    CHECK(export_sdpa(p) == buf.str());
  }

  SECTION("diagonal blocks use negative sizes") {
    std::string text = export_sdpa(toy_lp(Rational(1)));
    CHECK(text.find("-2") != std::string::npos);
    ConicProgram back = import_sdpa(text);
    CHECK(back.blocks[0].kind == BlockKind::Diagonal);
  }
}
