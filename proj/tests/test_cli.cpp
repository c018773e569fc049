#include <kpb/cli.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace kpb;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "kpbound_tests";
  fs::create_directories(dir);
  return dir / (std::to_string(++counter) + "_" + name);
}

nlohmann::json load_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("graph spec parsing") {
  CHECK(parse_graph_spec("cycle:5").edge_count() == 5);
  CHECK(parse_graph_spec("petersen").vertex_count() == 10);
  CHECK(parse_graph_spec("path:3").edge_count() == 2);
  CHECK(parse_graph_spec("kneser:5,2").edge_count() == 15);
  CHECK(parse_graph_spec("gnp:8,0.5,11").edges() == make_gnp(8, 0.5, 11).edges());
  CHECK(parse_graph_spec("gnp:8,0.5", 11).edges() == make_gnp(8, 0.5, 11).edges());

  fs::path dimacs = temp_file("g.dimacs");
  std::ofstream(dimacs) << write_dimacs(make_cycle(6));
  CHECK(parse_graph_spec(dimacs.string()).edge_count() == 6);
  CHECK(parse_graph_spec("file:" + dimacs.string()).edge_count() == 6);

  CHECK_THROWS_AS(parse_graph_spec("torus:3"), Error);
  CHECK_THROWS_AS(parse_graph_spec("cycle:x"), Error);
  CHECK_THROWS_AS(parse_graph_spec("kneser:2"), Error);
}

TEST_CASE("cli subcommands") {
  SECTION("split bound on the five-cycle") {
    fs::path out = temp_file("delta.json");
    int code = run_cli({"delta", "--graph", "cycle:5", "--k", "2", "--out", out.string()});
    CHECK(code == 0);
    nlohmann::json rep = load_json(out);
    CHECK(rep["command"] == "delta");
    CHECK(rep["pass"] == true);
    double value = rep["table"][0]["value"].get<double>();
    CHECK(value == Catch::Approx(2.2360679).margin(1e-4));
  }

  SECTION("infeasible dual LP reports +inf and exits cleanly") {
    fs::path out = temp_file("xi0.json");
    int code = run_cli({"xi-dual", "--graph", "path:3", "--r", "0", "--out", out.string()});
    CHECK(code == 0);
    nlohmann::json rep = load_json(out);
    CHECK(rep["table"][0]["value"] == "+inf");
    CHECK(rep["table"][0]["status"] == "Infeasible");
  }

  SECTION("transfer verification pipeline") {
    fs::path out = temp_file("tv.json");
    int code = run_cli({"transfer-verify", "--graph", "cycle:5", "--r", "1", "--out",
                        out.string()});
    CHECK(code == 0);
    nlohmann::json rep = load_json(out);
    CHECK(rep["pass"] == true);
    CHECK(rep["extra"]["phi"][0].get<double>() == Catch::Approx(1.0).margin(1e-8));
  }

  SECTION("alpha") {
    fs::path out = temp_file("alpha.json");
    CHECK(run_cli({"alpha", "--graph", "petersen", "--out", out.string()}) == 0);
    CHECK(load_json(out)["table"][0]["value"] == 4);
  }

  SECTION("export writes a loadable sdpa file") {
    fs::path out = temp_file("export.json");
    fs::path dat = temp_file("delta.dat-s");
    int code = run_cli({"export-sdpa", "--graph", "cycle:5", "--program", "delta", "--k", "2",
                        "--sdpa-out", dat.string(), "--out", out.string()});
    CHECK(code == 0);
    std::ifstream in(dat);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    ConicProgram p = import_sdpa(buf.str());
    Solution s = solve_conic(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.primal_objective == Catch::Approx(2.2360679).margin(1e-4));
  }

  SECTION("usage errors exit with code 2") {
    CHECK(run_cli({"delta", "--graph", "cycle:5"}) == 2);           // missing --k
    CHECK(run_cli({"delta", "--graph", "nosuch:1", "--k", "2"}) == 2);
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({}) == 2);
  }

  SECTION("sweep writes csv and passes its flags") {
    fs::path out = temp_file("sweep.json");
    fs::path csv = temp_file("sweep.csv");
    int code = run_cli({"sweep", "--graph", "cycle:5", "--kmax", "4", "--rmax", "1", "--jobs",
                        "2", "--csv", csv.string(), "--out", out.string()});
    CHECK(code == 0);
    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "graph,kind,param,value,status,runtime_sec");
    nlohmann::json rep = load_json(out);
    CHECK(rep["table"].size() == 1 + 3 + 2 + 2);
  }
}

TEST_CASE("reports are byte-identical apart from the volatile subtree") {
  fs::path a = temp_file("det_a.json"), b = temp_file("det_b.json");
  std::vector<std::string> args{"sweep", "--graph", "gnp:6,0.5,41", "--kmax", "3",
                                "--rmax", "1"};
  auto run = [&](const fs::path& p) {
    auto cmd = args;
    cmd.push_back("--out");
    cmd.push_back(p.string());
    REQUIRE(run_cli(cmd) == 0);
    nlohmann::json rep = load_json(p);
    rep.erase("volatile");
    return rep;
  };
  nlohmann::json ra = run(a), rb = run(b);
  // Byte-level comparison of the canonical part, not just tree equality.
  CHECK(ra.dump() == rb.dump());
  // The config echo round-trips identically as well.
  CHECK(ra["config"].dump() == rb["config"].dump());
}
