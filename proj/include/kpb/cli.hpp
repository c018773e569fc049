#pragma once

// Batch command-line surface.  Every run writes a JSON report whose canonical
// part (everything outside the "volatile" subtree) is byte-identical across
// reruns with the same flags; timestamps and runtimes live under "volatile".
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 solver
// failure.

#include <kpb/copositive.hpp>
#include <kpb/graph.hpp>
#include <kpb/hierarchies.hpp>
#include <kpb/sdpa.hpp>
#include <kpb/selftest.hpp>
#include <kpb/transfer.hpp>
#include <kpb/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace kpb {

inline Graph parse_graph_spec(const std::string& spec, std::uint64_t default_seed = 0) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<std::string> parts;
  std::istringstream ps(params);
  std::string tok;
  while (std::getline(ps, tok, ',')) parts.push_back(tok);

  auto want = [&](std::size_t lo, std::size_t hi) {
    require(parts.size() >= lo && parts.size() <= hi,
            "graph spec '" + spec + "': wrong number of parameters");
  };
  try {
    if (name == "petersen" && colon == std::string::npos) return make_petersen();
    if (name == "cycle") {
      want(1, 1);
      return make_cycle(std::stoi(parts[0]));
    }
    if (name == "path") {
      want(1, 1);
      return make_path(std::stoi(parts[0]));
    }
    if (name == "complete") {
      want(1, 1);
      return make_complete(std::stoi(parts[0]));
    }
    if (name == "empty") {
      want(1, 1);
      return make_empty(std::stoi(parts[0]));
    }
    if (name == "kneser") {
      want(2, 2);
      return make_kneser(std::stoi(parts[0]), std::stoi(parts[1]));
    }
    if (name == "gnp") {
      want(2, 3);
      std::uint64_t seed = parts.size() == 3 ? std::stoull(parts[2]) : default_seed;
      return make_gnp(std::stoi(parts[0]), std::stod(parts[1]), seed);
    }
    if (name == "file") {
      want(1, 1);
      std::ifstream in(parts[0]);
      require(in.good(), "graph spec: cannot open file " + parts[0]);
      std::stringstream buf;
      buf << in.rdbuf();
      return parse_dimacs(buf.str());
    }
  } catch (const std::invalid_argument&) {
    throw Error("graph spec '" + spec + "': bad numeric parameter");
  } catch (const std::out_of_range&) {
    throw Error("graph spec '" + spec + "': numeric parameter out of range");
  }
  // Fall back to a DIMACS file path.
  std::ifstream in(spec);
  if (in.good()) {
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dimacs(buf.str());
  }
  throw Error("unknown graph spec '" + spec + "'");
}

namespace cli_detail {

inline nlohmann::json value_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

struct ReportBuilder {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json table = nlohmann::json::array();
  nlohmann::json extra = nlohmann::json::object();
  nlohmann::json runtimes = nlohmann::json::object();
  CheckSet checks;

  void add_row(const std::string& graph, const std::string& kind, int param, double value,
               SolveStatus status, double runtime) {
    table.push_back({{"graph", graph},
                     {"kind", kind},
                     {"param", param},
                     {"value", value_json(value)},
                     {"status", to_string(status)}});
    runtimes[kind + ":" + std::to_string(param)] = runtime;
  }

  nlohmann::json assemble() const {
    nlohmann::json out;
    out["schema"] = kReportSchema;
    out["version"] = kVersion;
    out["command"] = command;
    out["config"] = config;
    out["checks"] = to_json(checks);
    out["table"] = table;
    if (!extra.empty()) out["extra"] = extra;
    out["pass"] = checks.all_pass();
    out["volatile"] = {{"timestamp", utc_timestamp()}, {"runtimes", runtimes}};
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write report to " + path);
    out << assemble().dump(2) << "\n";
  }
};

inline int finish(ReportBuilder& rep, const std::string& out_path, bool solver_ok = true) {
  rep.write(out_path);
  nlohmann::json summary = rep.assemble();
  summary.erase("volatile");
  std::fputs((summary.dump(2) + "\n").c_str(), stdout);
  if (!solver_ok) return 3;
  return rep.checks.all_pass() ? 0 : 1;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args) {
  using cli_detail::ReportBuilder;
  using nlohmann::json;

  CLI::App app{"Convergent upper-bound hierarchies for graph independence numbers"};
  app.require_subcommand(1);

  std::string graph_spec, out_path = "report.json", csv_path, program_kind = "delta";
  std::string engine_name = "auto", form_name = "full";
  int k = 2, r = 1, kmax = 4, rmax = 2, rcap = 6, mix_r = 3, jobs = 1;
  double tol = 1e-8, feas_tol = 1e-6, theta = 0.25, epsilon = 0.0;
  std::uint64_t seed = 0;
  bool exact_mode = false;

  auto add_common = [&](CLI::App* cmd, bool needs_graph = true) {
    if (needs_graph)
      cmd->add_option("--graph", graph_spec, "graph spec (name:params or DIMACS path)")
          ->required();
    cmd->add_option("--out", out_path, "JSON report path");
    cmd->add_option("--tol", tol, "solver tolerance");
    cmd->add_option("--feas-tol", feas_tol, "feasibility check tolerance");
    cmd->add_option("--seed", seed, "seed for gnp specs without one");
  };

  auto* cmd_alpha = app.add_subcommand("alpha", "exact independence number");
  add_common(cmd_alpha);

  auto* cmd_delta = app.add_subcommand("delta", "split bound at level k");
  add_common(cmd_delta);
  cmd_delta->add_option("--k", k, "level (k >= 2)")->required();

  auto* cmd_xd = app.add_subcommand("xi-dual", "symmetrized-cone bound, dual LP");
  add_common(cmd_xd);
  cmd_xd->add_option("--r", r, "level (r >= 0)")->required();
  cmd_xd->add_flag("--exact", exact_mode, "force the exact simplex engine");
  cmd_xd->add_option("--engine", engine_name, "auto|ipm|exact");

  auto* cmd_xp = app.add_subcommand("xi-primal", "symmetrized-cone bound, primal LP");
  add_common(cmd_xp);
  cmd_xp->add_option("--r", r, "level (r >= 0)")->required();
  cmd_xp->add_flag("--exact", exact_mode, "force the exact simplex engine");
  cmd_xp->add_option("--engine", engine_name, "auto|ipm|exact");

  auto* cmd_sweep = app.add_subcommand("sweep", "bound table across both hierarchies");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--kmax", kmax, "largest split level");
  cmd_sweep->add_option("--rmax", rmax, "largest symmetrized level");
  cmd_sweep->add_option("--jobs", jobs, "parallel solve slots");
  cmd_sweep->add_option("--csv", csv_path, "CSV table path");

  auto* cmd_tv = app.add_subcommand("transfer-verify",
                                    "solve the split bound and verify the transferred pair");
  add_common(cmd_tv);
  cmd_tv->add_option("--r", r, "target level (solves the split bound at k = r+2)")->required();

  auto* cmd_cert = app.add_subcommand("certify", "interior-kernel certificate pipeline");
  add_common(cmd_cert);
  cmd_cert->add_option("--theta", theta, "interior mixture weight (0, 1/3]");
  cmd_cert->add_option("--rcap", rcap, "largest level to scan");
  cmd_cert->add_option("--epsilon", epsilon, "mix a dual witness toward the interior kernel");
  cmd_cert->add_option("--mix-r", mix_r, "dual witness level used with --epsilon");
  cmd_cert->add_flag("--exact", exact_mode, "rationalized exact membership sums");

  auto* cmd_export = app.add_subcommand("export-sdpa", "export a program in sparse SDPA text");
  add_common(cmd_export);
  cmd_export->add_option("--program", program_kind, "delta|xi-dual|xi-primal");
  cmd_export->add_option("--k", k, "split level");
  cmd_export->add_option("--r", r, "symmetrized level");
  cmd_export->add_option("--form", form_name, "delta form: full|reduced");
  cmd_export->add_option("--sdpa-out", csv_path, "output .dat-s path")->required();

  auto* cmd_self = app.add_subcommand("selftest", "run the invariant battery");
  add_common(cmd_self, false);

  std::vector<const char*> argv{"kpbound"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ReportBuilder rep;
  rep.config["tol"] = tol;
  rep.config["feas_tol"] = feas_tol;
  rep.config["out"] = out_path;
  rep.config["seed"] = seed;

  try {
    if (app.got_subcommand(cmd_self)) {
      rep.command = "selftest";
      rep.checks = run_selftest();
      return cli_detail::finish(rep, out_path);
    }

    Graph g = parse_graph_spec(graph_spec, seed);
    rep.config["graph"] = graph_spec;

    if (app.got_subcommand(cmd_alpha)) {
      rep.command = "alpha";
      auto t0 = std::chrono::steady_clock::now();
      int a = alpha_exact(g);
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rep.add_row(graph_spec, "alpha", 0, a, SolveStatus::Optimal, dt);
      return cli_detail::finish(rep, out_path);
    }

    if (app.got_subcommand(cmd_delta)) {
      rep.command = "delta";
      rep.config["k"] = k;
      BoundResult res = solve_delta(g, k, {tol});
      rep.add_row(graph_spec, "delta", k, res.value, res.status, res.runtime_sec);
      rep.checks = res.verification;
      return cli_detail::finish(rep, out_path, !std::isnan(res.value));
    }

    if (app.got_subcommand(cmd_xd) || app.got_subcommand(cmd_xp)) {
      bool dual = app.got_subcommand(cmd_xd);
      rep.command = dual ? "xi-dual" : "xi-primal";
      rep.config["r"] = r;
      rep.config["engine"] = exact_mode ? "exact" : engine_name;
      LpEngine engine = exact_mode || engine_name == "exact" ? LpEngine::ExactSimplex
                        : engine_name == "ipm"               ? LpEngine::Ipm
                                                             : LpEngine::Auto;
      BoundResult res = dual ? solve_xi_dual(g, r, {tol}, engine)
                             : solve_xi_primal(g, r, {tol}, engine);
      rep.add_row(graph_spec, rep.command, r, res.value, res.status, res.runtime_sec);
      rep.checks = res.verification;
      if (res.exact_value) rep.extra["exact_value"] = to_string(*res.exact_value);
      bool solver_ok = !std::isnan(res.value);
      return cli_detail::finish(rep, out_path, solver_ok);
    }

    if (app.got_subcommand(cmd_sweep)) {
      rep.command = "sweep";
      rep.config["kmax"] = kmax;
      rep.config["rmax"] = rmax;
      rep.config["jobs"] = jobs;
      if (!csv_path.empty()) rep.config["csv"] = csv_path;
      SweepResult sw = hierarchy_sweep(g, kmax, rmax, {tol}, jobs);
      for (const auto& row : sw.rows)
        rep.add_row(graph_spec, row.kind, row.param, row.value, row.status, row.runtime_sec);
      rep.checks = sw.flags;
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        require(csv.good(), "cannot write CSV to " + csv_path);
        csv << "graph,kind,param,value,status,runtime_sec\n";
        for (const auto& row : sw.rows) {
          char value_buf[32];
          std::snprintf(value_buf, sizeof(value_buf), "%.9g", row.value);
          csv << graph_spec << "," << row.kind << "," << row.param << "," << value_buf << ","
              << to_string(row.status) << "," << std::fixed << row.runtime_sec << "\n";
          csv.unsetf(std::ios_base::floatfield);
        }
      }
      return cli_detail::finish(rep, out_path);
    }

    if (app.got_subcommand(cmd_tv)) {
      rep.command = "transfer-verify";
      rep.config["r"] = r;
      BoundResult res = solve_delta(g, r + 2, {tol});
      rep.add_row(graph_spec, "delta", r + 2, res.value, res.status, res.runtime_sec);
      if (std::isnan(res.value)) return cli_detail::finish(rep, out_path, false);
      auto nu = to_rational(res.witness);
      TransferResult tr = transfer(g, nu, r);
      rep.checks = verify_transfer(g, r, tr, nu, feas_tol);
      rep.checks.merge(moment_psd_check(tr.phi, r, feas_tol));
      json phis = json::array();
      for (const auto& p : tr.phi.phi) phis.push_back(to_double(p));
      rep.extra["phi"] = phis;
      rep.extra["alpha_total_mass"] = to_double(tr.alpha.total());
      return cli_detail::finish(rep, out_path);
    }

    if (app.got_subcommand(cmd_cert)) {
      rep.command = "certify";
      rep.config["theta"] = theta;
      rep.config["rcap"] = rcap;
      rep.config["epsilon"] = epsilon;
      rep.config["exact"] = exact_mode;
      Eigen::MatrixXd f;
      try {
        f = find_F(g, {tol});
      } catch (const Error& e) {
        std::fprintf(stderr, "certify: %s\n", e.what());
        return cli_detail::finish(rep, out_path, false);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f, Eigen::EigenvaluesOnly);
      rep.checks.check_le("kernel min eigenvalue (-)", -es.eigenvalues().minCoeff(), 0,
                          1e-7 * (1 + f.norm()));
      double worst_ne = 0;
      for (auto [x, y] : g.non_edges()) worst_ne = std::max(worst_ne, f(x, y) + 1);
      if (!g.non_edges().empty())
        rep.checks.check_le("kernel non-edge bound (+1)", worst_ne, 0, 1e-6);
      Eigen::MatrixXd z0 = build_Z0(f, theta, g);
      double worst_z0 = 0;
      for (auto [x, y] : g.non_edges()) worst_z0 = std::max(worst_z0, z0(x, y) + 1);
      if (!g.non_edges().empty())
        rep.checks.check_le("interior kernel non-edge bound (+1)", worst_z0, 0, 1e-6);
      MinRResult mr = min_r(z0, rcap, exact_mode ? CertMode::Exact : CertMode::Float);
      rep.extra["min_r"] = to_json(mr);
      if (mr.found)
        rep.checks.check_true("certificate revalidates under tuple enumeration",
                              revalidate_by_tuples(z0, mr.r));
      if (epsilon > 0) {
        BoundResult xd = solve_xi_dual(g, mix_r, {tol});
        if (std::isnan(xd.value) || !xd.lambda) return cli_detail::finish(rep, out_path, false);
        double lambda0 = 1 + z0.diagonal().maxCoeff();
        PerturbReport pr = perturb_certify(g, xd.kernel, *xd.lambda, z0, lambda0, epsilon,
                                           rcap, exact_mode ? CertMode::Exact : CertMode::Float,
                                           feas_tol);
        rep.checks.merge(pr.checks);
        rep.extra["perturb"] = to_json(pr);
      }
      return cli_detail::finish(rep, out_path);
    }

    if (app.got_subcommand(cmd_export)) {
      rep.command = "export-sdpa";
      rep.config["program"] = program_kind;
      rep.config["sdpa_out"] = csv_path;
      std::string text;
      if (program_kind == "delta") {
        rep.config["k"] = k;
        rep.config["form"] = form_name;
        DeltaForm form = form_name == "reduced" ? DeltaForm::Reduced : DeltaForm::Full;
        text = export_sdpa(build_delta(g, k, form).program);
      } else if (program_kind == "xi-dual") {
        rep.config["r"] = r;
        text = export_sdpa(build_xi_dual(g, r).program);
      } else if (program_kind == "xi-primal") {
        rep.config["r"] = r;
        text = export_sdpa(build_xi_primal(g, r).program);
      } else {
        throw Error("export-sdpa: unknown program kind '" + program_kind + "'");
      }
      std::ofstream out(csv_path, std::ios::binary);
      require(out.good(), "cannot write SDPA file to " + csv_path);
      out << text;
      rep.extra["sdpa_bytes"] = text.size();
      return cli_detail::finish(rep, out_path);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    std::string what = e.what();
    // Input and spec problems are usage errors; everything else is a solver
    // failure.
    if (what.find("graph spec") != std::string::npos || what.find("must be") != std::string::npos)
      return 2;
    return 3;
  }
  return 2;
}

}  // namespace kpb
