#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "checks.hpp"

namespace chaplie::app {

namespace {

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

std::string csv_cell(const Json& j) {
  if (j.is_number()) return csv_number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  std::string s = j.dump();
  for (auto& c : s)
    if (c == ',') c = ';';
  return s;
}

Json state_json(const PhaseState& x) { return Json{{"s", to_json(x.s)}, {"u", to_json(x.u)}}; }

}  // namespace

CommandOutput cmd_roots(const std::string& id, std::uint64_t seed, bool bases) {
  const AlgebraSpec spec = parse_algebra_id(id);
  const AlgebraStructure st = build_structure(spec, seed);
  CommandOutput out;
  out.report = Json{{"command", "roots"}, {"id", spec.id()}};
  const Json datum = root_datum_json(st, bases);
  for (const auto& [k, v] : datum.items()) out.report[k] = v;

  std::ostringstream csv;
  csv << "label,coefficients,values,length,multiplicity\n";
  for (const auto& r : out.report["positive_roots"])
    csv << csv_cell(r["label"]) << "," << csv_cell(r["coefficients"]) << "," << csv_cell(r["values"]) << ","
        << csv_cell(r["length"]) << "," << csv_cell(r["multiplicity"]) << "\n";
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
  const ChaplyginModel model = build_model(cfg);
  const PhaseState x0 = initial_state(cfg, model);
  const Trajectory traj = integrate(model, x0, cfg.integrator);
  const DriftReport dr = drift(traj);
  const double e_tol = cfg.threshold("energy_drift", 1e-8);
  const double j_tol = cfg.threshold("momentum_drift", 1e-7);

  CommandOutput out;
  Json& r = out.report;
  r["command"] = "simulate";
  r["config"] = config_echo(cfg, model);
  r["integrator"] = Json{{"h", cfg.integrator.h},
                         {"T", cfg.integrator.T},
                         {"reorthonormalize", cfg.integrator.reorthonormalize},
                         {"sample_every", cfg.integrator.sample_every}};
  r["initial_state"] = state_json(x0);
  r["final_state"] = state_json(traj.samples.back().state);
  r["samples"] = traj.samples.size();
  r["drift"] = drift_json(dr);
  r["thresholds"] = Json{{"energy_drift", e_tol}, {"momentum_drift", j_tol}};
  r["max_reortho_drift"] = traj.max_reortho_drift;
  bool pass = dr.energy_rel < e_tol && dr.momentum < j_tol;
  if (cfg.run_oracle) {
    const OracleRun o = run_oracle(model, x0, cfg.oracle);
    r["oracle"] = Json{{"h", cfg.oracle.h},
                       {"T", cfg.oracle.T},
                       {"sup_distance", o.distance},
                       {"tolerance", cfg.oracle.tolerance},
                       {"constraint", o.constraint},
                       {"ladder", cfg.oracle.ladder},
                       {"ladder_distances", o.ladder_distances},
                       {"monotone", o.monotone}};
    pass = pass && o.distance < cfg.oracle.tolerance && o.monotone;
  }
  r["pass"] = pass;
  out.code = pass ? ok : criterion_fail;

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  out.csv = csv.str();
  out.files.emplace_back(cfg.prefix + "_trajectory.csv", out.csv);
  return out;
}

CommandOutput cmd_check_ham(const RunConfig& cfg) {
  const ChaplyginModel model = build_model(cfg);
  const HamResidualReport rep = check_hamiltonizable(model, cfg.samples.ham_samples, cfg.seed, cfg.ham_thresholds);
  CommandOutput out;
  Json& r = out.report;
  r["command"] = "check-ham";
  const Json echo = config_echo(cfg, model);
  for (const char* k : {"family", "params", "w0", "inertia", "seed"}) r[k] = echo[k];
  r["m"] = model.m();
  const Json ham = ham_report_json(model, rep);
  for (const auto& [k, v] : ham.items()) r[k] = v;
  out.code = rep.verdict == Verdict::pass ? ok : rep.verdict == Verdict::fail ? criterion_fail : inconclusive;

  std::ostringstream csv;
  csv << "kappa,mu,nu,lhs,rhs,residual\n";
  for (const auto& t : r["per_triple_top10"])
    csv << csv_cell(t["kappa"]) << "," << csv_cell(t["mu"]) << "," << csv_cell(t["nu"]) << "," << csv_cell(t["lhs"])
        << "," << csv_cell(t["rhs"]) << "," << csv_cell(t["residual"]) << "\n";
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_verify(const RunConfig& cfg) {
  const ChaplyginModel model = build_model(cfg);
  const VerificationReport rep = run_verifications(cfg, model);
  CommandOutput out;
  out.report = Json{{"command", "verify"}, {"config", config_echo(cfg, model)}};
  const Json table = rep.to_json();
  for (const auto& [k, v] : table.items()) out.report[k] = v;
  out.code = rep.all_pass() ? ok : criterion_fail;

  std::ostringstream csv;
  csv << "group,name,value,relation,threshold,pass\n";
  for (const auto& c : rep.checks)
    csv << c.group << "," << c.name << "," << csv_cell(c.value) << "," << c.relation << "," << csv_cell(c.threshold)
        << "," << (c.pass ? (*c.pass ? "true" : "false") : "") << "\n";
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_oracle(const RunConfig& cfg) {
  const ChaplyginModel model = build_model(cfg);
  const PhaseState x0 = initial_state(cfg, model);
  const OracleRun o = run_oracle(model, x0, cfg.oracle);
  CommandOutput out;
  Json& r = out.report;
  r["command"] = "oracle";
  r["config"] = config_echo(cfg, model);
  r["initial_state"] = state_json(x0);
  r["h"] = cfg.oracle.h;
  r["T"] = cfg.oracle.T;
  r["sup_distance"] = o.distance;
  r["tolerance"] = cfg.oracle.tolerance;
  r["constraint"] = o.constraint;
  r["ladder"] = cfg.oracle.ladder;
  r["ladder_distances"] = o.ladder_distances;
  r["monotone"] = o.monotone;
  const bool pass = o.distance < cfg.oracle.tolerance && o.monotone;
  r["pass"] = pass;
  out.code = pass ? ok : criterion_fail;

  std::ostringstream csv;
  csv << "h,sup_distance\n";
  for (std::size_t i = 0; i < cfg.oracle.ladder.size(); ++i)
    csv << csv_number(cfg.oracle.ladder[i]) << "," << csv_number(o.ladder_distances[i]) << "\n";
  csv << csv_number(cfg.oracle.h) << "," << csv_number(o.distance) << "\n";
  out.csv = csv.str();
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chaplie: Chaplygin systems on Cartan decompositions", "chaplie"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out-dir", out_dir, "Directory for report and trajectory files");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");

  std::string algebra_id, config_path;
  bool bases = false;
  auto* roots = app.add_subcommand("roots", "Restricted roots, multiplicities and dimensions");
  roots->add_option("id", algebra_id, "Algebra id: so:p,q  sl:n  sp:n  g2")->required();
  roots->add_flag("--bases", bases, "Include the adapted bases");
  std::vector<CLI::App*> config_cmds{
      app.add_subcommand("simulate", "Integrate the compressed system and report drift"),
      app.add_subcommand("check-ham", "Hamiltonizability verdict at zero momentum"),
      app.add_subcommand("verify", "Run the verification suite"),
      app.add_subcommand("oracle", "Compare against the full constrained system")};
  for (auto* c : config_cmds) c->add_option("-c,--config", config_path, "Run config (JSON)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  try {
    CommandOutput result;
    std::string command;
    if (roots->parsed()) {
      command = "roots";
      result = cmd_roots(algebra_id, seed, bases);
    } else {
      RunConfig cfg = load_config(config_path);
      if (seed_opt->count()) cfg.seed = seed;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      out_dir = cfg.out_dir;
      for (auto* c : config_cmds)
        if (c->parsed()) command = c->get_name();
      if (command == "simulate") result = cmd_simulate(cfg);
      else if (command == "check-ham") result = cmd_check_ham(cfg);
      else if (command == "verify") result = cmd_verify(cfg);
      else result = cmd_oracle(cfg);
      if (!out_dir.empty()) result.files.emplace_back(cfg.prefix + "_" + command + ".json", dump(result.report));
    }
    if (!out_dir.empty()) {
      if (command == "roots") result.files.emplace_back("roots.json", dump(result.report));
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw InputError("cannot create output directory " + out_dir);
      for (const auto& [name, contents] : result.files) {
        std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
        if (!(f << contents)) throw InputError("cannot write " + name + " in " + out_dir);
      }
    }
    out << (format == "csv" ? result.csv : dump(result.report));
    return result.code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const ConstructionError& e) {
    err << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return numerical_error;
  }
}

}  // namespace chaplie::app
