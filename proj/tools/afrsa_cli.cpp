// Command-line front end: gen / solve / sweep / validate.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 a per-alpha solve hit its time budget (outputs are still written).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "afrsa/errors.hpp"
#include "afrsa/harness.hpp"

namespace {

using namespace afrsa;

struct CommonFlags {
  ExperimentConfig cfg;
  std::string mode = "exact";
  std::string grid_spec;
  double alpha = 0.0;
};

void add_instance_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--topology", f.cfg.topology,
                  "builtin name (dt14) or path to a topology json");
  cmd->add_option("--connections", f.cfg.connections_path,
                  "connections json; omitted: generated from the seed");
  cmd->add_option("--n", f.cfg.n, "number of connections");
  cmd->add_option("--m", f.cfg.m, "menu entries per connection");
  cmd->add_option("--M", f.cfg.M, "slots per link (builtin topologies)");
  cmd->add_option("--T", f.cfg.T, "fluctuation samples per connection");
  cmd->add_option("--seed", f.cfg.seed, "run seed");
  cmd->add_option("--epsilon", f.cfg.epsilon, "normalized-utility epsilon");
}

void add_solver_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--mode", f.mode, "exact | heuristic")
      ->check(CLI::IsMember({"exact", "heuristic"}));
  cmd->add_option("--time-budget-secs", f.cfg.solver.time_budget_secs,
                  "per-solve wall-clock budget");
  cmd->add_option("--node-limit", f.cfg.solver.node_limit,
                  "search nodes per component (-1 unlimited); the "
                  "deterministic budget");
  cmd->add_option("--cut-limit", f.cfg.solver.cut_limit,
                  "stage-B conflict cuts before degrading sizes");
  cmd->add_flag("--strict-boundary", f.cfg.solver.strict_boundary,
                "keep slot 1 unused on every connection");
}

void finish_config(CommonFlags& f) {
  f.cfg.solver.mode = f.mode == "exact" ? SolverMode::exact
                                        : SolverMode::two_stage_heuristic;
  if (!f.grid_spec.empty()) {
    double a = 0, b = 0, s = 0;
    if (std::sscanf(f.grid_spec.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
      throw ConfigError("--alpha-grid expects start:stop:step");
    f.cfg.grid = AlphaGrid{a, b, s};
  }
}

int run_gen(CommonFlags& f, bool dump_fluct) {
  finish_config(f);
  if (f.cfg.out_dir.empty()) throw ConfigError("gen requires --out");
  const Instance inst = generate_instance(f.cfg);
  namespace fs = std::filesystem;
  fs::create_directories(f.cfg.out_dir);
  {
    std::ofstream out(fs::path(f.cfg.out_dir) / "topology.json", std::ios::binary);
    out << topology_to_json(inst.topology).dump(2) << '\n';
  }
  {
    std::ofstream out(fs::path(f.cfg.out_dir) / "connections.json", std::ios::binary);
    out << connections_to_json(inst.connections, inst.topology).dump(2) << '\n';
  }
  if (dump_fluct) {
    std::vector<TrafficModel> models;
    for (const ConnectionRequest& c : inst.connections) models.push_back(c.traffic);
    const FluctuationSet fl = sample_fluctuations(models, f.cfg.T, f.cfg.seed);
    std::ofstream out(fs::path(f.cfg.out_dir) / "fluctuations.csv", std::ios::binary);
    write_fluctuations_csv(out, fl);
  }
  std::cout << "instance written to " << f.cfg.out_dir << "\n";
  return 0;
}

int run_sweep_cmd(CommonFlags& f) {
  finish_config(f);
  const SweepResult res = run_sweep(f.cfg);
  std::cout << sweep_csv(res);
  if (!f.cfg.out_dir.empty())
    std::cerr << "sweep written to " << f.cfg.out_dir << "\n";
  return res.any_timeout ? 3 : 0;
}

int run_solve(CommonFlags& f) {
  finish_config(f);
  f.cfg.grid = AlphaGrid{f.alpha, f.alpha, 1.0};
  const SweepResult res = run_sweep(f.cfg);
  const SweepEntry* entry = nullptr;
  for (const SweepEntry& e : res.entries)
    if (e.alpha == f.alpha) entry = &e;
  std::ostringstream alloc_csv;
  write_allocation_csv(alloc_csv, entry->allocation);
  std::cout << alloc_csv.str();
  std::cout << "# objective " << entry->allocation.objective << ", served "
            << entry->allocation.served << ", "
            << (entry->allocation.proof == ProofStatus::exact_optimal
                    ? "exact-optimal"
                    : "heuristic")
            << "\n";
  return res.any_timeout ? 3 : 0;
}

int run_validate(CommonFlags& f, const std::string& alloc_path) {
  finish_config(f);
  const Pipeline pipe = prepare(f.cfg);
  std::ifstream in(alloc_path);
  if (!in) throw ConfigError("cannot open allocation file: " + alloc_path);
  const Allocation alloc = read_allocation_csv(in);
  const ValidationReport rep =
      validate_allocation(alloc, pipe.P, pipe.U,
                          pipe.instance.topology.slots_per_link,
                          f.cfg.solver.strict_boundary);
  if (rep.ok) {
    std::cout << "allocation is feasible\n";
    return 0;
  }
  for (const std::string& v : rep.violations) std::cout << v << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-fair routing and spectrum allocation toolkit"};
  app.require_subcommand(1);

  CommonFlags f;
  bool dump_fluct = false;
  std::string alloc_path;

  CLI::App* gen = app.add_subcommand("gen", "emit instance files");
  add_instance_flags(gen, f);
  gen->add_option("--out", f.cfg.out_dir, "output directory")->required();
  gen->add_flag("--dump-fluctuations", dump_fluct, "also write fluctuations.csv");

  CLI::App* solve = app.add_subcommand("solve", "solve one alpha");
  add_instance_flags(solve, f);
  add_solver_flags(solve, f);
  solve->add_option("--alpha", f.alpha, "inequality aversion")->required();
  solve->add_option("--out", f.cfg.out_dir, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "solve an alpha grid");
  add_instance_flags(sweep, f);
  add_solver_flags(sweep, f);
  sweep->add_option("--alpha-grid", f.grid_spec, "start:stop:step");
  sweep->add_option("--out", f.cfg.out_dir, "output directory");

  CLI::App* validate = app.add_subcommand("validate", "check an allocation dump");
  add_instance_flags(validate, f);
  validate->add_flag("--strict-boundary", f.cfg.solver.strict_boundary,
                     "keep slot 1 unused on every connection");
  validate->add_option("--allocation", alloc_path, "allocation csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen(f, dump_fluct);
    if (solve->parsed()) return run_solve(f);
    if (sweep->parsed()) return run_sweep_cmd(f);
    if (validate->parsed()) return run_validate(f, alloc_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
