#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afrsa/metrics.hpp"
#include "afrsa/solver.hpp"
#include "afrsa/topology.hpp"
#include "afrsa/traffic.hpp"
#include "afrsa/welfare.hpp"

namespace afrsa {

struct AlphaGrid {
  double start = 0.0;
  double stop = 5.0;
  double step = 0.1;

  std::vector<double> points() const;
  void validate() const;
};

struct ExperimentConfig {
  std::string topology = "dt14";   // builtin name or path to a json file
  std::string connections_path;    // empty: generate from the seed
  int n = 20;
  int m = 50;
  int M = 100;
  int T = 1000;
  AlphaGrid grid;
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
  SolverConfig solver;
  std::string out_dir;  // empty: nothing written

  void validate() const;
};

struct Instance {
  Topology topology;
  std::vector<ConnectionRequest> connections;
};

// Loads or seeds an instance: n distinct routable source-destination pairs
// with per-connection log-normal parameters mu ~ unif(2.5, 4.5) and
// sigma2 ~ unif(0, 1).
Instance generate_instance(const ExperimentConfig& config);

// Everything derived from the instance that the per-alpha solves share.
struct Pipeline {
  Instance instance;
  std::vector<Route> routes;
  LinkUtilizationMatrix P;
  FluctuationSet fluctuations;
  std::vector<int> peaks;
  UtilityMatrix U;
  NormalizedUtilityMatrix Un;
};

Pipeline prepare(const ExperimentConfig& config);

struct SweepEntry {
  double alpha = 0.0;
  Allocation allocation;
  MetricsReport metrics;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // grid order; alpha = 0 baseline included
  std::string fingerprint;
  bool any_timeout = false;
};

// Solves every grid point (plus the alpha = 0 baseline when the grid omits
// it), evaluates the metrics against one shared fluctuation set, and writes
// sweep.csv / per-alpha allocation dumps / run_config.json under out_dir.
SweepResult run_sweep(const ExperimentConfig& config);

std::string sweep_csv(const SweepResult& result);
std::string instance_fingerprint(const ExperimentConfig& config,
                                 const Instance& instance);

}  // namespace afrsa
