#include "afrsa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "afrsa/csv.hpp"
#include "afrsa/errors.hpp"
#include "afrsa/rng.hpp"

namespace afrsa {

namespace {

// Substream tags for the run-level random streams; fluctuation sampling
// uses streams 0..n-1, so these stay far away.
constexpr std::uint64_t kPairStream = 0x700000001ULL;
constexpr std::uint64_t kParamStream = 0x700000002ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a_str(std::uint64_t h, const std::string& s) {
  return fnv1a(h, s.data(), s.size());
}

std::uint64_t fnv1a_dbl(std::uint64_t h, double v) {
  return fnv1a(h, &v, sizeof(v));
}

std::uint64_t fnv1a_int(std::uint64_t h, long long v) {
  return fnv1a(h, &v, sizeof(v));
}

std::string alpha_label(double a) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", a);
  return buf;
}

}  // namespace

std::vector<double> AlphaGrid::points() const {
  validate();
  const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts[static_cast<std::size_t>(i)] = start + i * step;
  return pts;
}

void AlphaGrid::validate() const {
  if (!(step > 0.0)) throw ConfigError("alpha grid step must be positive");
  if (stop < start) throw ConfigError("alpha grid stop must be >= start");
  if (start < 0.0) throw ConfigError("alpha must be >= 0");
}

void ExperimentConfig::validate() const {
  grid.validate();
  solver.validate();
  if (n < 1) throw ConfigError("need at least one connection");
  if (T < 1) throw ConfigError("need at least one fluctuation sample");
  if (m < 1) throw ConfigError("menu size must be >= 1");
  if (M < 1) throw ConfigError("slot count must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

Instance generate_instance(const ExperimentConfig& config) {
  config.validate();
  Instance inst;
  if (config.topology == "dt14")
    inst.topology = dt14_topology(config.M);
  else
    inst.topology = load_topology_file(config.topology);

  if (!config.connections_path.empty()) {
    inst.connections =
        load_connections_file(config.connections_path, inst.topology);
    if (static_cast<int>(inst.connections.size()) != config.n)
      throw ConfigError("connections file holds " +
                        std::to_string(inst.connections.size()) +
                        " connections, config expects " + std::to_string(config.n));
    return inst;
  }

  const int nn = static_cast<int>(inst.topology.nodes.size());
  if (nn < 2) throw ConfigError("topology too small to place connections");

  Rng pair_rng(substream_seed(config.seed, kPairStream));
  Rng param_rng(substream_seed(config.seed, kParamStream));
  std::set<std::pair<int, int>> used;
  int guard = 0;
  for (int i = 0; i < config.n; ++i) {
    for (;;) {
      if (++guard > 100000)
        throw ConfigError("could not draw enough distinct routable pairs");
      const int s = static_cast<int>(pair_rng.below(static_cast<std::uint64_t>(nn)));
      const int d = static_cast<int>(pair_rng.below(static_cast<std::uint64_t>(nn)));
      if (s == d || used.count({s, d})) continue;
      try {
        shortest_route(inst.topology, s, d);
      } catch (const NoPathError&) {
        continue;
      }
      used.insert({s, d});
      ConnectionRequest c;
      c.id = i;
      c.source = s;
      c.destination = d;
      c.traffic.mu = param_rng.uniform(2.5, 4.5);
      do {
        c.traffic.sigma2 = param_rng.uniform(0.0, 1.0);
      } while (c.traffic.sigma2 == 0.0);
      c.traffic.scale_divisor = 2.0;
      c.traffic.cap = inst.topology.slots_per_link;
      inst.connections.push_back(c);
      break;
    }
  }
  return inst;
}

Pipeline prepare(const ExperimentConfig& config) {
  Pipeline p;
  p.instance = generate_instance(config);
  const int M = p.instance.topology.slots_per_link;
  p.routes = compute_routes(p.instance.topology, p.instance.connections);
  p.P = build_link_utilization(p.routes, p.instance.topology, config.n);
  std::vector<TrafficModel> models;
  models.reserve(p.instance.connections.size());
  for (const ConnectionRequest& c : p.instance.connections)
    models.push_back(c.traffic);
  p.fluctuations = sample_fluctuations(models, config.T, config.seed);
  p.peaks = peak_demands(p.fluctuations, M);
  p.U = build_utility_matrix(p.peaks, M, config.m);
  p.Un = normalize_utilities(p.U, p.peaks, config.epsilon);
  return p;
}

std::string instance_fingerprint(const ExperimentConfig& config,
                                 const Instance& instance) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const std::string& s : instance.topology.nodes) h = fnv1a_str(h, s);
  for (const Link& l : instance.topology.links) {
    h = fnv1a_int(h, l.id);
    h = fnv1a_int(h, l.a);
    h = fnv1a_int(h, l.b);
    h = fnv1a_dbl(h, l.length ? *l.length : -1.0);
  }
  h = fnv1a_int(h, instance.topology.slots_per_link);
  for (const ConnectionRequest& c : instance.connections) {
    h = fnv1a_int(h, c.id);
    h = fnv1a_int(h, c.source);
    h = fnv1a_int(h, c.destination);
    h = fnv1a_dbl(h, c.traffic.mu);
    h = fnv1a_dbl(h, c.traffic.sigma2);
    h = fnv1a_dbl(h, c.traffic.scale_divisor);
    h = fnv1a_dbl(h, c.traffic.cap);
  }
  h = fnv1a_int(h, config.n);
  h = fnv1a_int(h, config.m);
  h = fnv1a_int(h, config.T);
  h = fnv1a_int(h, static_cast<long long>(config.seed));
  h = fnv1a_dbl(h, config.epsilon);
  h = fnv1a_dbl(h, config.grid.start);
  h = fnv1a_dbl(h, config.grid.stop);
  h = fnv1a_dbl(h, config.grid.step);
  h = fnv1a_int(h, static_cast<long long>(config.solver.mode));
  h = fnv1a_int(h, config.solver.strict_boundary ? 1 : 0);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "alpha,blocking_pct,utilization_fs_link,cop,cup,icop,icup,cv_u,"
        "cv_uminus,utilization_fs\n";
  for (const SweepEntry& e : result.entries) {
    const MetricsReport& r = e.metrics;
    os << csv_num(e.alpha) << ',' << csv_num(r.blocking_percent) << ','
       << csv_num(r.utilization_fs_link) << ',' << csv_num(r.cop) << ','
       << csv_num(r.cup) << ',' << csv_opt(r.icop) << ',' << csv_opt(r.icup)
       << ',' << csv_opt(r.cv_utilities) << ',' << csv_opt(r.cv_unserved)
       << ',' << csv_num(r.utilization_fs) << '\n';
  }
  return os.str();
}

namespace {

nlohmann::ordered_json run_config_json(const ExperimentConfig& config,
                                       const Pipeline& pipe,
                                       const std::string& fingerprint) {
  nlohmann::ordered_json j;
  j["topology"] = config.topology;
  j["connections"] =
      config.connections_path.empty() ? "generated" : config.connections_path;
  j["n"] = config.n;
  j["m"] = config.m;
  j["M"] = pipe.instance.topology.slots_per_link;
  j["T"] = config.T;
  j["alpha_grid"] = {{"start", config.grid.start},
                     {"stop", config.grid.stop},
                     {"step", config.grid.step}};
  j["seed"] = config.seed;
  j["epsilon"] = config.epsilon;
  j["mode"] = config.solver.mode == SolverMode::exact ? "exact" : "heuristic";
  j["time_budget_secs"] = config.solver.time_budget_secs;
  j["cut_limit"] = config.solver.cut_limit;
  j["strict_boundary"] = config.solver.strict_boundary;
  j["edge_weights"] = pipe.instance.topology.weighted() ? "length" : "hops";
  j["fingerprint"] = fingerprint;
  return j;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  Pipeline pipe = prepare(config);
  const int M = pipe.instance.topology.slots_per_link;

  std::vector<double> points = config.grid.points();
  bool has_zero = false;
  for (double a : points)
    if (a == 0.0) has_zero = true;
  if (!has_zero) points.insert(points.begin(), 0.0);

  SweepResult result;
  result.fingerprint = instance_fingerprint(config, pipe.instance);
  result.entries.resize(points.size());

  std::string first_violation;
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < static_cast<int>(points.size()); ++idx) {
    const double a = points[static_cast<std::size_t>(idx)];
    SweepEntry& entry = result.entries[static_cast<std::size_t>(idx)];
    entry.alpha = a;
    entry.allocation = solve_alpha_fair(pipe.P, pipe.U, pipe.Un, M,
                                        AlphaParameter(a), config.solver);
    const ValidationReport rep = validate_allocation(
        entry.allocation, pipe.P, pipe.U, M, config.solver.strict_boundary);
    if (!rep.ok) {
#pragma omp critical
      if (first_violation.empty()) first_violation = rep.violations.front();
      continue;
    }
    const ProvisioningProfile prof =
        excess_and_unserved(entry.allocation, pipe.fluctuations);
    entry.metrics = build_metrics_report(entry.allocation, pipe.P, prof);
  }
  if (!first_violation.empty())
    throw std::logic_error("solver produced an infeasible allocation: " +
                           first_violation);

  // ICOP/ICUP against the alpha = 0 baseline; 0 at the baseline itself.
  const MetricsReport* baseline = nullptr;
  for (const SweepEntry& e : result.entries)
    if (e.alpha == 0.0) {
      baseline = &e.metrics;
      break;
    }
  for (SweepEntry& e : result.entries) {
    if (e.alpha == 0.0) {
      e.metrics.icop = 0.0;
      e.metrics.icup = 0.0;
      continue;
    }
    auto [icop, icup] = improvement_measures(e.metrics, *baseline);
    e.metrics.icop = icop;
    e.metrics.icup = icup;
  }
  for (const SweepEntry& e : result.entries)
    result.any_timeout = result.any_timeout || e.allocation.timed_out;

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    {
      std::ofstream out(fs::path(config.out_dir) / "sweep.csv",
                        std::ios::binary);
      out << sweep_csv(result);
    }
    for (const SweepEntry& e : result.entries) {
      std::ofstream out(fs::path(config.out_dir) /
                            ("alloc_alpha_" + alpha_label(e.alpha) + ".csv"),
                        std::ios::binary);
      write_allocation_csv(out, e.allocation);
    }
    {
      std::ofstream out(fs::path(config.out_dir) / "run_config.json",
                        std::ios::binary);
      out << run_config_json(config, pipe, result.fingerprint).dump(2) << '\n';
    }
  }
  return result;
}

}  // namespace afrsa
