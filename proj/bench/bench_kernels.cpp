// Compares the OpenMP kernels against their serial reference
// implementations and reports the sweep's thread scaling.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

#include "afrsa/harness.hpp"
#include "afrsa/reference.hpp"
#include "afrsa/rng.hpp"

using namespace afrsa;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

bool same(const FluctuationSet& a, const FluctuationSet& b) {
  if (a.n != b.n || a.T != b.T) return false;
  for (int i = 0; i < a.n; ++i)
    for (int t = 0; t < a.T; ++t)
      if (a.at(t, i) != b.at(t, i)) return false;
  return true;
}

bool same(const ProvisioningProfile& a, const ProvisioningProfile& b) {
  return a.u_plus == b.u_plus && a.u_minus == b.u_minus;
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n\n", threads);

  // Sampling kernel
  {
    const int n = 64;
    const int T = 200000;
    std::vector<TrafficModel> models;
    Rng rng(42);
    for (int i = 0; i < n; ++i) {
      TrafficModel tm;
      tm.mu = rng.uniform(2.5, 4.5);
      tm.sigma2 = 0.25 + rng.uniform(0.0, 0.5);
      tm.cap = 100.0;
      models.push_back(tm);
    }
    auto t0 = std::chrono::steady_clock::now();
    const FluctuationSet serial = reference::sample_fluctuations(models, T, 7);
    const double t_serial = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const FluctuationSet parallel = sample_fluctuations(models, T, 7);
    const double t_parallel = ms_since(t0);
    std::printf("sample_fluctuations  n=%d T=%d   serial %8.1f ms   omp %8.1f ms   x%.2f   %s\n",
                n, T, t_serial, t_parallel, t_serial / t_parallel,
                same(serial, parallel) ? "bitwise-equal" : "MISMATCH");

    // Metrics kernel over the same data
    Allocation alloc;
    alloc.size.assign(n, 0);
    alloc.start.assign(n, 0);
    for (int i = 0; i < n; ++i) alloc.size[i] = 10 + (i % 40);
    t0 = std::chrono::steady_clock::now();
    const ProvisioningProfile ps = reference::excess_and_unserved(alloc, serial);
    const double m_serial = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const ProvisioningProfile pp = excess_and_unserved(alloc, parallel);
    const double m_parallel = ms_since(t0);
    std::printf("excess_and_unserved  n=%d T=%d   serial %8.1f ms   omp %8.1f ms   x%.2f   %s\n",
                n, T, m_serial, m_parallel, m_serial / m_parallel,
                same(ps, pp) ? "bitwise-equal" : "MISMATCH");
  }

  // Alpha sweep scaling: same config, 1 thread vs all.
  {
    ExperimentConfig cfg;
    cfg.n = 12;
    cfg.m = 50;
    cfg.M = 100;
    cfg.T = 1000;
    cfg.seed = 11;
    cfg.grid = AlphaGrid{0.0, 5.0, 0.25};
    cfg.solver.mode = SolverMode::two_stage_heuristic;
    cfg.solver.time_budget_secs = 0.5;

    omp_set_num_threads(1);
    auto t0 = std::chrono::steady_clock::now();
    const SweepResult one = run_sweep(cfg);
    const double t_one = ms_since(t0);

    omp_set_num_threads(threads);
    t0 = std::chrono::steady_clock::now();
    const SweepResult all = run_sweep(cfg);
    const double t_all = ms_since(t0);

    std::printf("run_sweep            %2zu alphas    1 thr  %8.1f ms   %d thr %8.1f ms   x%.2f   %s\n",
                one.entries.size(), t_one, threads, t_all, t_one / t_all,
                sweep_csv(one) == sweep_csv(all) ? "identical csv" : "MISMATCH");
  }
  return 0;
}
