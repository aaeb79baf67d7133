#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace afrsa {

// Per-connection tidal traffic model: a log-normal demand (in frequency
// slots) scaled down by `scale_divisor` and clipped at `cap`.
// `sigma2` is the variance of the underlying normal.
struct TrafficModel {
  double mu = 0.0;
  double sigma2 = 1.0;
  double scale_divisor = 2.0;
  double cap = 100.0;

  void validate() const;  // throws InvalidModelError
};

// T demand samples for each of n connections, drawn from per-connection
// substreams so that column i is invariant to n.
struct FluctuationSet {
  int T = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> columns;  // [connection][t]

  double at(int t, int i) const { return columns[i][t]; }
  std::span<const double> column(int i) const { return columns[i]; }
};

// Draws f_it = min(X / scale_divisor, cap) with X log-normal(mu_i, sigma2_i).
// Deterministic for a given (models, T, seed), independent of thread count.
FluctuationSet sample_fluctuations(const std::vector<TrafficModel>& models,
                                   int T, std::uint64_t seed);

// Peak-rate demand for one connection: ceil(max sample), clipped to [1, M].
int peak_demand(std::span<const double> samples, int M);

std::vector<int> peak_demands(const FluctuationSet& fluct, int M);

// Audit dump, header `t,connection_id,f`.
void write_fluctuations_csv(std::ostream& os, const FluctuationSet& fluct);

}  // namespace afrsa
