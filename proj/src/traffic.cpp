#include "afrsa/traffic.hpp"

#include <cmath>
#include <ostream>

#include "afrsa/csv.hpp"
#include "afrsa/errors.hpp"
#include "afrsa/rng.hpp"

namespace afrsa {

void TrafficModel::validate() const {
  if (!(sigma2 > 0.0)) throw InvalidModelError("traffic model requires sigma2 > 0");
  if (!(scale_divisor > 0.0))
    throw InvalidModelError("traffic model requires scale_divisor > 0");
  if (!(cap > 0.0)) throw InvalidModelError("traffic model requires cap > 0");
}

namespace {

void sample_column(const TrafficModel& tm, int T, std::uint64_t seed, int i,
                   std::vector<double>& out) {
  Rng rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
  const double sigma = std::sqrt(tm.sigma2);
  out.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const double x = std::exp(tm.mu + sigma * rng.normal());
    out[static_cast<std::size_t>(t)] = std::min(x / tm.scale_divisor, tm.cap);
  }
}

}  // namespace

FluctuationSet sample_fluctuations(const std::vector<TrafficModel>& models,
                                   int T, std::uint64_t seed) {
  if (T < 1) throw ConfigError("sample_fluctuations requires T >= 1");
  for (const TrafficModel& tm : models) tm.validate();

  FluctuationSet fs;
  fs.T = T;
  fs.n = static_cast<int>(models.size());
  fs.seed = seed;
  fs.columns.resize(models.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < fs.n; ++i)
    sample_column(models[static_cast<std::size_t>(i)], T, seed, i,
                  fs.columns[static_cast<std::size_t>(i)]);
  return fs;
}

int peak_demand(std::span<const double> samples, int M) {
  if (samples.empty()) throw EmptySamplesError("peak_demand on empty sample set");
  double mx = samples[0];
  for (double v : samples) mx = std::max(mx, v);
  const int peak = static_cast<int>(std::ceil(mx));
  return std::min(M, std::max(1, peak));
}

std::vector<int> peak_demands(const FluctuationSet& fluct, int M) {
  std::vector<int> peaks(static_cast<std::size_t>(fluct.n));
  for (int i = 0; i < fluct.n; ++i)
    peaks[static_cast<std::size_t>(i)] = peak_demand(fluct.column(i), M);
  return peaks;
}

void write_fluctuations_csv(std::ostream& os, const FluctuationSet& fluct) {
  os << "t,connection_id,f\n";
  for (int t = 0; t < fluct.T; ++t)
    for (int i = 0; i < fluct.n; ++i)
      os << t << ',' << i << ',' << csv_num(fluct.at(t, i)) << '\n';
}

}  // namespace afrsa
