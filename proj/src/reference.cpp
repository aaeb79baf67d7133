#include "afrsa/reference.hpp"

#include <cmath>

#include "afrsa/errors.hpp"
#include "afrsa/rng.hpp"

namespace afrsa::reference {

FluctuationSet sample_fluctuations(const std::vector<TrafficModel>& models,
                                   int T, std::uint64_t seed) {
  if (T < 1) throw ConfigError("sample_fluctuations requires T >= 1");
  for (const TrafficModel& tm : models) tm.validate();
  FluctuationSet fs;
  fs.T = T;
  fs.n = static_cast<int>(models.size());
  fs.seed = seed;
  fs.columns.resize(models.size());
  for (int i = 0; i < fs.n; ++i) {
    const TrafficModel& tm = models[static_cast<std::size_t>(i)];
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
    const double sigma = std::sqrt(tm.sigma2);
    auto& col = fs.columns[static_cast<std::size_t>(i)];
    col.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      const double x = std::exp(tm.mu + sigma * rng.normal());
      col[static_cast<std::size_t>(t)] = std::min(x / tm.scale_divisor, tm.cap);
    }
  }
  return fs;
}

ProvisioningProfile excess_and_unserved(const Allocation& alloc,
                                        const FluctuationSet& fluct) {
  if (static_cast<int>(alloc.size.size()) != fluct.n)
    throw DimensionMismatchError("allocation and fluctuations disagree on n");
  ProvisioningProfile prof;
  prof.u_plus.assign(alloc.size.size(), 0.0);
  prof.u_minus.assign(alloc.size.size(), 0.0);
  for (int i = 0; i < fluct.n; ++i) {
    long double p = 0.0L;
    long double m = 0.0L;
    const int u = alloc.size[static_cast<std::size_t>(i)];
    for (double v : fluct.column(i)) {
      const long double d = static_cast<long double>(u) - v;
      if (d > 0)
        p += d;
      else if (d < 0)
        m -= d;
    }
    prof.u_plus[static_cast<std::size_t>(i)] =
        static_cast<double>(p / static_cast<long double>(fluct.T));
    prof.u_minus[static_cast<std::size_t>(i)] =
        static_cast<double>(m / static_cast<long double>(fluct.T));
  }
  return prof;
}

}  // namespace afrsa::reference
