#pragma once

// Serial reference implementations of the OpenMP kernels. Kept as plain
// loops so tests can compare the parallel paths against them; the results
// must match bit for bit.

#include "afrsa/metrics.hpp"
#include "afrsa/traffic.hpp"

namespace afrsa::reference {

FluctuationSet sample_fluctuations(const std::vector<TrafficModel>& models,
                                   int T, std::uint64_t seed);

ProvisioningProfile excess_and_unserved(const Allocation& alloc,
                                        const FluctuationSet& fluct);

}  // namespace afrsa::reference
