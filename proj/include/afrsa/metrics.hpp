#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "afrsa/solver.hpp"
#include "afrsa/topology.hpp"
#include "afrsa/traffic.hpp"

namespace afrsa {

// Expected excess (over-provisioned) and unserved (under-provisioned)
// traffic per connection, averaged over the fluctuation set.
struct ProvisioningProfile {
  std::vector<double> u_plus;
  std::vector<double> u_minus;
};

ProvisioningProfile excess_and_unserved(const Allocation& alloc,
                                        const FluctuationSet& fluct);

struct MetricsReport {
  double alpha = 0.0;
  double blocking_percent = 0.0;
  double utilization_fs_link = 0.0;  // slots weighted by route length
  double utilization_fs = 0.0;       // plain slot total, for comparison
  double cop = 0.0;
  double cup = 0.0;
  std::optional<double> icop;
  std::optional<double> icup;
  std::optional<double> cv_utilities;
  std::optional<double> cv_unserved;
};

// sqrt( (1/(n-1)) * sum (v - mean)^2 / mean^2 ). Undefined (nullopt) when
// the mean is zero; requires at least two values.
std::optional<double> coefficient_of_variation(std::span<const double> values);

// (ICOP, ICUP) against the alpha = 0 utilitarian baseline; each side is
// undefined when its baseline aggregate is zero.
std::pair<std::optional<double>, std::optional<double>> improvement_measures(
    const MetricsReport& report_alpha, const MetricsReport& report_zero);

// (blocking percentage, slot-km style utilization in FS-link units,
// plain FS total).
struct UtilizationSummary {
  double blocking_percent = 0.0;
  double fs_link = 0.0;
  double fs_total = 0.0;
};
UtilizationSummary blocking_and_utilization(const Allocation& alloc,
                                            const LinkUtilizationMatrix& P);

// Assembles everything except ICOP/ICUP (those need the baseline report).
MetricsReport build_metrics_report(const Allocation& alloc,
                                   const LinkUtilizationMatrix& P,
                                   const ProvisioningProfile& profile);

}  // namespace afrsa
