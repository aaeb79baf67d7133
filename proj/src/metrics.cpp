#include "afrsa/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "afrsa/errors.hpp"

namespace afrsa {

namespace {

// One connection's expected excess / unserved traffic. Also the unit the
// serial reference reuses, so parallel and serial results are bit-identical.
void profile_connection(int u, std::span<const double> f, double& plus,
                        double& minus) {
  long double p = 0.0L;
  long double m = 0.0L;
  for (double v : f) {
    const long double d = static_cast<long double>(u) - v;
    if (d > 0)
      p += d;
    else if (d < 0)
      m -= d;
  }
  const long double T = static_cast<long double>(f.size());
  plus = static_cast<double>(p / T);
  minus = static_cast<double>(m / T);
}

}  // namespace

ProvisioningProfile excess_and_unserved(const Allocation& alloc,
                                        const FluctuationSet& fluct) {
  if (static_cast<int>(alloc.size.size()) != fluct.n)
    throw DimensionMismatchError("allocation and fluctuations disagree on n");
  ProvisioningProfile prof;
  prof.u_plus.assign(alloc.size.size(), 0.0);
  prof.u_minus.assign(alloc.size.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < fluct.n; ++i)
    profile_connection(alloc.size[static_cast<std::size_t>(i)], fluct.column(i),
                       prof.u_plus[static_cast<std::size_t>(i)],
                       prof.u_minus[static_cast<std::size_t>(i)]);
  return prof;
}

std::optional<double> coefficient_of_variation(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("coefficient_of_variation needs n >= 2");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (mean == 0.0) return std::nullopt;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / ((static_cast<double>(values.size()) - 1.0) * mean * mean));
}

std::pair<std::optional<double>, std::optional<double>> improvement_measures(
    const MetricsReport& report_alpha, const MetricsReport& report_zero) {
  if (std::abs(report_zero.alpha) > 1e-12)
    throw std::invalid_argument("baseline report must be the alpha = 0 run");
  std::optional<double> icop;
  std::optional<double> icup;
  if (report_zero.cop != 0.0)
    icop = (report_zero.cop - report_alpha.cop) / report_zero.cop;
  if (report_zero.cup != 0.0)
    icup = (report_zero.cup - report_alpha.cup) / report_zero.cup;
  return {icop, icup};
}

UtilizationSummary blocking_and_utilization(const Allocation& alloc,
                                            const LinkUtilizationMatrix& P) {
  if (static_cast<int>(alloc.size.size()) != P.n)
    throw DimensionMismatchError("allocation and matrix disagree on n");
  UtilizationSummary s;
  int blocked = 0;
  for (int i = 0; i < P.n; ++i) {
    const int size = alloc.size[static_cast<std::size_t>(i)];
    if (size == 0) ++blocked;
    s.fs_link += static_cast<double>(size) * P.hops(i);
    s.fs_total += static_cast<double>(size);
  }
  s.blocking_percent = P.n > 0 ? 100.0 * blocked / P.n : 0.0;
  return s;
}

MetricsReport build_metrics_report(const Allocation& alloc,
                                   const LinkUtilizationMatrix& P,
                                   const ProvisioningProfile& profile) {
  MetricsReport rep;
  rep.alpha = alloc.alpha;
  const UtilizationSummary s = blocking_and_utilization(alloc, P);
  rep.blocking_percent = s.blocking_percent;
  rep.utilization_fs_link = s.fs_link;
  rep.utilization_fs = s.fs_total;
  for (double v : profile.u_plus) rep.cop += v;
  for (double v : profile.u_minus) rep.cup += v;
  if (alloc.size.size() >= 2) {
    std::vector<double> sizes(alloc.size.begin(), alloc.size.end());
    rep.cv_utilities = coefficient_of_variation(sizes);
    rep.cv_unserved = coefficient_of_variation(profile.u_minus);
  }
  return rep;
}

}  // namespace afrsa
