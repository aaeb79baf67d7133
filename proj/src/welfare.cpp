#include "afrsa/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afrsa/errors.hpp"

namespace afrsa {

AlphaParameter::AlphaParameter(double a) : value(a) {
  if (!(a >= 0.0)) throw ConfigError("alpha must be >= 0");
}

bool AlphaParameter::is_log() const { return std::abs(value - 1.0) < 1e-9; }

bool AlphaParameter::count_first() const { return value > 1.0 - 1e-9; }

int UtilityMatrix::max_size(int i) const {
  int best = 0;
  for (int j = 0; j < m; ++j) best = std::max(best, at(i, j));
  return best;
}

UtilityMatrix build_utility_matrix(const std::vector<int>& peaks, int M, int m) {
  if (m < 1 || m > M)
    throw BadGranularityError("menu size m must satisfy 1 <= m <= M");
  if (M % m != 0)
    throw BadGranularityError("slot count M must be divisible by menu size m");
  UtilityMatrix u;
  u.n = static_cast<int>(peaks.size());
  u.m = m;
  u.granule = M / m;
  u.cell.assign(static_cast<std::size_t>(u.n) * m, 0);
  for (int i = 0; i < u.n; ++i) {
    const int peak = peaks[static_cast<std::size_t>(i)];
    if (peak < 1 || peak > M)
      throw std::invalid_argument("peak demand must lie in [1, M]");
    for (int j = 0; j < m; ++j) {
      const int size = (j + 1) * u.granule;
      if (size <= peak) u.cell[static_cast<std::size_t>(i) * m + j] = size;
    }
  }
  return u;
}

NormalizedUtilityMatrix normalize_utilities(const UtilityMatrix& U,
                                            const std::vector<int>& peaks,
                                            double epsilon) {
  if (static_cast<int>(peaks.size()) != U.n)
    throw DimensionMismatchError("one peak per connection expected");
  const int max_peak = *std::max_element(peaks.begin(), peaks.end());
  const double smallest_step = static_cast<double>(U.granule) / max_peak;
  if (!(epsilon > 0.0) || !(epsilon < smallest_step))
    throw EpsilonTooLargeError(
        "epsilon must lie strictly between 0 and the smallest normalized step");
  NormalizedUtilityMatrix nu;
  nu.n = U.n;
  nu.m = U.m;
  nu.epsilon = epsilon;
  nu.cell.assign(U.cell.size(), epsilon);
  for (int i = 0; i < U.n; ++i)
    for (int j = 0; j < U.m; ++j) {
      const int v = U.at(i, j);
      if (v > 0)
        nu.cell[static_cast<std::size_t>(i) * U.m + j] =
            static_cast<double>(v) / peaks[static_cast<std::size_t>(i)];
    }
  return nu;
}

double welfare_term(double uhat, AlphaParameter alpha) {
  if (!(uhat > 0.0))
    throw NonPositiveUtilityError("welfare requires strictly positive utilities");
  if (alpha.is_log()) return std::log(uhat);
  return std::pow(uhat, 1.0 - alpha.value) / (1.0 - alpha.value);
}

double welfare(std::span<const double> uhat, AlphaParameter alpha) {
  double sum = 0.0;
  for (double v : uhat) sum += welfare_term(v, alpha);
  return sum;
}

}  // namespace afrsa
