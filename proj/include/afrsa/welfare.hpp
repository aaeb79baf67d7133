#pragma once

#include <span>
#include <vector>

namespace afrsa {

// Inequality-aversion parameter. Values within 1e-9 of 1 select the
// logarithmic branch of the welfare function.
struct AlphaParameter {
  double value = 0.0;

  AlphaParameter() = default;
  explicit AlphaParameter(double a);

  bool is_log() const;
  // For alpha >= 1 a served connection always contributes a nonpositive
  // welfare term, so the solver maximizes (served count, welfare)
  // lexicographically there; below 1 the plain objective already rewards
  // serving.
  bool count_first() const;
};

// Discrete spectrum-allocation menu: entry (i, j) is (j+1) * granule slots
// when that does not exceed connection i's peak demand, otherwise 0.
struct UtilityMatrix {
  int n = 0;
  int m = 0;
  int granule = 0;  // slots per menu step, M / m
  std::vector<int> cell;  // row-major

  int at(int i, int j) const {
    return cell[static_cast<std::size_t>(i) * m + j];
  }
  // Largest nonzero entry of row i; 0 when the whole row is zero.
  int max_size(int i) const;
};

// Menu entries divided by the connection's peak demand; zero entries are
// replaced by epsilon so every value is strictly positive.
struct NormalizedUtilityMatrix {
  int n = 0;
  int m = 0;
  double epsilon = 1e-3;
  std::vector<double> cell;  // row-major

  double at(int i, int j) const {
    return cell[static_cast<std::size_t>(i) * m + j];
  }
};

UtilityMatrix build_utility_matrix(const std::vector<int>& peaks, int M, int m);

NormalizedUtilityMatrix normalize_utilities(const UtilityMatrix& U,
                                            const std::vector<int>& peaks,
                                            double epsilon);

// Welfare contribution of one normalized utility.
double welfare_term(double uhat, AlphaParameter alpha);

// Constant-elasticity welfare: sum u^(1-a)/(1-a), or sum log(u) at a = 1.
// Empty input yields 0. Throws NonPositiveUtilityError on u <= 0.
double welfare(std::span<const double> uhat, AlphaParameter alpha);

}  // namespace afrsa
