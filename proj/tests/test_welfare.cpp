#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "afrsa/errors.hpp"
#include "afrsa/rng.hpp"
#include "afrsa/welfare.hpp"

using namespace afrsa;

TEST_CASE("menu construction follows the granule grid") {
  SUBCASE("M=100 m=50 peak 7") {
    const UtilityMatrix u = build_utility_matrix({7}, 100, 50);
    CHECK(u.granule == 2);
    CHECK(u.at(0, 0) == 2);
    CHECK(u.at(0, 1) == 4);
    CHECK(u.at(0, 2) == 6);
    for (int j = 3; j < 50; ++j) CHECK(u.at(0, j) == 0);
  }
  SUBCASE("peak = M keeps the whole row") {
    const UtilityMatrix u = build_utility_matrix({100}, 100, 50);
    for (int j = 0; j < 50; ++j) CHECK(u.at(0, j) == 2 * (j + 1));
    CHECK(u.max_size(0) == 100);
  }
  SUBCASE("M=8 m=4 peak 5") {
    const UtilityMatrix u = build_utility_matrix({5}, 8, 4);
    CHECK(u.at(0, 0) == 2);
    CHECK(u.at(0, 1) == 4);
    CHECK(u.at(0, 2) == 0);
    CHECK(u.at(0, 3) == 0);
  }
  SUBCASE("every nonzero entry is a granule multiple below the peak") {
    const UtilityMatrix u = build_utility_matrix({7, 93, 100, 1}, 100, 50);
    for (int i = 0; i < u.n; ++i)
      for (int j = 0; j < u.m; ++j) {
        const int v = u.at(i, j);
        if (v == 0) continue;
        CHECK(v % u.granule == 0);
        CHECK(v <= 100);
      }
  }
  SUBCASE("granularity errors") {
    CHECK_THROWS_AS(build_utility_matrix({5}, 8, 16), BadGranularityError);
    CHECK_THROWS_AS(build_utility_matrix({5}, 10, 4), BadGranularityError);
    CHECK_THROWS_AS(build_utility_matrix({0}, 8, 4), std::invalid_argument);
  }
}

TEST_CASE("normalization divides by the peak, epsilon elsewhere") {
  const UtilityMatrix u = build_utility_matrix({7}, 8, 4);  // row [2,4,6,0]
  const NormalizedUtilityMatrix nu = normalize_utilities(u, {7}, 1e-3);
  CHECK(nu.at(0, 0) == doctest::Approx(2.0 / 7).epsilon(1e-15));
  CHECK(nu.at(0, 1) == doctest::Approx(4.0 / 7).epsilon(1e-15));
  CHECK(nu.at(0, 2) == doctest::Approx(6.0 / 7).epsilon(1e-15));
  CHECK(nu.at(0, 3) == 1e-3);

  const UtilityMatrix full = build_utility_matrix({8}, 8, 4);
  const NormalizedUtilityMatrix nfull = normalize_utilities(full, {8}, 1e-3);
  CHECK(nfull.at(0, 3) == 1.0);  // u_ij = u_imax

  CHECK_THROWS_AS(normalize_utilities(u, {7}, 0.5), EpsilonTooLargeError);
  CHECK_THROWS_AS(normalize_utilities(u, {7}, 0.0), EpsilonTooLargeError);
}

TEST_CASE("welfare worked examples") {
  CHECK(welfare(std::vector<double>{1.0, 1.0}, AlphaParameter(0.0)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(welfare(std::vector<double>{1.0, 1.0}, AlphaParameter(1.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(welfare(std::vector<double>{0.5}, AlphaParameter(2.0)) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(welfare(std::vector<double>{0.25, 0.75}, AlphaParameter(0.5)) ==
        doctest::Approx(2.0 * (0.5 + std::sqrt(0.75))).epsilon(1e-12));
  CHECK(welfare(std::vector<double>{}, AlphaParameter(3.0)) == 0.0);
  CHECK_THROWS_AS(welfare(std::vector<double>{0.0}, AlphaParameter(1.0)),
                  NonPositiveUtilityError);
  CHECK_THROWS_AS(AlphaParameter(-0.1), ConfigError);
}

TEST_CASE("alpha near one uses the log branch") {
  CHECK(AlphaParameter(1.0).is_log());
  CHECK(AlphaParameter(1.0 + 5e-10).is_log());
  CHECK_FALSE(AlphaParameter(1.0 + 5e-9).is_log());
}

TEST_CASE("welfare is strictly increasing in each utility") {
  Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.uniform_int(1, 6);
    std::vector<double> u(n);
    for (double& v : u) v = rng.uniform(0.05, 0.99);
    const AlphaParameter a(rng.uniform(0.0, 5.0));
    const double base = welfare(u, a);
    const int i = rng.uniform_int(0, n - 1);
    u[static_cast<std::size_t>(i)] += 1e-6;
    CHECK(welfare(u, a) > base);
  }
}

TEST_CASE("welfare is concave") {
  Rng rng(505);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(1, 6);
    std::vector<double> u(n), v(n), mix(n);
    for (int i = 0; i < n; ++i) {
      u[static_cast<std::size_t>(i)] = rng.uniform(0.02, 1.0);
      v[static_cast<std::size_t>(i)] = rng.uniform(0.02, 1.0);
    }
    const double lam = rng.uniform(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      mix[static_cast<std::size_t>(i)] = lam * u[static_cast<std::size_t>(i)] +
                                         (1.0 - lam) * v[static_cast<std::size_t>(i)];
    const AlphaParameter a(rng.uniform(0.0, 5.0));
    CHECK(welfare(mix, a) >=
          lam * welfare(u, a) + (1.0 - lam) * welfare(v, a) - 1e-9);
  }
}

TEST_CASE("argmax is stable across the alpha=1 seam") {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    // candidate allocations of equal length (all served)
    const int n = 4;
    std::vector<std::vector<double>> cands;
    for (int c = 0; c < 8; ++c) {
      std::vector<double> u(n);
      for (double& x : u) x = rng.uniform(0.05, 1.0);
      cands.push_back(std::move(u));
    }
    auto argmax = [&](double alpha) {
      int best = 0;
      double bw = welfare(cands[0], AlphaParameter(alpha));
      for (int c = 1; c < static_cast<int>(cands.size()); ++c) {
        const double w = welfare(cands[static_cast<std::size_t>(c)], AlphaParameter(alpha));
        if (w > bw) {
          bw = w;
          best = c;
        }
      }
      return best;
    };
    const int below = argmax(1.0 - 1e-6);
    const int at = argmax(1.0);
    const int above = argmax(1.0 + 1e-6);
    CHECK(below == at);
    CHECK(at == above);
  }
}
