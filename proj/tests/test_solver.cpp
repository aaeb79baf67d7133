#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "afrsa/errors.hpp"
#include "afrsa/rng.hpp"
#include "afrsa/solver.hpp"
#include "afrsa/welfare.hpp"

using namespace afrsa;

namespace {

LinkUtilizationMatrix make_p(std::vector<std::vector<int>> route_links, int k) {
  LinkUtilizationMatrix p;
  p.n = static_cast<int>(route_links.size());
  p.k = k;
  p.cell.assign(static_cast<std::size_t>(p.n) * k, 0);
  for (int i = 0; i < p.n; ++i)
    for (int l : route_links[static_cast<std::size_t>(i)])
      p.cell[static_cast<std::size_t>(i) * k + l] = 1;
  p.route_links = std::move(route_links);
  return p;
}

struct Inst {
  LinkUtilizationMatrix P;
  UtilityMatrix U;
  NormalizedUtilityMatrix Un;
  int M;
};

Inst make_inst(std::vector<std::vector<int>> route_links, int k,
               std::vector<int> peaks, int M, int m) {
  Inst in;
  in.P = make_p(std::move(route_links), k);
  in.U = build_utility_matrix(peaks, M, m);
  in.Un = normalize_utilities(in.U, peaks, 1e-3);
  in.M = M;
  return in;
}

SolverConfig exact_cfg() {
  SolverConfig c;
  c.mode = SolverMode::exact;
  return c;
}

SolverConfig heur_cfg() {
  SolverConfig c;
  c.mode = SolverMode::two_stage_heuristic;
  return c;
}

double min_uhat(const Allocation& a, const Inst& in) {
  double mn = 1e18;
  for (int i = 0; i < in.P.n; ++i) {
    if (a.size[static_cast<std::size_t>(i)] == 0) return 0.0;
    const int j = a.size[static_cast<std::size_t>(i)] / in.U.granule - 1;
    mn = std::min(mn, in.Un.at(i, j));
  }
  return mn;
}

}  // namespace

TEST_CASE("single connection takes its peak at slot 1 for every alpha") {
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 8.0}) {
    Inst in = make_inst({{0, 1}}, 2, {10}, 10, 5);
    const Allocation a =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), exact_cfg());
    CHECK(a.size[0] == 10);
    CHECK(a.start[0] == 1);
    CHECK(a.proof == ProofStatus::exact_optimal);
    CHECK(validate_allocation(a, in.P, in.U, in.M).ok);
  }
}

TEST_CASE("utilitarian split of one shared link fills it, tie-broken") {
  Inst in = make_inst({{0}, {0}}, 1, {10, 10}, 10, 5);
  const Allocation a =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(0.0), exact_cfg());
  CHECK(a.size[0] + a.size[1] == 10);
  // ties resolved toward the most even split, larger size at the smaller id
  CHECK(a.size[0] == 6);
  CHECK(a.size[1] == 4);
}

TEST_CASE("exact matches the oracle on tiny instances") {
  // n=3, k=4, M=8, m=4 over several alphas
  Inst in = make_inst({{0, 1}, {1, 2}, {2, 3}}, 4, {8, 5, 7}, 8, 4);
  for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
    const Allocation ex =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), exact_cfg());
    const Allocation or_ =
        brute_force_oracle(in.P, in.U, in.Un, in.M, AlphaParameter(alpha));
    CHECK(ex.objective ==
          doctest::Approx(or_.objective).epsilon(1e-9));
    CHECK(ex.served == or_.served);
    CHECK(validate_allocation(ex, in.P, in.U, in.M).ok);
    CHECK(validate_allocation(or_, in.P, in.U, in.M).ok);
  }
}

TEST_CASE("single-connection instances reproduce the solver exactly") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int peak = 2 * rng.uniform_int(1, 4);
    Inst in = make_inst({{0}}, 1, {peak}, 8, 4);
    const double alpha = rng.uniform(0.0, 6.0);
    const Allocation ex =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), exact_cfg());
    const Allocation or_ =
        brute_force_oracle(in.P, in.U, in.Un, in.M, AlphaParameter(alpha));
    CHECK(ex.size == or_.size);
    CHECK(ex.start == or_.start);
    CHECK(ex.objective == doctest::Approx(or_.objective).epsilon(1e-9));
  }
}

TEST_CASE("oracle returns a max-min allocation on an all-contending star") {
  // three connections through one hub link, distinct peaks
  Inst in = make_inst({{0}, {0}, {0}}, 1, {8, 6, 4}, 8, 4);
  const Allocation a =
      brute_force_oracle(in.P, in.U, in.Un, in.M, AlphaParameter(8.0));
  // enumeration: the best reachable minimum normalized utility is 1/3
  CHECK(min_uhat(a, in) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(a.size[0] == 4);
  CHECK(a.size[1] == 2);
  CHECK(a.size[2] == 2);
}

TEST_CASE("exact equals oracle over random seeded tiny instances") {
  Rng rng(321);
  for (int seed = 0; seed < 100; ++seed) {
    const int n = rng.uniform_int(2, 4);
    const int k = rng.uniform_int(2, 5);
    std::vector<std::vector<int>> routes;
    for (int i = 0; i < n; ++i) {
      std::vector<int> r;
      const int hops = rng.uniform_int(1, 2);
      while (static_cast<int>(r.size()) < hops) {
        const int l = rng.uniform_int(0, k - 1);
        bool dup = false;
        for (int x : r) dup = dup || x == l;
        if (!dup) r.push_back(l);
      }
      routes.push_back(std::move(r));
    }
    std::vector<int> peaks;
    for (int i = 0; i < n; ++i) peaks.push_back(2 * rng.uniform_int(1, 4));
    Inst in = make_inst(std::move(routes), k, peaks, 8, 4);
    const double alpha = std::vector<double>{0.0, 0.5, 1.0, 2.0, 8.0}[
        static_cast<std::size_t>(rng.uniform_int(0, 4))];
    const Allocation ex =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), exact_cfg());
    const Allocation or_ =
        brute_force_oracle(in.P, in.U, in.Un, in.M, AlphaParameter(alpha));
    const double tol = 1e-9 * std::max({1.0, std::abs(ex.objective),
                                        std::abs(or_.objective)});
    CHECK(std::abs(ex.objective - or_.objective) <= tol);
  }
}

TEST_CASE("oracle guard") {
  Inst in = make_inst({{0}}, 1, {16}, 16, 4);
  CHECK_THROWS_AS(brute_force_oracle(in.P, in.U, in.Un, in.M, AlphaParameter(1.0)),
                  TooLargeError);
}

TEST_CASE("assign_spectrum") {
  SUBCASE("disjoint routes all start at slot 1") {
    LinkUtilizationMatrix p = make_p({{0}, {1}, {2}}, 3);
    const auto res = assign_spectrum({4, 6, 2}, p, 10, SpectrumPolicy{});
    REQUIRE(res.ok);
    CHECK(res.start == std::vector<int>{1, 1, 1});
  }
  SUBCASE("shared link, longer route placed first") {
    // the 2-hop size-4 connection goes first, the 1-hop size-6 one after it
    LinkUtilizationMatrix p = make_p({{0, 1}, {1}}, 2);
    const auto res = assign_spectrum({4, 6}, p, 10, SpectrumPolicy{});
    REQUIRE(res.ok);
    CHECK(res.start[0] == 1);
    CHECK(res.start[1] == 5);
  }
  SUBCASE("triangle of pairwise-sharing connections yields a certificate") {
    LinkUtilizationMatrix p = make_p({{0, 1}, {1, 2}, {0, 2}}, 3);
    const auto res = assign_spectrum({4, 4, 4}, p, 10, SpectrumPolicy{});
    REQUIRE_FALSE(res.ok);
    CHECK(res.conflict == std::vector<int>{0, 1, 2});
  }
  SUBCASE("by-id policy") {
    LinkUtilizationMatrix p = make_p({{0}, {0, 1}}, 2);
    SpectrumPolicy policy;
    policy.order = SpectrumOrder::by_id;
    const auto res = assign_spectrum({4, 6}, p, 10, policy);
    REQUIRE(res.ok);
    CHECK(res.start == std::vector<int>{1, 5});
  }
}

TEST_CASE("two-stage repairs the triangle conflict and stays feasible") {
  Inst in = make_inst({{0, 1}, {1, 2}, {0, 2}}, 3, {4, 4, 4}, 10, 5);
  for (double alpha : {0.0, 1.0, 2.0}) {
    const Allocation a =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), heur_cfg());
    CHECK(validate_allocation(a, in.P, in.U, in.M).ok);
    // capacity admits serving everyone at reduced sizes
    if (alpha >= 1.0) CHECK(a.served == 3);
  }
}

TEST_CASE("two-stage objective never exceeds exact") {
  Rng rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform_int(2, 4);
    std::vector<std::vector<int>> routes;
    for (int i = 0; i < n; ++i) routes.push_back({rng.uniform_int(0, 2)});
    std::vector<int> peaks;
    for (int i = 0; i < n; ++i) peaks.push_back(2 * rng.uniform_int(1, 5));
    Inst in = make_inst(std::move(routes), 3, peaks, 10, 5);
    const double alpha = rng.uniform(0.0, 4.0);
    const Allocation ex =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), exact_cfg());
    const Allocation he =
        solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), heur_cfg());
    CHECK(validate_allocation(he, in.P, in.U, in.M).ok);
    const double tol = 1e-9 * std::max({1.0, std::abs(ex.objective),
                                        std::abs(he.objective)});
    if (AlphaParameter(alpha).count_first()) {
      CHECK(he.served <= ex.served);
      if (he.served == ex.served) CHECK(he.objective <= ex.objective + tol);
    } else {
      CHECK(he.objective <= ex.objective + tol);
    }
  }
}

TEST_CASE("non-contending connections always get their peak entry") {
  Rng rng(666);
  for (int trial = 0; trial < 60; ++trial) {
    // conn 0 and 1 share link 0; conn 2 rides link 1 alone
    std::vector<int> peaks = {2 * rng.uniform_int(1, 4), 2 * rng.uniform_int(1, 4),
                              2 * rng.uniform_int(1, 4)};
    Inst in = make_inst({{0}, {0}, {1}}, 2, peaks, 8, 4);
    const double alpha = rng.uniform(0.0, 8.0);
    for (const SolverConfig& cfg : {exact_cfg(), heur_cfg()}) {
      const Allocation a =
          solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(alpha), cfg);
      CHECK(a.size[2] == in.U.max_size(2));
    }
  }
}

TEST_CASE("objective scaling does not change the argmax candidate") {
  Inst in = make_inst({{0}, {0}, {1}}, 2, {8, 6, 4}, 8, 4);
  const AlphaParameter alpha(0.5);
  // enumerate feasible size combos and compare argmax under W and 3.7*W
  std::vector<std::vector<int>> combos;
  std::vector<double> welfare_vals;
  std::vector<int> choice(3, -1);
  std::function<void(int)> rec = [&](int i) {
    if (i == 3) {
      int l0 = 0;
      if (choice[0] >= 0) l0 += in.U.at(0, choice[0]);
      if (choice[1] >= 0) l0 += in.U.at(1, choice[1]);
      if (l0 > in.M) return;
      double w = 0.0;
      std::vector<int> sizes(3, 0);
      for (int q = 0; q < 3; ++q)
        if (choice[q] >= 0) {
          sizes[static_cast<std::size_t>(q)] = in.U.at(q, choice[q]);
          w += welfare_term(in.Un.at(q, choice[q]), alpha);
        }
      combos.push_back(sizes);
      welfare_vals.push_back(w);
      return;
    }
    choice[i] = -1;
    rec(i + 1);
    for (int j = 0; j < in.U.m; ++j)
      if (in.U.at(i, j) > 0) {
        choice[i] = j;
        rec(i + 1);
      }
    choice[i] = -1;
  };
  rec(0);
  REQUIRE(!combos.empty());
  auto argmax = [&](double scale) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < welfare_vals.size(); ++c)
      if (scale * welfare_vals[c] > scale * welfare_vals[best]) best = c;
    return best;
  };
  CHECK(argmax(1.0) == argmax(3.7));
}

TEST_CASE("validator flags corrupted allocations") {
  Inst in = make_inst({{0}, {0}}, 1, {10, 10}, 10, 5);
  Allocation a =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(0.0), exact_cfg());
  REQUIRE(validate_allocation(a, in.P, in.U, in.M).ok);

  SUBCASE("overlap") {
    a.start[1] = a.start[0];
    CHECK_FALSE(validate_allocation(a, in.P, in.U, in.M).ok);
  }
  SUBCASE("size not on the menu") {
    a.size[0] = 3;
    CHECK_FALSE(validate_allocation(a, in.P, in.U, in.M).ok);
  }
  SUBCASE("block outside the slot range") {
    a.start[0] = in.M;
    CHECK_FALSE(validate_allocation(a, in.P, in.U, in.M).ok);
  }
  SUBCASE("capacity") {
    Allocation b = a;
    b.size = {10, 10};
    b.start = {1, 1};
    CHECK_FALSE(validate_allocation(b, in.P, in.U, in.M).ok);
  }
  SUBCASE("blocked with a start slot") {
    a.size[0] = 0;
    CHECK_FALSE(validate_allocation(a, in.P, in.U, in.M).ok);
  }
}

TEST_CASE("strict boundary keeps slot 1 empty") {
  Inst in = make_inst({{0}}, 1, {10}, 10, 5);
  SolverConfig cfg = exact_cfg();
  cfg.strict_boundary = true;
  const Allocation a =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(0.0), cfg);
  CHECK(a.size[0] == 8);  // 10 no longer fits into slots 2..10
  CHECK(a.start[0] == 2);
  CHECK(validate_allocation(a, in.P, in.U, in.M, true).ok);

  // the default mode uses all M slots
  const Allocation b =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(0.0), exact_cfg());
  CHECK(b.size[0] == 10);
  CHECK_FALSE(validate_allocation(b, in.P, in.U, in.M, true).ok);
}

TEST_CASE("exhausted search budget returns the incumbent as heuristic") {
  // six interleaved connections at full scale: far too big for 50 nodes
  Inst in = make_inst({{0, 1}, {1, 2}, {0, 2}, {0, 1}, {1, 2}, {0, 2}}, 3,
                      {100, 100, 100, 100, 100, 100}, 100, 50);
  SolverConfig cfg = exact_cfg();
  cfg.node_limit = 50;
  const Allocation a =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(0.5), cfg);
  CHECK(a.proof == ProofStatus::heuristic);
  CHECK_FALSE(a.timed_out);  // node budget, not the wall clock
  CHECK(validate_allocation(a, in.P, in.U, in.M).ok);

  // a tiny wall-clock budget marks the result timed out
  SolverConfig tight = exact_cfg();
  tight.node_limit = -1;
  tight.time_budget_secs = 1e-6;
  const Allocation b =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(0.5), tight);
  CHECK(b.timed_out);
  CHECK(b.proof == ProofStatus::heuristic);
}

TEST_CASE("solver trace has the expected shape") {
  Inst in = make_inst({{0}, {0}}, 1, {4, 4}, 8, 4);
  SolverConfig cfg = exact_cfg();
  std::ostringstream trace;
  cfg.trace = &trace;
  solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(1.0), cfg);
  const std::string s = trace.str();
  CHECK(s.find("serve") != std::string::npos);
  CHECK(s.find("leaf") != std::string::npos);
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line))
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
}

TEST_CASE("allocation csv round trip") {
  Inst in = make_inst({{0}, {0}}, 1, {10, 4}, 10, 5);
  const Allocation a =
      solve_alpha_fair(in.P, in.U, in.Un, in.M, AlphaParameter(1.0), exact_cfg());
  std::ostringstream os;
  write_allocation_csv(os, a);
  std::istringstream is(os.str());
  const Allocation back = read_allocation_csv(is);
  CHECK(back.size == a.size);
  CHECK(back.start == a.start);
}
