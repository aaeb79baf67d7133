#include <algorithm>
#include <cmath>
#include <vector>

#include "afrsa/errors.hpp"
#include "afrsa/solver.hpp"

// Exhaustive reference solver. Kept deliberately independent of the
// branch-and-bound implementation: its own welfare arithmetic, its own
// feasibility checks, its own placement search.

namespace afrsa {

namespace {

struct OracleState {
  const LinkUtilizationMatrix* P;
  const UtilityMatrix* U;
  const NormalizedUtilityMatrix* Un;
  int M;
  double alpha;
  bool log_branch;
  bool count_first;
  int s_min;

  std::vector<int> sizes;         // current combo
  std::vector<double> uhat;
  std::vector<int> residual;      // per link

  bool have_best = false;
  int best_served = 0;
  double best_w = 0.0;
  std::vector<int> best_sizes;
  std::vector<double> best_uhat;
  std::vector<int> best_starts;
};

double oracle_term(double uhat, double alpha, bool log_branch) {
  if (log_branch) return std::log(uhat);
  return std::pow(uhat, 1.0 - alpha) / (1.0 - alpha);
}

// Explicit check of the capacity constraint for the current combo.
bool capacity_ok(const OracleState& st) {
  for (int l = 0; l < st.P->k; ++l) {
    int used = 0;
    for (int i = 0; i < st.P->n; ++i)
      if (st.P->uses(i, l)) used += st.sizes[static_cast<std::size_t>(i)];
    if (used > st.M) return false;
  }
  return true;
}

// Backtracking over start slots, connections in id order. Marks per-link
// slot usage explicitly, so non-overlap and contiguity hold by check.
bool place_from(OracleState& st, std::vector<std::vector<char>>& slot_used,
                std::vector<int>& starts, int i) {
  if (i == st.P->n) return true;
  const int size = st.sizes[static_cast<std::size_t>(i)];
  if (size == 0) return place_from(st, slot_used, starts, i + 1);
  const auto& links = st.P->route_links[static_cast<std::size_t>(i)];
  for (int s = st.s_min; s + size - 1 <= st.M; ++s) {
    bool free = true;
    for (int l : links) {
      for (int q = s; q < s + size; ++q)
        if (slot_used[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)]) {
          free = false;
          break;
        }
      if (!free) break;
    }
    if (!free) continue;
    for (int l : links)
      for (int q = s; q < s + size; ++q)
        slot_used[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)] = 1;
    starts[static_cast<std::size_t>(i)] = s;
    if (place_from(st, slot_used, starts, i + 1)) return true;
    for (int l : links)
      for (int q = s; q < s + size; ++q)
        slot_used[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)] = 0;
    starts[static_cast<std::size_t>(i)] = 0;
  }
  return false;
}

bool placement_exists(OracleState& st, std::vector<int>& starts) {
  std::vector<std::vector<char>> slot_used(
      static_cast<std::size_t>(st.P->k),
      std::vector<char>(static_cast<std::size_t>(st.M) + 1, 0));
  starts.assign(static_cast<std::size_t>(st.P->n), 0);
  return place_from(st, slot_used, starts, 0);
}

void consider(OracleState& st) {
  if (!capacity_ok(st)) return;

  int served = 0;
  double w = 0.0;
  for (int i = 0; i < st.P->n; ++i)
    if (st.sizes[static_cast<std::size_t>(i)] > 0) {
      ++served;
      w += oracle_term(st.uhat[static_cast<std::size_t>(i)], st.alpha,
                       st.log_branch);
    }

  // Order: (served, welfare) when alpha >= 1, welfare otherwise; then the
  // ascending-sorted normalized utilities (larger wins), then sizes by id.
  if (st.have_best) {
    int c = 0;
    if (st.count_first && served != st.best_served)
      c = served > st.best_served ? 1 : -1;
    if (c == 0) {
      const double tol = 1e-9 * std::max({1.0, std::abs(w), std::abs(st.best_w)});
      if (w > st.best_w + tol)
        c = 1;
      else if (w < st.best_w - tol)
        c = -1;
    }
    if (c == 0) {
      std::vector<double> a = st.uhat;
      std::vector<double> b = st.best_uhat;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (std::size_t q = 0; q < a.size() && c == 0; ++q)
        if (a[q] != b[q]) c = a[q] > b[q] ? 1 : -1;
    }
    if (c == 0)
      for (std::size_t q = 0; q < st.sizes.size() && c == 0; ++q)
        if (st.sizes[q] != st.best_sizes[q])
          c = st.sizes[q] > st.best_sizes[q] ? 1 : -1;
    if (c <= 0) return;
  }

  std::vector<int> starts;
  if (!placement_exists(st, starts)) return;

  st.have_best = true;
  st.best_served = served;
  st.best_w = w;
  st.best_sizes = st.sizes;
  st.best_uhat = st.uhat;
  st.best_starts = std::move(starts);
}

void enumerate(OracleState& st, int i) {
  if (i == st.P->n) {
    consider(st);
    return;
  }
  // blocked
  st.sizes[static_cast<std::size_t>(i)] = 0;
  st.uhat[static_cast<std::size_t>(i)] = 0.0;
  enumerate(st, i + 1);
  // each nonzero menu entry
  for (int j = 0; j < st.U->m; ++j) {
    const int size = st.U->at(i, j);
    if (size <= 0) continue;
    st.sizes[static_cast<std::size_t>(i)] = size;
    st.uhat[static_cast<std::size_t>(i)] = st.Un->at(i, j);
    enumerate(st, i + 1);
  }
  st.sizes[static_cast<std::size_t>(i)] = 0;
  st.uhat[static_cast<std::size_t>(i)] = 0.0;
}

}  // namespace

Allocation brute_force_oracle(const LinkUtilizationMatrix& P,
                              const UtilityMatrix& U,
                              const NormalizedUtilityMatrix& Un, int M,
                              AlphaParameter alpha, bool strict_boundary) {
  if (P.n > 5 || U.m > 4 || M > 10)
    throw TooLargeError("brute_force_oracle is guarded to n <= 5, m <= 4, M <= 10");
  if (U.n != P.n || Un.n != P.n || Un.m != U.m)
    throw DimensionMismatchError("oracle inputs disagree on dimensions");

  OracleState st;
  st.P = &P;
  st.U = &U;
  st.Un = &Un;
  st.M = M;
  st.alpha = alpha.value;
  st.log_branch = alpha.is_log();
  st.count_first = alpha.count_first();
  st.s_min = strict_boundary ? 2 : 1;
  st.sizes.assign(static_cast<std::size_t>(P.n), 0);
  st.uhat.assign(static_cast<std::size_t>(P.n), 0.0);

  enumerate(st, 0);

  Allocation alloc;
  alloc.alpha = alpha.value;
  alloc.size = st.best_sizes.empty()
                   ? std::vector<int>(static_cast<std::size_t>(P.n), 0)
                   : st.best_sizes;
  alloc.start = st.best_starts.empty()
                    ? std::vector<int>(static_cast<std::size_t>(P.n), 0)
                    : st.best_starts;
  alloc.served = st.best_served;
  alloc.objective = st.best_w;
  alloc.proof = ProofStatus::exact_optimal;
  return alloc;
}

}  // namespace afrsa
