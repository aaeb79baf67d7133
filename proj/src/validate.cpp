#include <string>
#include <vector>

#include "afrsa/solver.hpp"

// Feasibility validator kept separate from the solvers: it rebuilds the
// per-connection slot bitmaps y[i][s] from the allocation and checks every
// constraint directly on them.

namespace afrsa {

namespace {

void fail(ValidationReport& rep, std::string msg) {
  rep.ok = false;
  rep.violations.push_back(std::move(msg));
}

}  // namespace

ValidationReport validate_allocation(const Allocation& alloc,
                                     const LinkUtilizationMatrix& P,
                                     const UtilityMatrix& U, int M,
                                     bool strict_boundary) {
  ValidationReport rep;
  const int n = P.n;
  if (static_cast<int>(alloc.size.size()) != n ||
      static_cast<int>(alloc.start.size()) != n) {
    fail(rep, "allocation dimensions do not match the instance");
    return rep;
  }

  // y[i][s]: slot s utilized by connection i (slot 0 is a virtual, always
  // empty boundary slot).
  std::vector<std::vector<char>> y(
      static_cast<std::size_t>(n),
      std::vector<char>(static_cast<std::size_t>(M) + 1, 0));

  for (int i = 0; i < n; ++i) {
    const int size = alloc.size[static_cast<std::size_t>(i)];
    const int start = alloc.start[static_cast<std::size_t>(i)];
    if (size < 0) fail(rep, "connection " + std::to_string(i) + ": negative size");
    if (size == 0) {
      if (start != 0)
        fail(rep, "connection " + std::to_string(i) + ": blocked but has a start slot");
      continue;
    }
    // single menu choice (or blocked)
    bool in_menu = false;
    for (int j = 0; j < U.m; ++j)
      if (U.at(i, j) == size) {
        in_menu = true;
        break;
      }
    if (!in_menu)
      fail(rep, "connection " + std::to_string(i) + ": size " +
                    std::to_string(size) + " is not a menu entry");
    if (start < 1 || start + size - 1 > M) {
      fail(rep, "connection " + std::to_string(i) + ": block [" +
                    std::to_string(start) + ", " +
                    std::to_string(start + size - 1) + "] outside 1.." +
                    std::to_string(M));
      continue;
    }
    for (int s = start; s < start + size; ++s)
      y[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = 1;
  }
  if (!rep.ok) return rep;

  for (int i = 0; i < n; ++i) {
    const int size = alloc.size[static_cast<std::size_t>(i)];
    // slot-count consistency
    int used = 0;
    for (int s = 1; s <= M; ++s) used += y[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
    if (used != size)
      fail(rep, "connection " + std::to_string(i) + ": occupies " +
                    std::to_string(used) + " slots, size is " +
                    std::to_string(size));
    // contiguity: exactly one rising edge for a served connection, none for
    // a blocked one (virtual slot 0 counts the block starting at slot 1)
    int starts_seen = 0;
    for (int s = 1; s <= M; ++s)
      if (y[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] &&
          !y[static_cast<std::size_t>(i)][static_cast<std::size_t>(s - 1)])
        ++starts_seen;
    if (starts_seen != (size > 0 ? 1 : 0))
      fail(rep, "connection " + std::to_string(i) + ": " +
                    std::to_string(starts_seen) + " contiguous blocks");
    if (strict_boundary && y[static_cast<std::size_t>(i)][1])
      fail(rep, "connection " + std::to_string(i) +
                    ": slot 1 must stay empty in strict boundary mode");
  }

  for (int l = 0; l < P.k; ++l) {
    // link capacity
    int total = 0;
    for (int i = 0; i < n; ++i)
      if (P.uses(i, l)) total += alloc.size[static_cast<std::size_t>(i)];
    if (total > M)
      fail(rep, "link " + std::to_string(l) + ": " + std::to_string(total) +
                    " slots allocated, capacity " + std::to_string(M));
    // non-overlap, slot by slot
    for (int s = 1; s <= M; ++s) {
      int users = 0;
      for (int i = 0; i < n; ++i)
        if (P.uses(i, l) &&
            y[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)])
          ++users;
      if (users > 1) {
        fail(rep, "link " + std::to_string(l) + ": slot " + std::to_string(s) +
                      " used by " + std::to_string(users) + " connections");
        break;
      }
    }
  }
  return rep;
}

}  // namespace afrsa
