#include <algorithm>

#include "afrsa/solver.hpp"
#include "placement.hpp"

namespace afrsa {

namespace detail {

std::vector<int> placement_order(const std::vector<int>& sizes,
                                 const LinkUtilizationMatrix& P,
                                 const SpectrumPolicy& policy) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(sizes.size()); ++i)
    if (sizes[static_cast<std::size_t>(i)] > 0) order.push_back(i);
  if (policy.order == SpectrumOrder::longest_route_first) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (P.hops(a) != P.hops(b)) return P.hops(a) > P.hops(b);
      if (sizes[static_cast<std::size_t>(a)] != sizes[static_cast<std::size_t>(b)])
        return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
      return a < b;
    });
  }
  return order;
}

}  // namespace detail

namespace {

// Shrinks the blocker set to an inclusion-minimal one: a blocker is kept
// only if the failed connection still fits once the others stay put and
// that blocker is lifted.
std::vector<int> minimize_conflict(const detail::SlotGrid& grid_in,
                                   const std::vector<int>& sizes,
                                   const LinkUtilizationMatrix& P, int failed,
                                   const std::vector<int>& starts,
                                   std::vector<int> blockers, int s_min) {
  detail::SlotGrid grid = grid_in;
  const auto& flinks = P.route_links[static_cast<std::size_t>(failed)];
  const int fsize = sizes[static_cast<std::size_t>(failed)];
  std::vector<int> kept;
  for (int b : blockers) {
    const auto& blinks = P.route_links[static_cast<std::size_t>(b)];
    const int bsize = sizes[static_cast<std::size_t>(b)];
    const int bstart = starts[static_cast<std::size_t>(b)];
    grid.mark(blinks, bstart, bsize, 0);
    if (grid.first_fit(flinks, fsize, s_min) != 0) {
      kept.push_back(b);  // lifting b frees the way, so b was blocking
      grid.mark(blinks, bstart, bsize, 1);
    }
    // otherwise b stays lifted: still no window, so b was not needed
  }
  return kept;
}

}  // namespace

SpectrumResult assign_spectrum(const std::vector<int>& sizes,
                               const LinkUtilizationMatrix& P, int M,
                               const SpectrumPolicy& policy,
                               bool strict_boundary) {
  const int s_min = strict_boundary ? 2 : 1;
  const std::vector<int> order = detail::placement_order(sizes, P, policy);

  SpectrumResult res;
  res.start.assign(sizes.size(), 0);
  detail::SlotGrid grid(P.k, M);
  std::vector<int> placed;
  for (int i : order) {
    const auto& links = P.route_links[static_cast<std::size_t>(i)];
    const int size = sizes[static_cast<std::size_t>(i)];
    const int s = grid.first_fit(links, size, s_min);
    if (s == 0) {
      // Certificate: the failed connection plus a minimal set of already
      // placed connections on its links that block every window.
      std::vector<int> blockers;
      for (int p : placed) {
        bool shares = false;
        for (int l : links)
          if (P.uses(p, l)) {
            shares = true;
            break;
          }
        if (shares) blockers.push_back(p);
      }
      std::vector<int> minimal =
          minimize_conflict(grid, sizes, P, i, res.start, blockers, s_min);
      minimal.push_back(i);
      std::sort(minimal.begin(), minimal.end());
      res.ok = false;
      res.conflict = std::move(minimal);
      return res;
    }
    grid.mark(links, s, size, 1);
    res.start[static_cast<std::size_t>(i)] = s;
    placed.push_back(i);
  }
  res.ok = true;
  return res;
}

}  // namespace afrsa
