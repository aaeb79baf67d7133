#pragma once

// Internal slot-grid helpers shared by assign_spectrum and the exact solver.
// The brute-force oracle deliberately keeps its own placement code.

#include <vector>

#include "afrsa/solver.hpp"
#include "afrsa/topology.hpp"

namespace afrsa::detail {

struct SlotGrid {
  int M = 0;
  std::vector<std::vector<char>> used;  // [link][slot], slots 1..M

  SlotGrid(int links, int slots) : M(slots) {
    used.assign(static_cast<std::size_t>(links),
                std::vector<char>(static_cast<std::size_t>(slots) + 1, 0));
  }

  bool fits(const std::vector<int>& links, int s, int size) const {
    if (s < 1 || s + size - 1 > M) return false;
    for (int l : links)
      for (int q = s; q < s + size; ++q)
        if (used[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)])
          return false;
    return true;
  }

  void mark(const std::vector<int>& links, int s, int size, char v) {
    for (int l : links)
      for (int q = s; q < s + size; ++q)
        used[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)] = v;
  }

  // Smallest feasible start for the connection, or 0.
  int first_fit(const std::vector<int>& links, int size, int s_min) const {
    for (int s = s_min; s + size - 1 <= M; ++s)
      if (fits(links, s, size)) return s;
    return 0;
  }
};

// Placement order: hops descending, larger size first, then id; or plain id.
std::vector<int> placement_order(const std::vector<int>& sizes,
                                 const LinkUtilizationMatrix& P,
                                 const SpectrumPolicy& policy);

}  // namespace afrsa::detail
