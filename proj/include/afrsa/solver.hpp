#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "afrsa/topology.hpp"
#include "afrsa/welfare.hpp"

namespace afrsa {

enum class SolverMode { exact, two_stage_heuristic, brute_force_oracle };

enum class SpectrumOrder {
  longest_route_first,  // hops desc, then larger size, then id
  by_id,
};

struct SpectrumPolicy {
  SpectrumOrder order = SpectrumOrder::longest_route_first;
};

struct SolverConfig {
  SolverMode mode = SolverMode::exact;
  double time_budget_secs = 60.0;
  // Search-node budget per component; the deterministic limiter (a wall
  // clock stop depends on machine load, node counts do not). -1 = unlimited.
  long long node_limit = 60000;
  SpectrumPolicy policy;
  // Reproduces the literal boundary constraint that keeps slot 1 unused by
  // every connection; off by default so all M slots are usable.
  bool strict_boundary = false;
  int cut_limit = 5;
  std::ostream* trace = nullptr;  // optional `node,incumbent,bound,decision` log

  void validate() const;
};

enum class ProofStatus { exact_optimal, heuristic };

struct Allocation {
  double alpha = 0.0;
  std::vector<int> size;   // slots per connection, 0 = blocked
  std::vector<int> start;  // first slot (1-based), 0 when blocked
  double objective = 0.0;  // welfare of the served connections
  int served = 0;
  ProofStatus proof = ProofStatus::heuristic;
  bool timed_out = false;  // the wall-clock budget cut the search short

  bool blocked(int i) const { return size[static_cast<std::size_t>(i)] == 0; }
};

struct SpectrumResult {
  bool ok = false;
  std::vector<int> start;     // valid when ok
  std::vector<int> conflict;  // minimal conflicting connection set when !ok
};

// First-fit contiguous placement of the given sizes. On failure returns a
// certificate naming a minimal set of mutually conflicting connections.
SpectrumResult assign_spectrum(const std::vector<int>& sizes,
                               const LinkUtilizationMatrix& P, int M,
                               const SpectrumPolicy& policy,
                               bool strict_boundary = false);

// Maximizes the welfare of the normalized utilities subject to capacity,
// single-choice, contiguity and non-overlap constraints. Exact mode proves
// optimality (up to the time/node budget); the two-stage heuristic solves
// sizes under capacity only and then places them, repairing conflicts with
// no-good cuts and granule degradation.
Allocation solve_alpha_fair(const LinkUtilizationMatrix& P,
                            const UtilityMatrix& U,
                            const NormalizedUtilityMatrix& Un, int M,
                            AlphaParameter alpha, const SolverConfig& config);

// Exhaustive reference: enumerates every menu choice and every contiguous
// placement. Guarded to n <= 5, m <= 4, M <= 10 (throws TooLargeError).
Allocation brute_force_oracle(const LinkUtilizationMatrix& P,
                              const UtilityMatrix& U,
                              const NormalizedUtilityMatrix& Un, int M,
                              AlphaParameter alpha,
                              bool strict_boundary = false);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Independent feasibility check of an allocation: rebuilds per-connection
// slot bitmaps and verifies capacity, menu membership, slot-count
// consistency, non-overlap and single-block contiguity on every link.
ValidationReport validate_allocation(const Allocation& alloc,
                                     const LinkUtilizationMatrix& P,
                                     const UtilityMatrix& U, int M,
                                     bool strict_boundary = false);

// Allocation dump, header `connection_id,size_fs,start_slot,blocked`.
void write_allocation_csv(std::ostream& os, const Allocation& alloc);
Allocation read_allocation_csv(std::istream& is);

}  // namespace afrsa
