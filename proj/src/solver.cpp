#include "afrsa/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "afrsa/errors.hpp"
#include "placement.hpp"

namespace afrsa {

void SolverConfig::validate() const {
  if (!(time_budget_secs > 0.0))
    throw ConfigError("solver time budget must be positive");
  if (node_limit == 0 || node_limit < -1)
    throw ConfigError("solver node limit must be positive or -1");
  if (cut_limit < 0) throw ConfigError("cut limit must be >= 0");
}

namespace {

using Clock = std::chrono::steady_clock;

double welfare_tol(double a, double b) {
  return 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// +1 when (servedA, wA) is strictly better, -1 when worse, 0 when tied.
int cmp_score(bool count_first, int served_a, double w_a, int served_b,
              double w_b) {
  if (count_first && served_a != served_b) return served_a > served_b ? 1 : -1;
  const double tol = welfare_tol(w_a, w_b);
  if (w_a > w_b + tol) return 1;
  if (w_b > w_a + tol) return -1;
  return 0;
}

// Equal-welfare tie-break 1: lexicographically larger ascending-sorted
// normalized utilities (pushes the minimum up first).
int cmp_sorted_uhat(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return 1;
    if (a[i] < b[i]) return -1;
  }
  return 0;
}

// Tie-break 2: larger size at the smallest connection id.
int cmp_sizes(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return 1;
    if (a[i] < b[i]) return -1;
  }
  return 0;
}

struct Option {
  int size = 0;
  double uhat = 0.0;
  double term = 0.0;
};

struct Member {
  int id = -1;                     // global connection id
  std::vector<int> local_links;    // positions into comp_links
  std::vector<Option> opts;        // sizes descending
  std::vector<double> term_at;     // term_at[q] for q granules, q = 1..Q
  int hops = 0;
};

struct Candidate {
  bool valid = false;
  int served = 0;
  double w = 0.0;
  std::vector<int> sizes;       // by member position
  std::vector<double> uhat;     // by member position
  std::vector<int> starts;      // by member position (exact mode only)
  std::vector<double> key1;     // uhat sorted ascending
};

bool candidate_better(bool count_first, const Candidate& a, const Candidate& b) {
  if (!b.valid) return true;
  if (!a.valid) return false;
  int c = cmp_score(count_first, a.served, a.w, b.served, b.w);
  if (c != 0) return c > 0;
  c = cmp_sorted_uhat(a.key1, b.key1);
  if (c != 0) return c > 0;
  return cmp_sizes(a.sizes, b.sizes) > 0;
}

struct Cut {
  std::vector<int> member_pos;  // positions within the component
  std::vector<int> sizes;
};

// Branch-and-bound over one contention component. In exact mode every leaf
// is placement-checked (first-fit, then exhaustive search); in capacity
// mode leaves only need the link-capacity invariant, which holds by
// construction of the branching.
class ComponentSearch {
 public:
  ComponentSearch(std::vector<Member> members, int n_links, int M, int g,
                  AlphaParameter alpha, bool exact_placement,
                  const SolverConfig& cfg)
      : members_(std::move(members)),
        n_links_(n_links),
        M_(M),
        g_(g),
        alpha_(alpha),
        count_first_(alpha.count_first()),
        exact_placement_(exact_placement),
        cfg_(cfg),
        s_min_(cfg.strict_boundary ? 2 : 1) {
    residual_.assign(static_cast<std::size_t>(n_links_), M_);
    chosen_.assign(members_.size(), -1);
    chosen_uhat_.assign(members_.size(), 0.0);
    order_.resize(members_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int x, int y) {
      const Member& a = members_[static_cast<std::size_t>(x)];
      const Member& b = members_[static_cast<std::size_t>(y)];
      if (a.hops != b.hops) return a.hops > b.hops;
      const int sa = a.opts.empty() ? 0 : a.opts.front().size;
      const int sb = b.opts.empty() ? 0 : b.opts.front().size;
      if (sa != sb) return sa > sb;
      return a.id < b.id;
    });
  }

  void set_cuts(std::vector<Cut> cuts) { cuts_ = std::move(cuts); }

  Candidate run(Clock::time_point deadline, long long node_limit,
                bool* stopped_out, bool* wall_out) {
    deadline_ = deadline;
    node_limit_ = node_limit;
    stopped_ = false;
    wall_stop_ = false;
    nodes_ = 0;

    best_ = all_blocked_candidate();
    seed_greedy();
    undec_users_.assign(static_cast<std::size_t>(n_links_), 0);
    for (const Member& mem : members_)
      for (int l : mem.local_links) ++undec_users_[static_cast<std::size_t>(l)];
    groups_.assign(static_cast<std::size_t>(n_links_), {});
    dfs(0);

    if (stopped_out) *stopped_out = *stopped_out || stopped_;
    if (wall_out) *wall_out = *wall_out || wall_stop_;
    return best_;
  }

 private:
  Candidate all_blocked_candidate() const {
    Candidate c;
    c.valid = true;
    c.sizes.assign(members_.size(), 0);
    c.uhat.assign(members_.size(), 0.0);
    c.starts.assign(members_.size(), 0);
    c.key1.assign(members_.size(), 0.0);
    return c;
  }

  bool matches_cut(const std::vector<int>& sizes) const {
    for (const Cut& cut : cuts_) {
      bool all = true;
      for (std::size_t q = 0; q < cut.member_pos.size(); ++q)
        if (sizes[static_cast<std::size_t>(cut.member_pos[q])] != cut.sizes[q]) {
          all = false;
          break;
        }
      if (all) return true;
    }
    return false;
  }

  bool fits(const Member& mem, int size) const {
    for (int l : mem.local_links)
      if (residual_[static_cast<std::size_t>(l)] < size) return false;
    return true;
  }

  void apply(const Member& mem, int delta) {
    for (int l : mem.local_links) residual_[static_cast<std::size_t>(l)] += delta;
  }

  // Greedy water-filling used as the initial incumbent: serve everything
  // that fits at one granule (when count matters), then repeatedly add the
  // granule with the highest marginal welfare.
  void seed_greedy() {
    std::vector<int> q(members_.size(), 0);
    if (count_first_) {
      for (std::size_t i = 0; i < members_.size(); ++i) {
        const Member& mem = members_[i];
        if (!mem.opts.empty() && fits(mem, g_)) {
          q[i] = 1;
          apply(mem, -g_);
        }
      }
    }
    for (;;) {
      int best_i = -1;
      double best_delta = 0.0;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        const Member& mem = members_[i];
        const int qmax = static_cast<int>(mem.term_at.size()) - 1;
        if (q[i] >= qmax) continue;
        if (count_first_ && q[i] == 0) continue;  // start pass already ran
        if (!fits(mem, g_)) continue;
        const double delta =
            mem.term_at[static_cast<std::size_t>(q[i] + 1)] -
            (q[i] > 0 ? mem.term_at[static_cast<std::size_t>(q[i])] : 0.0);
        if (delta > best_delta) {
          best_delta = delta;
          best_i = static_cast<int>(i);
        }
      }
      if (best_i < 0) break;
      ++q[static_cast<std::size_t>(best_i)];
      apply(members_[static_cast<std::size_t>(best_i)], -g_);
    }
    polish(q);
    for (std::size_t i = 0; i < members_.size(); ++i)
      apply(members_[i], q[i] * g_);  // restore residuals
    greedy_q_ = q;

    // No-good cuts can hit the greedy point; back the largest involved size
    // off one granule at a time until the point is clean.
    for (int guard = 0; guard < 1024 && cut_hit(q); ++guard) {
      const Cut* hit = nullptr;
      for (const Cut& cut : cuts_)
        if (cut_matches(cut, q)) hit = &cut;
      int pick = -1;
      for (int mi : hit->member_pos)
        if (q[static_cast<std::size_t>(mi)] > 0 &&
            (pick < 0 || q[static_cast<std::size_t>(mi)] >
                             q[static_cast<std::size_t>(pick)]))
          pick = mi;
      if (pick < 0) return;  // cut pins an all-blocked combo; keep base incumbent
      --q[static_cast<std::size_t>(pick)];
    }

    Candidate cand;
    cand.valid = true;
    cand.sizes.resize(members_.size());
    cand.uhat.resize(members_.size());
    cand.starts.assign(members_.size(), 0);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const Member& mem = members_[i];
      cand.sizes[i] = q[i] * g_;
      if (q[i] > 0) {
        ++cand.served;
        cand.w += mem.term_at[static_cast<std::size_t>(q[i])];
        // uhat of the chosen option
        for (const Option& o : mem.opts)
          if (o.size == cand.sizes[i]) {
            cand.uhat[i] = o.uhat;
            break;
          }
      }
    }
    cand.key1 = cand.uhat;
    std::sort(cand.key1.begin(), cand.key1.end());
    if (matches_cut(cand.sizes)) return;
    if (exact_placement_ && !place_component(cand.sizes, cand.starts)) return;
    if (candidate_better(count_first_, cand, best_)) best_ = std::move(cand);
  }

  // Moves single granules between connections while that improves welfare.
  // Residuals are kept consistent with q throughout; runs on top of the
  // greedy fill, so raises have already saturated.
  void polish(std::vector<int>& q) {
    for (int pass = 0; pass < 64; ++pass) {
      int from = -1;
      int to = -1;
      double best_delta = 1e-12;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        const int low = count_first_ ? 1 : 0;
        if (q[i] <= low) continue;
        const Member& mi = members_[i];
        const double drop =
            mi.term_at[static_cast<std::size_t>(q[i])] -
            (q[i] > 1 ? mi.term_at[static_cast<std::size_t>(q[i] - 1)] : 0.0);
        apply(mi, g_);  // release one granule
        for (std::size_t j = 0; j < members_.size(); ++j) {
          if (j == i) continue;
          const Member& mj = members_[j];
          const int qmax = static_cast<int>(mj.term_at.size()) - 1;
          if (q[j] >= qmax) continue;
          if (count_first_ && q[j] == 0) continue;  // would change the count
          if (!fits(mj, g_)) continue;
          const double gain =
              mj.term_at[static_cast<std::size_t>(q[j] + 1)] -
              (q[j] > 0 ? mj.term_at[static_cast<std::size_t>(q[j])] : 0.0);
          if (gain - drop > best_delta) {
            best_delta = gain - drop;
            from = static_cast<int>(i);
            to = static_cast<int>(j);
          }
        }
        apply(mi, -g_);
      }
      if (from < 0) return;
      --q[static_cast<std::size_t>(from)];
      ++q[static_cast<std::size_t>(to)];
      apply(members_[static_cast<std::size_t>(from)], g_);
      apply(members_[static_cast<std::size_t>(to)], -g_);
    }
  }

  bool cut_matches(const Cut& cut, const std::vector<int>& q) const {
    for (std::size_t i = 0; i < cut.member_pos.size(); ++i)
      if (q[static_cast<std::size_t>(cut.member_pos[i])] * g_ != cut.sizes[i])
        return false;
    return true;
  }

  bool cut_hit(const std::vector<int>& q) const {
    for (const Cut& cut : cuts_)
      if (cut_matches(cut, q)) return true;
    return false;
  }

  void note(long long node, double incumbent, double bound, const char* what,
            int member, int size) {
    if (!cfg_.trace) return;
    (*cfg_.trace) << node << ',' << incumbent << ',' << bound << ',' << what;
    if (member >= 0)
      (*cfg_.trace) << ' ' << members_[static_cast<std::size_t>(member)].id
                    << ':' << size;
    (*cfg_.trace) << '\n';
  }

  void check_budget() {
    if ((nodes_ & 0xff) == 0 && Clock::now() > deadline_) {
      stopped_ = true;
      wall_stop_ = true;
    }
    if (node_limit_ >= 0 && nodes_ > node_limit_) stopped_ = true;
  }

  void dfs(std::size_t depth) {
    if (stopped_) return;
    ++nodes_;
    check_budget();
    if (stopped_) return;

    if (depth == order_.size()) {
      leaf();
      return;
    }

    const auto [count_ub, w_ub] = bound(depth);
    if (prunable(count_ub, w_ub)) {
      note(nodes_, best_.w, w_ub, "prune", -1, 0);
      return;
    }

    const int mi = order_[depth];
    const Member& mem = members_[static_cast<std::size_t>(mi)];
    for (int l : mem.local_links) --undec_users_[static_cast<std::size_t>(l)];
    for (std::size_t oi = 0; oi < mem.opts.size(); ++oi) {
      const Option& o = mem.opts[oi];
      if (!fits(mem, o.size)) continue;
      note(nodes_, best_.w, w_ub, "serve", mi, o.size);
      apply(mem, -o.size);
      chosen_[static_cast<std::size_t>(mi)] = o.size;
      chosen_uhat_[static_cast<std::size_t>(mi)] = o.uhat;
      ++served_;
      w_ += o.term;
      dfs(depth + 1);
      w_ -= o.term;
      --served_;
      chosen_[static_cast<std::size_t>(mi)] = -1;
      chosen_uhat_[static_cast<std::size_t>(mi)] = 0.0;
      apply(mem, o.size);
      if (stopped_) break;
    }
    if (!stopped_) {
      note(nodes_, best_.w, w_ub, "block", mi, 0);
      chosen_[static_cast<std::size_t>(mi)] = 0;
      dfs(depth + 1);
      chosen_[static_cast<std::size_t>(mi)] = -1;
    }
    for (int l : mem.local_links) ++undec_users_[static_cast<std::size_t>(l)];
  }

  bool prunable(int count_ub, double w_ub) const {
    if (!best_.valid) return false;
    const double tol = welfare_tol(w_ub, best_.w);
    if (exact_placement_) {
      // Exact mode keeps exploring ties so the deterministic tie-break
      // matches full enumeration.
      if (count_first_) {
        if (count_ub < best_.served) return true;
        if (count_ub == best_.served && w_ub < best_.w - tol) return true;
        return false;
      }
      return w_ub < best_.w - tol;
    }
    if (count_first_) {
      if (count_ub < best_.served) return true;
      return count_ub == best_.served && w_ub <= best_.w + tol;
    }
    return w_ub <= best_.w + tol;
  }

  void leaf() {
    note(nodes_, best_.w, w_, "leaf", -1, 0);
    std::vector<int> sizes(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i)
      sizes[i] = std::max(chosen_[i], 0);
    if (matches_cut(sizes)) return;

    Candidate cand;
    cand.valid = true;
    cand.served = served_;
    cand.w = w_;
    cand.sizes = std::move(sizes);
    cand.uhat = chosen_uhat_;
    cand.key1 = cand.uhat;
    std::sort(cand.key1.begin(), cand.key1.end());
    cand.starts.assign(members_.size(), 0);

    if (!candidate_better(count_first_, cand, best_)) return;
    if (exact_placement_ && !place_component(cand.sizes, cand.starts)) return;
    best_ = std::move(cand);
  }

  // (count upper bound, welfare upper bound) for all completions of the
  // current node. Undecided connections are grouped onto their most
  // contended link; each group is bounded by a greedy concave fill of that
  // link's remaining granules.
  std::pair<int, double> bound(std::size_t depth) {
    for (auto& grp : groups_) grp.clear();
    loose_.clear();
    for (std::size_t d = depth; d < order_.size(); ++d) {
      const int mi = order_[d];
      const Member& mem = members_[static_cast<std::size_t>(mi)];
      int cap = M_;
      for (int l : mem.local_links)
        cap = std::min(cap, residual_[static_cast<std::size_t>(l)]);
      const int qcap = std::min<int>(cap / g_,
                                     static_cast<int>(mem.term_at.size()) - 1);
      if (qcap < 1) continue;  // can only be blocked
      int grp = -1;
      int best_users = 0;
      for (int l : mem.local_links) {
        const int u = undec_users_[static_cast<std::size_t>(l)];
        if (u > best_users || (u == best_users && (grp < 0 || l < grp))) {
          best_users = u;
          grp = l;
        }
      }
      if (grp < 0) {
        loose_.push_back({mi, qcap});
        continue;
      }
      groups_[static_cast<std::size_t>(grp)].push_back({mi, qcap});
    }

    int count_ub = served_;
    double w_ub = w_;

    for (const auto& [mi, qcap] : loose_) {
      // No links at all: the connection is trivially servable at its best.
      const Member& mem = members_[static_cast<std::size_t>(mi)];
      const double t = mem.term_at[static_cast<std::size_t>(qcap)];
      ++count_ub;
      w_ub += count_first_ ? t : std::max(0.0, t);
    }

    for (int l = 0; l < n_links_; ++l) {
      const auto& grp = groups_[static_cast<std::size_t>(l)];
      if (grp.empty()) continue;
      const int cap_gran = residual_[static_cast<std::size_t>(l)] / g_;
      if (count_first_) {
        if (static_cast<int>(grp.size()) <= cap_gran) {
          count_ub += static_cast<int>(grp.size());
          for (const auto& [mi, qcap] : grp)
            w_ub += members_[static_cast<std::size_t>(mi)].term_at[1];
          w_ub += merged_increments(cap_gran - static_cast<int>(grp.size()), grp);
        } else {
          count_ub += cap_gran;
          scratch_.clear();
          for (const auto& [mi, qcap] : grp)
            scratch_.push_back(members_[static_cast<std::size_t>(mi)].term_at[1]);
          std::sort(scratch_.begin(), scratch_.end(), std::greater<double>());
          for (int q = 0; q < cap_gran; ++q)
            w_ub += scratch_[static_cast<std::size_t>(q)];
        }
      } else {
        count_ub += std::min<int>(static_cast<int>(grp.size()), cap_gran);
        w_ub += greedy_fill(cap_gran, grp);
      }
    }
    return {count_ub, w_ub};
  }

  // Top `budget` marginal gains beyond the forced first granule, merged
  // over the group (each member's increments are decreasing).
  double merged_increments(int budget,
                           const std::vector<std::pair<int, int>>& grp) {
    double sum = 0.0;
    heap_.clear();
    for (const auto& [mi, qcap] : grp)
      if (qcap >= 2) {
        const auto& t = members_[static_cast<std::size_t>(mi)].term_at;
        heap_.push_back({t[2] - t[1], mi, 2, qcap});
      }
    auto cmp = [](const HeapItem& a, const HeapItem& b) { return a.gain < b.gain; };
    std::make_heap(heap_.begin(), heap_.end(), cmp);
    while (budget > 0 && !heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp);
      HeapItem it = heap_.back();
      heap_.pop_back();
      if (it.gain <= 0.0) break;
      sum += it.gain;
      --budget;
      if (it.q < it.qcap) {
        const auto& t = members_[static_cast<std::size_t>(it.mi)].term_at;
        heap_.push_back({t[static_cast<std::size_t>(it.q + 1)] -
                             t[static_cast<std::size_t>(it.q)],
                         it.mi, it.q + 1, it.qcap});
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      }
    }
    return sum;
  }

  // For alpha < 1 every marginal (including the first) is positive and
  // decreasing, so a straight greedy merge bounds the group optimum.
  double greedy_fill(int budget, const std::vector<std::pair<int, int>>& grp) {
    double sum = 0.0;
    heap_.clear();
    for (const auto& [mi, qcap] : grp) {
      const auto& t = members_[static_cast<std::size_t>(mi)].term_at;
      heap_.push_back({t[1], mi, 1, qcap});
    }
    auto cmp = [](const HeapItem& a, const HeapItem& b) { return a.gain < b.gain; };
    std::make_heap(heap_.begin(), heap_.end(), cmp);
    while (budget > 0 && !heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp);
      HeapItem it = heap_.back();
      heap_.pop_back();
      if (it.gain <= 0.0) break;
      sum += it.gain;
      --budget;
      if (it.q < it.qcap) {
        const auto& t = members_[static_cast<std::size_t>(it.mi)].term_at;
        heap_.push_back({t[static_cast<std::size_t>(it.q + 1)] -
                             t[static_cast<std::size_t>(it.q)],
                         it.mi, it.q + 1, it.qcap});
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      }
    }
    return sum;
  }

  // Contiguous placement of a complete component candidate. First-fit in
  // policy order, then exhaustive backtracking before declaring the sizes
  // unplaceable.
  bool place_component(const std::vector<int>& sizes, std::vector<int>& starts) {
    place_order_.clear();
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (sizes[i] > 0) place_order_.push_back(static_cast<int>(i));
    if (cfg_.policy.order == SpectrumOrder::longest_route_first) {
      std::sort(place_order_.begin(), place_order_.end(), [&](int a, int b) {
        const Member& ma = members_[static_cast<std::size_t>(a)];
        const Member& mb = members_[static_cast<std::size_t>(b)];
        if (ma.hops != mb.hops) return ma.hops > mb.hops;
        if (sizes[static_cast<std::size_t>(a)] != sizes[static_cast<std::size_t>(b)])
          return sizes[static_cast<std::size_t>(a)] >
                 sizes[static_cast<std::size_t>(b)];
        return ma.id < mb.id;
      });
    }

    detail::SlotGrid grid(n_links_, M_);
    bool first_fit_ok = true;
    for (int i : place_order_) {
      const Member& mem = members_[static_cast<std::size_t>(i)];
      const int s = grid.first_fit(mem.local_links,
                                   sizes[static_cast<std::size_t>(i)], s_min_);
      if (s == 0) {
        first_fit_ok = false;
        break;
      }
      grid.mark(mem.local_links, s, sizes[static_cast<std::size_t>(i)], 1);
      starts[static_cast<std::size_t>(i)] = s;
    }
    if (first_fit_ok) return true;

    std::fill(starts.begin(), starts.end(), 0);
    detail::SlotGrid fresh(n_links_, M_);
    return place_exhaustive(fresh, sizes, starts, 0);
  }

  bool place_exhaustive(detail::SlotGrid& grid, const std::vector<int>& sizes,
                        std::vector<int>& starts, std::size_t pos) {
    if (pos == place_order_.size()) return true;
    if (stopped_) return false;
    ++nodes_;
    check_budget();
    const int i = place_order_[pos];
    const Member& mem = members_[static_cast<std::size_t>(i)];
    const int size = sizes[static_cast<std::size_t>(i)];
    for (int s = s_min_; s + size - 1 <= M_; ++s) {
      if (!grid.fits(mem.local_links, s, size)) continue;
      grid.mark(mem.local_links, s, size, 1);
      starts[static_cast<std::size_t>(i)] = s;
      if (place_exhaustive(grid, sizes, starts, pos + 1)) return true;
      grid.mark(mem.local_links, s, size, 0);
      starts[static_cast<std::size_t>(i)] = 0;
    }
    return false;
  }

  struct HeapItem {
    double gain;
    int mi;
    int q;
    int qcap;
  };

  std::vector<Member> members_;
  int n_links_;
  int M_;
  int g_;
  AlphaParameter alpha_;
  bool count_first_;
  bool exact_placement_;
  const SolverConfig& cfg_;
  int s_min_;

  std::vector<Cut> cuts_;
  std::vector<int> residual_;
  std::vector<int> chosen_;
  std::vector<double> chosen_uhat_;
  std::vector<int> greedy_q_;
  std::vector<int> order_;
  int served_ = 0;
  double w_ = 0.0;
  Candidate best_;
  long long nodes_ = 0;
  long long node_limit_ = -1;
  Clock::time_point deadline_;
  bool stopped_ = false;
  bool wall_stop_ = false;

  // scratch
  std::vector<int> undec_users_;
  std::vector<std::vector<std::pair<int, int>>> groups_;  // (member, qcap)
  std::vector<std::pair<int, int>> loose_;
  std::vector<double> scratch_;
  std::vector<HeapItem> heap_;
  std::vector<int> place_order_;
};

struct Problem {
  const LinkUtilizationMatrix* P = nullptr;
  const UtilityMatrix* U = nullptr;
  const NormalizedUtilityMatrix* Un = nullptr;
  int M = 0;
  AlphaParameter alpha;

  std::vector<std::vector<Option>> actions;  // per connection, sizes desc
  std::vector<std::vector<int>> components;  // contended groups (global ids)
  std::vector<int> singles;                  // alone on all their links
};

Problem build_problem(const LinkUtilizationMatrix& P, const UtilityMatrix& U,
                      const NormalizedUtilityMatrix& Un, int M,
                      AlphaParameter alpha) {
  if (U.n != P.n || Un.n != P.n || Un.m != U.m)
    throw DimensionMismatchError("solver inputs disagree on dimensions");

  Problem prob;
  prob.P = &P;
  prob.U = &U;
  prob.Un = &Un;
  prob.M = M;
  prob.alpha = alpha;

  prob.actions.resize(static_cast<std::size_t>(P.n));
  for (int i = 0; i < P.n; ++i) {
    auto& acts = prob.actions[static_cast<std::size_t>(i)];
    for (int j = U.m - 1; j >= 0; --j) {
      const int size = U.at(i, j);
      if (size <= 0) continue;
      const double uhat = Un.at(i, j);
      acts.push_back({size, uhat, welfare_term(uhat, alpha)});
    }
  }

  // Union-find over connections that share a link.
  std::vector<int> parent(static_cast<std::size_t>(P.n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<char> contended(static_cast<std::size_t>(P.n), 0);
  for (int l = 0; l < P.k; ++l) {
    int first = -1;
    for (int i = 0; i < P.n; ++i) {
      if (!P.uses(i, l)) continue;
      if (first < 0) {
        first = i;
      } else {
        contended[static_cast<std::size_t>(first)] = 1;
        contended[static_cast<std::size_t>(i)] = 1;
        parent[static_cast<std::size_t>(find(i))] = find(first);
      }
    }
  }
  std::vector<std::vector<int>> by_root(static_cast<std::size_t>(P.n));
  for (int i = 0; i < P.n; ++i) {
    if (!contended[static_cast<std::size_t>(i)]) {
      prob.singles.push_back(i);
      continue;
    }
    by_root[static_cast<std::size_t>(find(i))].push_back(i);
  }
  for (auto& grp : by_root)
    if (!grp.empty()) prob.components.push_back(std::move(grp));
  std::sort(prob.components.begin(), prob.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return prob;
}

ComponentSearch make_search(const Problem& prob, const std::vector<int>& ids,
                            std::vector<int>& comp_links_out,
                            bool exact_placement, const SolverConfig& cfg) {
  const LinkUtilizationMatrix& P = *prob.P;
  comp_links_out.clear();
  std::vector<int> link_pos(static_cast<std::size_t>(P.k), -1);
  for (int i : ids)
    for (int l : P.route_links[static_cast<std::size_t>(i)])
      if (link_pos[static_cast<std::size_t>(l)] < 0) {
        link_pos[static_cast<std::size_t>(l)] =
            static_cast<int>(comp_links_out.size());
        comp_links_out.push_back(l);
      }

  std::vector<Member> members;
  members.reserve(ids.size());
  for (int i : ids) {
    Member mem;
    mem.id = i;
    mem.hops = P.hops(i);
    for (int l : P.route_links[static_cast<std::size_t>(i)])
      mem.local_links.push_back(link_pos[static_cast<std::size_t>(l)]);
    mem.opts = prob.actions[static_cast<std::size_t>(i)];
    mem.term_at.assign(1, 0.0);
    for (auto it = mem.opts.rbegin(); it != mem.opts.rend(); ++it)
      mem.term_at.push_back(it->term);  // index q = size / g
    members.push_back(std::move(mem));
  }
  return ComponentSearch(std::move(members), static_cast<int>(comp_links_out.size()),
                         prob.M, prob.U->granule, prob.alpha, exact_placement,
                         cfg);
}

// Largest menu entry that fits the usable slot range of a non-contended
// connection; 0 when nothing fits.
int best_single_size(const Problem& prob, int i, int s_min) {
  const int usable = prob.M - s_min + 1;
  for (const Option& o : prob.actions[static_cast<std::size_t>(i)])
    if (o.size <= usable) return o.size;
  return 0;
}

Allocation assemble(const Problem& prob, const std::vector<int>& sizes,
                    const std::vector<int>& starts, ProofStatus proof,
                    bool timed_out) {
  Allocation alloc;
  alloc.alpha = prob.alpha.value;
  alloc.size = sizes;
  alloc.start = starts;
  alloc.proof = proof;
  alloc.timed_out = timed_out;
  for (int i = 0; i < prob.P->n; ++i) {
    const int size = sizes[static_cast<std::size_t>(i)];
    if (size <= 0) continue;
    ++alloc.served;
    const int j = size / prob.U->granule - 1;
    alloc.objective += welfare_term(prob.Un->at(i, j), prob.alpha);
  }
  return alloc;
}

Allocation solve_exact(const Problem& prob, const SolverConfig& cfg) {
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(cfg.time_budget_secs));
  const int s_min = cfg.strict_boundary ? 2 : 1;

  std::vector<int> sizes(static_cast<std::size_t>(prob.P->n), 0);
  std::vector<int> starts(static_cast<std::size_t>(prob.P->n), 0);
  for (int i : prob.singles) {
    const int size = best_single_size(prob, i, s_min);
    sizes[static_cast<std::size_t>(i)] = size;
    starts[static_cast<std::size_t>(i)] = size > 0 ? s_min : 0;
  }

  bool stopped = false;
  bool wall = false;
  for (const auto& ids : prob.components) {
    std::vector<int> comp_links;
    ComponentSearch search = make_search(prob, ids, comp_links, true, cfg);
    Candidate best = search.run(deadline, cfg.node_limit, &stopped, &wall);
    for (std::size_t q = 0; q < ids.size(); ++q) {
      sizes[static_cast<std::size_t>(ids[q])] = best.sizes[q];
      starts[static_cast<std::size_t>(ids[q])] = best.starts[q];
    }
  }
  return assemble(prob, sizes, starts,
                  stopped ? ProofStatus::heuristic : ProofStatus::exact_optimal,
                  wall);
}

Allocation solve_two_stage(const Problem& prob, const SolverConfig& cfg) {
  const LinkUtilizationMatrix& P = *prob.P;
  const int g = prob.U->granule;
  const int s_min = cfg.strict_boundary ? 2 : 1;

  std::vector<int> sizes(static_cast<std::size_t>(P.n), 0);
  for (int i : prob.singles)
    sizes[static_cast<std::size_t>(i)] = best_single_size(prob, i, s_min);

  // One deadline for the whole solve; conflict-repair re-solves share it.
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(cfg.time_budget_secs));

  // Stage A under the current cut set.
  std::vector<std::vector<int>> cut_ids;      // global ids per cut
  std::vector<std::vector<int>> cut_sizes;
  bool stopped = false;
  bool wall = false;
  auto run_stage_a = [&]() {
    for (const auto& ids : prob.components) {
      std::vector<int> comp_links;
      ComponentSearch search = make_search(prob, ids, comp_links, false, cfg);
      std::vector<Cut> local;
      for (std::size_t c = 0; c < cut_ids.size(); ++c) {
        Cut cut;
        bool inside = true;
        for (std::size_t q = 0; q < cut_ids[c].size(); ++q) {
          const auto it =
              std::find(ids.begin(), ids.end(), cut_ids[c][q]);
          if (it == ids.end()) {
            inside = false;
            break;
          }
          cut.member_pos.push_back(static_cast<int>(it - ids.begin()));
          cut.sizes.push_back(cut_sizes[c][q]);
        }
        if (inside) local.push_back(std::move(cut));
      }
      search.set_cuts(std::move(local));
      Candidate best = search.run(deadline, cfg.node_limit, &stopped, &wall);
      for (std::size_t q = 0; q < ids.size(); ++q)
        sizes[static_cast<std::size_t>(ids[q])] = best.sizes[q];
    }
  };

  run_stage_a();
  bool repaired = false;
  SpectrumResult placed =
      assign_spectrum(sizes, P, prob.M, cfg.policy, cfg.strict_boundary);
  int cuts_used = 0;
  while (!placed.ok && cuts_used < cfg.cut_limit) {
    std::vector<int> ids = placed.conflict;
    std::vector<int> cs;
    cs.reserve(ids.size());
    for (int i : ids) cs.push_back(sizes[static_cast<std::size_t>(i)]);
    cut_ids.push_back(std::move(ids));
    cut_sizes.push_back(std::move(cs));
    ++cuts_used;
    repaired = true;
    run_stage_a();
    placed = assign_spectrum(sizes, P, prob.M, cfg.policy, cfg.strict_boundary);
  }
  while (!placed.ok) {
    // Past the cut limit: shrink the largest conflicting size one granule
    // and retry the placement alone.
    int pick = -1;
    for (int i : placed.conflict) {
      const int sz = sizes[static_cast<std::size_t>(i)];
      if (sz <= 0) continue;
      if (pick < 0 || sz > sizes[static_cast<std::size_t>(pick)] ||
          (sz == sizes[static_cast<std::size_t>(pick)] && i < pick))
        pick = i;
    }
    sizes[static_cast<std::size_t>(pick)] -= g;
    repaired = true;
    placed = assign_spectrum(sizes, P, prob.M, cfg.policy, cfg.strict_boundary);
  }

  const bool proven = !stopped && !repaired;
  return assemble(prob, sizes, placed.start,
                  proven ? ProofStatus::exact_optimal : ProofStatus::heuristic,
                  wall);
}

}  // namespace

Allocation solve_alpha_fair(const LinkUtilizationMatrix& P,
                            const UtilityMatrix& U,
                            const NormalizedUtilityMatrix& Un, int M,
                            AlphaParameter alpha, const SolverConfig& config) {
  config.validate();
  if (config.mode == SolverMode::brute_force_oracle)
    return brute_force_oracle(P, U, Un, M, alpha, config.strict_boundary);
  Problem prob = build_problem(P, U, Un, M, alpha);
  if (config.mode == SolverMode::exact) return solve_exact(prob, config);
  return solve_two_stage(prob, config);
}

void write_allocation_csv(std::ostream& os, const Allocation& alloc) {
  os << "connection_id,size_fs,start_slot,blocked\n";
  for (std::size_t i = 0; i < alloc.size.size(); ++i) {
    os << i << ',' << alloc.size[i] << ',';
    if (alloc.size[i] > 0) os << alloc.start[i];
    os << ',' << (alloc.size[i] == 0 ? 1 : 0) << '\n';
  }
}

Allocation read_allocation_csv(std::istream& is) {
  Allocation alloc;
  std::string line;
  if (!std::getline(is, line) ||
      line.rfind("connection_id,size_fs,start_slot,blocked", 0) != 0)
    throw ConfigError("allocation csv: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');  // connection_id, implicit by order
    std::getline(ss, field, ',');
    const int size = std::stoi(field);
    std::getline(ss, field, ',');
    const int start = field.empty() ? 0 : std::stoi(field);
    alloc.size.push_back(size);
    alloc.start.push_back(start);
    if (size > 0) ++alloc.served;
  }
  return alloc;
}

}  // namespace afrsa
