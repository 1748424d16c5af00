#pragma once

#include "tms/metric.hpp"

#include <span>
#include <string>
#include <vector>

namespace tms {

/// An r-net of some ground set: members pairwise farther than `radius`
/// apart, every ground point within `radius` of a member.  The first
/// `terminal_prefix_len` members come from the priority (terminal) class.
struct Net {
  double radius = 0;
  std::vector<Index> members;
  std::size_t terminal_prefix_len = 0;
};

/// Greedy terminal r-net.  Candidates are scanned priority class first, then
/// the rest, ascending index within each class; a candidate is taken when no
/// earlier member covers it.  Throws std::invalid_argument("empty ground set")
/// or on r <= 0.
Net greedy_net(std::span<const Index> ground, const FiniteMetric& metric, double r,
               std::span<const Index> priority = {});

/// Refines a coarser net to radius r < coarse.radius: the terminal members of
/// `coarse` are seeded first (in their coarse order), then the remaining
/// `priority` points of the ground set, then everything else.
Net refine_net(const Net& coarse, std::span<const Index> ground, const FiniteMetric& metric,
               double r, std::span<const Index> priority = {});

/// Greedy net over an explicit candidate order (no re-sorting).  Building
/// block for the two functions above and for nets over pseudo-metrics.
template <typename Dist>
std::vector<Index> greedy_net_in_order(std::span<const Index> order, double r, Dist&& dist) {
  std::vector<Index> members;
  for (Index c : order) {
    const bool covered =
        std::any_of(members.begin(), members.end(), [&](Index m) { return approx_le(dist(m, c), r); });
    if (!covered) members.push_back(c);
  }
  return members;
}

/// Separation/covering/terminal-first check of `net` against `ground`.
/// Returns a description of each violated invariant (empty when valid).
std::vector<std::string> validate_net(const Net& net, std::span<const Index> ground,
                                      const FiniteMetric& metric,
                                      std::span<const Index> priority = {});

struct DoublingEstimate {
  int lambda = 1;
  bool exhaustive = true;
};

/// Estimated doubling constant: the largest greedy r-net of a ball B(x, 2r)
/// over the probed (x, r) pairs.  With n <= exhaustive_limit every x is
/// probed with every r in {d(x,y)/2 : y != x}; larger spaces probe a fixed
/// stride of centres and a quantile subset of radii.  Deterministic.
DoublingEstimate estimate_doubling(const FiniteMetric& metric, Index exhaustive_limit = 500);

inline int estimate_doubling_constant(const FiniteMetric& metric) {
  return estimate_doubling(metric).lambda;
}

/// Packing check |B(x,q) ∩ net| <= lambda^ceil(log2 ceil(2q/r)) over all x in
/// the metric.  Throws std::invalid_argument if the net is not r-separated.
bool packing_audit(const Net& net, const FiniteMetric& metric, double q, int lambda);

/// lambda^ceil(log2 ceil(2q/r)) as a double (may be astronomically large).
double packing_bound(double q, double r, int lambda);

}  // namespace tms
