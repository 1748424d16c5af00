#include "tms/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tms {
namespace {

std::vector<char> membership(std::span<const Index> points, Index n) {
  std::vector<char> flag(static_cast<std::size_t>(n), 0);
  for (Index p : points)
    if (p >= 0 && p < n) flag[static_cast<std::size_t>(p)] = 1;
  return flag;
}

std::vector<Index> sorted_copy(std::span<const Index> pts) {
  std::vector<Index> v(pts.begin(), pts.end());
  std::sort(v.begin(), v.end());
  return v;
}

Net finish(std::vector<Index> order, std::size_t priority_count, const FiniteMetric& metric,
           double r) {
  Net net;
  net.radius = r;
  auto dist = [&](Index a, Index b) { return metric(a, b); };
  net.members = greedy_net_in_order(std::span<const Index>(order), r, dist);
  // Members keep scan order, so the priority picks form a prefix.
  std::vector<char> prio(static_cast<std::size_t>(metric.size()), 0);
  for (std::size_t a = 0; a < priority_count; ++a) prio[static_cast<std::size_t>(order[a])] = 1;
  for (Index m : net.members) {
    if (!prio[static_cast<std::size_t>(m)]) break;
    ++net.terminal_prefix_len;
  }
  return net;
}

}  // namespace

Net greedy_net(std::span<const Index> ground, const FiniteMetric& metric, double r,
               std::span<const Index> priority) {
  if (ground.empty()) throw std::invalid_argument("empty ground set");
  if (!(r > 0)) throw std::invalid_argument("net radius must be positive");
  const auto is_prio = membership(priority, metric.size());
  const auto g = sorted_copy(ground);
  std::vector<Index> order;
  order.reserve(g.size());
  for (Index p : g)
    if (is_prio[static_cast<std::size_t>(p)]) order.push_back(p);
  const std::size_t prio_count = order.size();
  for (Index p : g)
    if (!is_prio[static_cast<std::size_t>(p)]) order.push_back(p);
  return finish(std::move(order), prio_count, metric, r);
}

Net refine_net(const Net& coarse, std::span<const Index> ground, const FiniteMetric& metric,
               double r, std::span<const Index> priority) {
  if (ground.empty()) throw std::invalid_argument("empty ground set");
  if (!(r > 0)) throw std::invalid_argument("net radius must be positive");
  const auto in_ground = membership(ground, metric.size());
  const auto is_prio = membership(priority, metric.size());
  std::vector<char> placed(static_cast<std::size_t>(metric.size()), 0);
  std::vector<Index> order;
  order.reserve(ground.size());
  for (std::size_t a = 0; a < coarse.terminal_prefix_len && a < coarse.members.size(); ++a) {
    const Index p = coarse.members[a];
    if (in_ground[static_cast<std::size_t>(p)] && !placed[static_cast<std::size_t>(p)]) {
      order.push_back(p);
      placed[static_cast<std::size_t>(p)] = 1;
    }
  }
  const auto g = sorted_copy(ground);
  for (Index p : g)
    if (is_prio[static_cast<std::size_t>(p)] && !placed[static_cast<std::size_t>(p)]) {
      order.push_back(p);
      placed[static_cast<std::size_t>(p)] = 1;
    }
  const std::size_t prio_count = order.size();
  for (Index p : g)
    if (!placed[static_cast<std::size_t>(p)]) {
      order.push_back(p);
      placed[static_cast<std::size_t>(p)] = 1;
    }
  return finish(std::move(order), prio_count, metric, r);
}

std::vector<std::string> validate_net(const Net& net, std::span<const Index> ground,
                                      const FiniteMetric& metric,
                                      std::span<const Index> priority) {
  std::vector<std::string> issues;
  const double r = net.radius;
  for (std::size_t a = 0; a < net.members.size(); ++a)
    for (std::size_t b = a + 1; b < net.members.size(); ++b)
      if (approx_le(metric(net.members[a], net.members[b]), r)) {
        issues.push_back("separation: members " + std::to_string(net.members[a]) + " and " +
                         std::to_string(net.members[b]) + " within r");
        a = net.members.size();
        break;
      }
  for (Index x : ground) {
    const bool covered = std::any_of(net.members.begin(), net.members.end(),
                                     [&](Index m) { return approx_le(metric(x, m), r); });
    if (!covered) {
      issues.push_back("covering: point " + std::to_string(x) + " not within r of the net");
      break;
    }
  }
  if (!priority.empty()) {
    const auto is_prio = membership(priority, metric.size());
    bool seen_other = false;
    for (Index m : net.members) {
      const bool p = is_prio[static_cast<std::size_t>(m)] != 0;
      if (!p) seen_other = true;
      if (p && seen_other) {
        issues.push_back("terminal-first: terminal " + std::to_string(m) +
                         " follows a non-terminal member");
        break;
      }
    }
  }
  return issues;
}

DoublingEstimate estimate_doubling(const FiniteMetric& metric, Index exhaustive_limit) {
  const Index n = metric.size();
  DoublingEstimate est;
  est.exhaustive = n <= exhaustive_limit;
  if (n <= 1) return est;

  std::vector<Index> centres;
  const Index stride = est.exhaustive ? 1 : std::max<Index>(1, n / 256);
  for (Index x = 0; x < n; x += stride) centres.push_back(x);

  std::vector<std::pair<double, Index>> by_dist(static_cast<std::size_t>(n));
  std::vector<Index> ball;
  std::vector<double> radii;
  for (Index x : centres) {
    for (Index y = 0; y < n; ++y) by_dist[static_cast<std::size_t>(y)] = {metric(x, y), y};
    std::sort(by_dist.begin(), by_dist.end());
    radii.clear();
    // B(x, 2r) only changes at 2r = d(x, y) and net sizes shrink as r grows,
    // so r = d(x, y) / 2 are the only radii worth probing.
    for (const auto& [dv, y] : by_dist)
      if (dv > 0 && (radii.empty() || !approx_eq(radii.back(), dv / 2))) radii.push_back(dv / 2);
    if (!est.exhaustive && radii.size() > 64) {
      std::vector<double> picked;
      for (std::size_t q = 0; q < 64; ++q) picked.push_back(radii[q * (radii.size() - 1) / 63]);
      radii = std::move(picked);
    }
    for (double r : radii) {
      ball.clear();
      for (const auto& [dv, y] : by_dist) {
        if (!approx_le(dv, 2 * r)) break;
        ball.push_back(y);
      }
      if (static_cast<int>(ball.size()) <= est.lambda) continue;
      std::sort(ball.begin(), ball.end());
      auto dist = [&](Index a, Index b) { return metric(a, b); };
      const auto members = greedy_net_in_order(std::span<const Index>(ball), r, dist);
      est.lambda = std::max(est.lambda, static_cast<int>(members.size()));
    }
  }
  return est;
}

double packing_bound(double q, double r, int lambda) {
  const double ratio = std::ceil(2 * q / r - kRelTol);
  const double expo = std::ceil(std::log2(std::max(1.0, ratio)) - kRelTol);
  return std::pow(static_cast<double>(lambda), expo);
}

bool packing_audit(const Net& net, const FiniteMetric& metric, double q, int lambda) {
  for (std::size_t a = 0; a < net.members.size(); ++a)
    for (std::size_t b = a + 1; b < net.members.size(); ++b)
      if (approx_le(metric(net.members[a], net.members[b]), net.radius))
        throw std::invalid_argument("net separation violated");
  const double bound = packing_bound(q, net.radius, lambda);
  for (Index x = 0; x < metric.size(); ++x) {
    const auto count = std::count_if(net.members.begin(), net.members.end(),
                                     [&](Index m) { return approx_le(metric(x, m), q); });
    if (static_cast<double>(count) > bound) return false;
  }
  return true;
}

}  // namespace tms
