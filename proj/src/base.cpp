#include "tms/base.hpp"

#include "tms/net.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tms {

NetHierarchy build_net_hierarchy(std::span<const Index> vertices, const FiniteMetric& metric) {
  if (vertices.empty()) throw std::invalid_argument("empty point list");
  NetHierarchy h;
  std::vector<Index> level(vertices.begin(), vertices.end());
  std::sort(level.begin(), level.end());
  level.erase(std::unique(level.begin(), level.end()), level.end());
  const double min_d = subset_min_distance(metric, level);
  double r = min_d > 0 ? min_d / 2 : 1.0;
  auto dist = [&](Index a, Index b) { return metric(a, b); };
  for (;;) {
    h.radii.push_back(r);
    h.nets.push_back(level);
    if (level.size() == 1) break;
    r *= 2;
    auto next = greedy_net_in_order(std::span<const Index>(level), r, dist);
    std::vector<Index> parent(level.size());
    for (std::size_t a = 0; a < level.size(); ++a) {
      double best = std::numeric_limits<double>::infinity();
      for (Index c : next) {
        const double v = metric(level[a], c);
        if (v < best) {
          best = v;
          parent[a] = c;
        }
      }
    }
    h.parents.push_back(std::move(parent));
    level = std::move(next);
  }
  return h;
}

BaseSpanner build_base_spanner(std::span<const Index> vertices, const FiniteMetric& metric, double eps,
                               double cross_factor) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps_base must lie in (0,1)");
  const NetHierarchy h = build_net_hierarchy(vertices, metric);
  BaseSpanner sp;
  sp.vertices = h.nets.front();
  sp.eps = eps;
  sp.cross_factor = cross_factor > 0 ? cross_factor : default_cross_factor(eps);
  sp.levels = h.nets.size();

  auto add = [&](Index a, Index b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    sp.edges.push_back({a, b, metric(a, b)});
  };
  for (std::size_t i = 0; i < h.nets.size(); ++i) {
    const auto& net = h.nets[i];
    const double reach = sp.cross_factor * h.radii[i];
    for (std::size_t a = 0; a < net.size(); ++a)
      for (std::size_t b = a + 1; b < net.size(); ++b)
        if (approx_le(metric(net[a], net[b]), reach)) add(net[a], net[b]);
    if (i < h.parents.size())
      for (std::size_t a = 0; a < net.size(); ++a) add(net[a], h.parents[i][a]);
  }
  std::sort(sp.edges.begin(), sp.edges.end(),
            [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  sp.edges.erase(std::unique(sp.edges.begin(), sp.edges.end(),
                             [](const Edge& x, const Edge& y) { return x.u == y.u && x.v == y.v; }),
                 sp.edges.end());
  return sp;
}

BaseLabeling::BaseLabeling(std::vector<Index> vertices, std::vector<std::vector<LabelEntry>> labels,
                           std::vector<double> radii, double eps)
    : vertices_(std::move(vertices)), labels_(std::move(labels)), radii_(std::move(radii)), eps_(eps) {
  if (vertices_.size() != labels_.size()) throw std::invalid_argument("label count mismatch");
  if (!std::is_sorted(vertices_.begin(), vertices_.end()))
    throw std::invalid_argument("labeled vertices must be ascending");
  for (auto& l : labels_)
    std::sort(l.begin(), l.end(), [](const LabelEntry& x, const LabelEntry& y) {
      return x.level != y.level ? x.level < y.level : x.center < y.center;
    });
}

bool BaseLabeling::contains(Index v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

const std::vector<LabelEntry>& BaseLabeling::label(Index v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v)
    throw std::out_of_range("unknown index " + std::to_string(v));
  return labels_[static_cast<std::size_t>(it - vertices_.begin())];
}

std::size_t BaseLabeling::max_label_size() const {
  std::size_t best = 0;
  for (const auto& l : labels_) best = std::max(best, l.size());
  return best;
}

std::size_t BaseLabeling::total_entries() const {
  std::size_t total = 0;
  for (const auto& l : labels_) total += l.size();
  return total;
}

BaseLabeling build_base_labeling(std::span<const Index> vertices, const FiniteMetric& metric, double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps_base must lie in (0,1)");
  const NetHierarchy h = build_net_hierarchy(vertices, metric);
  const double reach = default_reach_factor(eps);
  const auto& all = h.nets.front();
  std::vector<std::vector<LabelEntry>> labels(all.size());
  for (std::size_t a = 0; a < all.size(); ++a) {
    const Index u = all[a];
    for (std::size_t i = 0; i < h.nets.size(); ++i) {
      const double limit = reach * h.radii[i];
      for (Index p : h.nets[i]) {
        const double dv = metric(u, p);
        if (approx_le(dv, limit)) labels[a].push_back({static_cast<std::int32_t>(i), p, dv});
      }
    }
  }
  return BaseLabeling(all, std::move(labels), h.radii, eps);
}

double decode(std::span<const LabelEntry> a, std::span<const LabelEntry> b, std::size_t* touched) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    const auto& x = a[ia];
    const auto& y = b[ib];
    if (x.level != y.level ? x.level < y.level : x.center < y.center) {
      ++ia;
    } else if (y.level != x.level ? y.level < x.level : y.center < x.center) {
      ++ib;
    } else {
      best = std::min(best, x.dist + y.dist);
      ++ia;
      ++ib;
    }
  }
  if (touched) *touched += ia + ib;
  return best;
}

double base_oracle_query(const BaseLabeling& labeling, Index u, Index v, std::size_t* touched) {
  const auto& lu = labeling.label(u);
  const auto& lv = labeling.label(v);
  if (u == v) return 0.0;
  return decode(lu, lv, touched);
}

}  // namespace tms
