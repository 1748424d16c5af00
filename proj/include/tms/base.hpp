#pragma once

#include "tms/metric.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tms {

struct Edge {
  Index u = 0;
  Index v = 0;
  double w = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Nested greedy nets over a vertex subset.  Level 0 holds every vertex
/// (radius min_distance / 2); level i+1 is a greedy 2 r_i-net of level i.
/// The hierarchy stops at the first single-point level.
struct NetHierarchy {
  std::vector<double> radii;
  std::vector<std::vector<Index>> nets;
  /// parents[i][a]: member of nets[i+1] covering nets[i][a] (nearest, first
  /// in net order on ties).
  std::vector<std::vector<Index>> parents;
};

NetHierarchy build_net_hierarchy(std::span<const Index> vertices, const FiniteMetric& metric);

/// Hierarchical-net spanner on a vertex subset: all pairs of level-i net
/// points within cross_factor * r_i, plus one parent edge per point per level.
/// Every edge weight is the exact metric distance.
struct BaseSpanner {
  std::vector<Index> vertices;  // ascending
  std::vector<Edge> edges;      // u < v, sorted, no duplicates
  double eps = 0;
  double cross_factor = 0;
  std::size_t levels = 0;
};

/// Default cross-edge factor 4 + 16 / eps.
inline double default_cross_factor(double eps) { return 4.0 + 16.0 / eps; }

/// Throws std::invalid_argument on an empty vertex list or eps outside (0,1).
BaseSpanner build_base_spanner(std::span<const Index> vertices, const FiniteMetric& metric, double eps,
                               double cross_factor = 0);

struct LabelEntry {
  std::int32_t level = 0;
  Index center = 0;
  double dist = 0;
};

/// Net-hierarchy distance labels: vertex u stores, for every level i, the
/// level-i net points within reach_factor * r_i of u together with their
/// distances.  decode() takes the best common (level, centre) entry.
class BaseLabeling {
 public:
  BaseLabeling() = default;
  BaseLabeling(std::vector<Index> vertices, std::vector<std::vector<LabelEntry>> labels,
               std::vector<double> radii, double eps);

  const std::vector<Index>& vertices() const { return vertices_; }
  const std::vector<double>& radii() const { return radii_; }
  double eps() const { return eps_; }
  bool contains(Index v) const;
  /// Throws std::out_of_range for vertices outside the labeled set.
  const std::vector<LabelEntry>& label(Index v) const;

  std::size_t max_label_size() const;
  std::size_t total_entries() const;

 private:
  std::vector<Index> vertices_;  // ascending
  std::vector<std::vector<LabelEntry>> labels_;  // sorted by (level, center)
  std::vector<double> radii_;
  double eps_ = 0;
};

/// Label reach factor 8 / eps + 2.
inline double default_reach_factor(double eps) { return 8.0 / eps + 2.0; }

BaseLabeling build_base_labeling(std::span<const Index> vertices, const FiniteMetric& metric, double eps);

/// Distance estimate from two labels alone; +inf when the labels share no
/// entry.  `touched` (optional) accumulates the number of entries scanned.
double decode(std::span<const LabelEntry> a, std::span<const LabelEntry> b,
              std::size_t* touched = nullptr);

/// Centralized oracle over a BaseLabeling.  Identical vertices return 0.
/// Throws std::out_of_range for unknown indices.
double base_oracle_query(const BaseLabeling& labeling, Index u, Index v, std::size_t* touched = nullptr);

}  // namespace tms
