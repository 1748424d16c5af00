#pragma once

#include "tms/base.hpp"
#include "tms/generators.hpp"
#include "tms/linf.hpp"
#include "tms/metric.hpp"
#include "tms/terminal.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tms {

/// Worker count for audits: $TMS_AUDIT_THREADS if set (>= 1), otherwise the
/// hardware concurrency.
unsigned audit_threads();

/// Runs fn(i) for i in [0, count) on audit_threads() workers.  fn must not
/// share mutable state across indices.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Exact single-source shortest paths on an undirected edge list over
/// vertices 0..n-1, one row per source.  Unreachable vertices get +inf.
MatrixXd exact_graph_distances(Index n, std::span<const Edge> edges, std::span<const Index> sources);

struct InstanceSummary {
  Index n = 0;
  Index k = 0;
  double eps = 0;
  int lambda_x = 1;
  int lambda_k = 1;
  bool lambda_exhaustive = true;
  double delta = 0;
  double diameter_k = 0;
  double aspect_k = 1;
};

InstanceSummary summarize(const TerminalInstance& inst);

struct PairStretch {
  Index x = 0;
  Index v = 0;
  double dist = 0;
  double estimate = 0;
  double ratio = 1;
};

/// Per-pair and aggregate distortion over K x X plus size counters.
struct StretchReport {
  InstanceSummary instance;
  std::string structure;
  std::string mode;
  std::vector<std::pair<std::string, double>> sizes;  // named counters, insertion order

  std::size_t pairs = 0;
  double max_ratio = 1;
  double min_ratio = 1;
  double mean_ratio = 1;
  double p50 = 1, p90 = 1, p99 = 1;
  double distortion = 1;  // max_ratio / min_ratio

  /// pass <=> lower_bound <= min_ratio and max_ratio <= certified (up to
  /// relative tolerance), or distortion <= certified when distortion_mode.
  double certified = 1;
  double lower_bound = 1;
  bool distortion_mode = false;
  bool pass = false;

  std::vector<PairStretch> worst;           // top 10 by ratio
  std::optional<PairStretch> violation;     // first failing pair, if any

  void set_size(const std::string& key, double value);
  std::optional<double> size(const std::string& key) const;
};

/// Evaluates estimate(x, v) for every x in X and v in K against the true
/// distance.  Pairs with x == v count as ratio 1.
StretchReport audit_pairs(const TerminalInstance& inst, const std::function<double(Index, Index)>& estimate,
                          double lower_bound, double certified, bool distortion_mode = false);

StretchReport audit_stretch(const TerminalSpanner& spanner, const TerminalInstance& inst);
StretchReport audit_stretch(const TerminalLabeling& labeling, const TerminalInstance& inst, bool oracle = false);
StretchReport audit_stretch(const KDoublingLabeling& labeling, const TerminalInstance& inst, bool oracle = false);
/// Embedding audit in the embedding's own units: ratio = ||f(x) - f(v)||_p /
/// (scale * d(x, v)).
StretchReport audit_embedding(const MatrixXd& coords, double p, double scale, const TerminalInstance& inst,
                              double lower_bound, double certified, bool distortion_mode);

/// All-pairs stretch of a base spanner over its vertex set, by exact shortest
/// paths.  Returns the maximum ratio (1 for a single vertex).
double base_spanner_max_stretch(const BaseSpanner& spanner, const FiniteMetric& metric);
/// All-pairs max decode ratio; min ratio in `min_ratio` when provided.
double base_labeling_max_stretch(const BaseLabeling& labeling, const FiniteMetric& metric,
                                 double* min_ratio = nullptr);

/// Violations of the hanging contract: d^(x,u) = d(x,u) and
/// max{d(x,u), d^(u,v)} <= d^(x,v) <= d(x,u) + d^(u,v) for hanged x, v in Y.
struct ExtensionCheck {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first;
};

ExtensionCheck check_extension(const HangMap& hang, std::span<const Index> y_points, const TerminalInstance& inst,
                               const std::function<double(Index, Index)>& estimate);

/// Coordinate-level checks of an l_inf embedding on `samples` seeded random
/// (pair, coordinate) draws, plus an exhaustive contraction-witness scan.
struct LinfPropertyReport {
  std::size_t samples = 0;
  std::size_t lipschitz_violations = 0;
  std::size_t truncation_violations = 0;
  std::size_t vanishing_checked = 0;
  std::size_t vanishing_violations = 0;
  std::size_t sandwich_violations = 0;
  std::size_t witness_pairs = 0;
  std::size_t witness_missing = 0;
  bool pass() const {
    return lipschitz_violations == 0 && truncation_violations == 0 && vanishing_violations == 0 &&
           sandwich_violations == 0 && witness_missing == 0;
  }
};

LinfPropertyReport audit_linf_properties(const LinfEmbedding& emb, const ContractedMetricFamily& family,
                                         const TerminalInstance& inst, std::size_t samples, std::uint64_t seed);

/// Cheapest x-v path in the complete graph of the metric that avoids the
/// direct edge {x, v}.
double detour_distance(const FiniteMetric& metric, Index x, Index v);

struct LowerBoundReport {
  Index n = 0;
  Index k = 0;
  double eps = 0;
  int lambda = 0;
  int sphere_dim = 0;
  std::size_t full_net_size = 0;
  double min_terminal_separation = 0;
  std::size_t triangle_violations = 0;
  std::size_t cross_pairs = 0;
  std::size_t forced_pairs = 0;  // detour > (1+eps) d
  double min_detour_ratio = 0;
  std::size_t required_edges = 0;  // |K| (n - |K|)
  double implied_c = 0;            // |K_full| = lambda^log2(c/eps)
  // Doubling-K spanner built on the same instance.
  std::size_t spanner_cross_edges = 0;
  std::size_t spanner_base_edges = 0;
  bool spanner_has_all_cross_edges = false;
  StretchReport spanner_audit;
  bool pass = false;
};

/// Throws std::invalid_argument unless `gen` is a lower-bound instance.
LowerBoundReport lower_bound_audit(const GeneratedInstance& gen, int lambda);

}  // namespace tms
