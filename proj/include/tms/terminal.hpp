#pragma once

#include "tms/base.hpp"
#include "tms/metric.hpp"
#include "tms/partition.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tms {

enum class HangReason { kNone, kFinalMarkedCenter, kNearestTerminal };

struct HangEntry {
  Index target = -1;  // -1 for points of Y
  double dist = 0;
  HangReason reason = HangReason::kNone;
};

/// Attachment of every x outside Y to a single point of Y.
struct HangMap {
  std::vector<HangEntry> entries;  // indexed by point

  bool hanged(Index x) const { return entries[static_cast<std::size_t>(x)].target >= 0; }
  const HangEntry& operator[](Index x) const { return entries[static_cast<std::size_t>(x)]; }
  std::size_t hanged_count() const;
};

/// Points in a final marked cluster hang on its centre; every other point of
/// X \ Y hangs on its nearest terminal.
HangMap hang_points(const PartialPartition& pp, const EnrichedSet& es, const TerminalInstance& inst);

/// Everything the doubling-X construction derives from an instance: the
/// partition, Y, and the hang map.  With k = 1, Y = K and every other point
/// hangs on the single terminal.
struct Enrichment {
  std::optional<PartialPartition> partition;
  EnrichedSet enriched;
  HangMap hang;
};

Enrichment enrich(const TerminalInstance& inst);

enum class TerminalMode { kDoublingX, kDoublingK };

const char* mode_name(TerminalMode mode);

struct TerminalSpanner {
  TerminalMode mode = TerminalMode::kDoublingX;
  double eps = 0;
  Index n = 0;
  std::vector<Index> terminals;
  BaseSpanner base;             // on Y (doubling-X) or on K (doubling-K)
  std::vector<Edge> extension;  // hang edges, or the N(x) edges
  /// Doubling-X: hang map of X \ Y.  Doubling-K: empty.
  HangMap hang;
  /// Doubling-K: |N(x)| per point (0 for terminals).
  std::vector<std::size_t> reach_sizes;

  std::size_t edge_count() const { return base.edges.size() + extension.size(); }
  std::vector<Edge> edges() const;
  /// Certified expansion bound: 1 + 12 eps (doubling-X), 1 + 3 eps (doubling-K).
  double certified_stretch() const;
};

/// Doubling-X terminal spanner: base spanner on Y plus one hang edge per
/// point of X \ Y.
TerminalSpanner build_terminal_spanner(const TerminalInstance& inst);
TerminalSpanner build_terminal_spanner(const TerminalInstance& inst, const Enrichment& en);

/// Doubling-K terminal spanner: base spanner on K plus edges from each
/// non-terminal x to every point of N(x).
TerminalSpanner build_k_doubling_spanner(const TerminalInstance& inst);

/// N(x) for a non-terminal x: greedy (eps R)-net of B(x, 2R/eps) ∩ K seeded
/// with the nearest terminal, where R = d(x, K).  Returned in net order.
std::vector<Index> terminal_reach(const TerminalInstance& inst, Index x);

/// Doubling-X labeling / oracle: base labels on Y; every hanged point keeps
/// its hang target and distance.
class TerminalLabeling {
 public:
  TerminalLabeling() = default;
  TerminalLabeling(BaseLabeling base, HangMap hang, std::vector<Index> terminals, double eps);

  /// d(x,u(x)) + decode(u(x), v) for hanged x, decode(x, v) otherwise.
  /// Throws std::invalid_argument when v is not a labeled (Y) point.
  double query(Index x, Index v, std::size_t* touched = nullptr) const;

  const BaseLabeling& base() const { return base_; }
  const HangMap& hang() const { return hang_; }
  const std::vector<Index>& terminals() const { return terminals_; }
  double eps() const { return eps_; }
  Index n() const { return static_cast<Index>(hang_.entries.size()); }
  /// Entries stored at x: its own label, or one (target, distance) record.
  std::size_t storage(Index x) const;
  double certified_stretch() const { return 1 + 12 * eps_; }

 private:
  BaseLabeling base_;
  HangMap hang_;
  std::vector<Index> terminals_;
  double eps_ = 0;
};

TerminalLabeling extend_labeling(BaseLabeling base, HangMap hang, std::vector<Index> terminals, double eps);
TerminalLabeling build_terminal_labeling(const TerminalInstance& inst);
TerminalLabeling build_terminal_labeling(const TerminalInstance& inst, const Enrichment& en);

struct ReachRecord {
  Index point = 0;
  double dist = 0;
};

/// Doubling-K labeling / oracle: base labels on K; each non-terminal x keeps
/// {(v', d(x,v')) : v' in N(x)}.
class KDoublingLabeling {
 public:
  KDoublingLabeling() = default;
  KDoublingLabeling(BaseLabeling base, std::vector<std::vector<ReachRecord>> reach,
                    std::vector<Index> terminals, double eps);

  /// min over v' in N(x) of d(x,v') + decode(v', v); decode(x, v) for x in K.
  /// Throws std::invalid_argument when v is not a terminal.
  double query(Index x, Index v, std::size_t* touched = nullptr) const;

  const BaseLabeling& base() const { return base_; }
  const std::vector<std::vector<ReachRecord>>& reach() const { return reach_; }
  const std::vector<Index>& terminals() const { return terminals_; }
  double eps() const { return eps_; }
  Index n() const { return static_cast<Index>(reach_.size()); }
  std::size_t storage(Index x) const;
  double certified_stretch() const { return 1 + 3 * eps_; }

 private:
  BaseLabeling base_;
  std::vector<std::vector<ReachRecord>> reach_;
  std::vector<Index> terminals_;
  double eps_ = 0;
};

KDoublingLabeling build_k_doubling_labeling(const TerminalInstance& inst);

/// l_p norm of a - b; p = +inf gives the max norm.
double lp_distance(const Eigen::Ref<const VectorXd>& a, const Eigen::Ref<const VectorXd>& b, double p);

/// Extends an embedding of Y (rows of `base`, aligned with `y_points`) to all
/// of X by one extra coordinate: (f(v), 0) for v in Y, (f(u(x)), d(x,u(x)))
/// for hanged x.  Returns an n x (s+1) matrix.
MatrixXd extend_embedding(const MatrixXd& base, std::span<const Index> y_points, const HangMap& hang);

}  // namespace tms
