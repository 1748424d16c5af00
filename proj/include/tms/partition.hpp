#pragma once

#include "tms/metric.hpp"
#include "tms/net.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tms {

struct Cluster {
  Index center = -1;
  std::vector<Index> members;
  bool final = false;
};

/// One scale of the multi-scale partial partition.
struct PartitionLevel {
  int index = 0;
  double radius = 0;            // r_i = 2^i * eps^2 * delta
  std::vector<Index> residual;  // R_i, ascending
  Net net;                      // terminal r_i-net of R_i; clusters follow its order
  std::vector<Cluster> clusters;
};

/// Leveled ball-carving of X by terminal nets.  Clusters whose centre is at
/// least r_i / eps away from K are final and never re-partitioned.
struct PartialPartition {
  double eps = 0;
  double delta = 0;
  double diameter = 0;
  int top = 0;                       // s
  std::vector<PartitionLevel> levels;  // levels[i] for i = 0..s

  /// Level of the final cluster containing x, or -1 if x has none.
  std::vector<int> final_level;
  /// Position of that cluster within levels[final_level].clusters.
  std::vector<int> final_cluster;
};

/// Runs the partial-partition construction from level s = ceil(log2(Delta /
/// (eps^2 delta))) down to 0.  Throws std::invalid_argument("need at least
/// two terminals") when k < 2.  Emits a warning on stderr when eps > 1/20.
PartialPartition build_partial_partitions(const TerminalInstance& inst);

/// Checks every structural invariant of the partition; returns descriptions
/// of the violations found.
std::vector<std::string> validate_partition(const PartialPartition& pp, const TerminalInstance& inst);

/// Text dump "level i r_i" followed by one "center final" line per cluster.
void dump_partition(std::ostream& out, const PartialPartition& pp);

struct MarkWitness {
  Index terminal = -1;
  int level = -1;
  int cluster = -1;
};

/// Enriched terminal set Y: centres of clusters marked by some terminal u at
/// a level in [i_u - 2b, i_u] and within 2 r_{i_u} / eps^2 of u.
struct EnrichedSet {
  std::vector<Index> points;  // Y, ascending
  int b = 0;                  // ceil(log2(1/eps))
  std::vector<int> top_level;         // i_u, aligned with inst.terminals()
  std::vector<std::size_t> mark_counts;  // clusters marked per terminal
  std::vector<std::vector<char>> marked;  // [level][cluster]
  std::vector<MarkWitness> witness;   // aligned with points

  bool contains(Index x) const;
};

EnrichedSet mark_clusters(const PartialPartition& pp, const TerminalInstance& inst);

int log2_ceil_inverse(double eps);

struct EnrichedSizeReport {
  std::size_t size = 0;
  std::size_t terminals = 0;
  int lambda = 1;
  int b = 0;
  double bound = 0;               // k * lambda^(5b)
  double per_terminal_bound = 0;  // (2b+1) * lambda^(4b+2)
  std::size_t max_marks = 0;
  std::vector<std::size_t> mark_counts;
  bool pass = false;
};

EnrichedSizeReport enriched_size_audit(const EnrichedSet& es, int lambda, std::size_t k);

/// Points in a final unmarked cluster of level i < s for which no terminal
/// u' satisfies d(x,u') in [r_i/(2 eps), 3 r_i/eps] with every terminal w at
/// distance <= r_i or >= r_i/eps^2 from u'.  Empty when the property holds.
std::vector<Index> isolated_terminal_violations(const PartialPartition& pp, const EnrichedSet& es,
                                                const TerminalInstance& inst);

}  // namespace tms
