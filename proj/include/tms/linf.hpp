#pragma once

#include "tms/metric.hpp"

#include <span>
#include <vector>

namespace tms {

/// Shortest-path metric of the complete graph on X with weights `dist`,
/// after zeroing every edge {x, v} with v in `terminals` and
/// dist(x, v) < threshold.
MatrixXd contracted_metric(const MatrixXd& dist, std::span<const Index> terminals, double threshold);

/// d_i for i = 0..ceil(log2 Delta), on the input rescaled so that its
/// minimum distance is 1.  Level i zeroes terminal edges shorter than
/// 2^(i-1) * eps / k_eff with k_eff = max(k, 4).
struct ContractedMetricFamily {
  double scale = 1;  // rescaled distance = original * scale
  double eps = 0;
  Index k_eff = 4;
  MatrixXd base;  // rescaled d
  std::vector<double> thresholds;
  std::vector<MatrixXd> levels;
};

ContractedMetricFamily build_contracted_metrics(const TerminalInstance& inst);

/// Greedy split of `net` into families whose members are pairwise at
/// d_i-distance >= separation: family j takes, in net order, every still
/// unassigned point compatible with the points already in it.
std::vector<std::vector<Index>> build_separated_families(std::span<const Index> net, const MatrixXd& di,
                                                         double separation);

struct LinfLevel {
  int index = 0;
  double radius = 0;  // eps * 2^(i-2)
  std::vector<Index> net;
  std::vector<std::vector<Index>> families;
};

/// Terminal embedding into l_inf^D, in rescaled units (multiply an input
/// distance by `scale` to compare).  coords(x, h) sums the truncated
/// distances g_ij(x) = min(2^(i+1), d_i(x, N_ij)) over all (i, j) with
/// (i t + j) mod D = h.
struct LinfEmbedding {
  double eps = 0;
  double scale = 1;
  Index k_eff = 4;
  int t = 0;
  int dim = 0;  // D = ceil(2 t log2(2 k_eff / eps))
  std::vector<LinfLevel> levels;
  MatrixXd coords;  // n x D
  /// g(x, i*t + j) = g_ij(x); zero where level i has fewer than j+1 families.
  MatrixXd g;

  int slot(int level, int family) const { return (level * t + family) % dim; }
};

/// Throws std::invalid_argument when the instance has no terminals.  Warns
/// on stderr and pads k to 4 when k < 4.
LinfEmbedding embed_linf(const TerminalInstance& inst);
LinfEmbedding embed_linf(const TerminalInstance& inst, const ContractedMetricFamily& family);

int linf_dimension(int t, Index k_eff, double eps);

}  // namespace tms
