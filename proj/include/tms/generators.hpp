#pragma once

#include "tms/metric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tms {

/// Instance families:
///   uniform-square     n uniform points in [0,1]^2, k random terminals
///   uniform-cube       n uniform points in [0,1]^dim, k random terminals
///   gaussian-clusters  `clusters` Gaussian blobs (sigma) in the unit square
///   grid               ceil(sqrt n) x ceil(sqrt n) lattice truncated to n points
///   line               points 0, spacing, 2 spacing, ...; k evenly spread terminals
///   completion         K on a planar grid, X \ K an arbitrary metric completion
///   lower-bound        K an eps-net of the unit sphere in R^ceil(log2 lambda);
///                      d = 1 across, 2 between non-terminals
struct GenParams {
  std::string kind = "uniform-square";
  Index n = 100;
  Index k = 10;
  double eps = 0.1;
  std::uint64_t seed = 1;
  int dim = 20;
  int lambda = 4;
  int clusters = 5;
  double sigma = 0.05;
  double spacing = 1.0;
};

struct LowerBoundInfo {
  int sphere_dim = 0;            // t = ceil(log2 lambda)
  std::size_t sample_count = 0;  // 10^4 * t sphere samples
  std::size_t full_net_size = 0; // greedy eps-net size before truncation
  MatrixXd sphere_points;        // coordinates of K
};

struct GeneratedInstance {
  TerminalInstance instance;
  std::optional<LowerBoundInfo> lower_bound;
};

/// Throws std::invalid_argument on unknown kinds or invalid parameters.
GeneratedInstance gen_instance(const GenParams& params);

const std::vector<std::string>& instance_kinds();

}  // namespace tms
