#pragma once

#include "tms/metric.hpp"
#include "tms/terminal.hpp"

#include <cstdint>
#include <vector>

namespace tms {

/// Random orthogonal projection R^in_dim -> R^out_dim (returned as an
/// out_dim x in_dim matrix).  With out_dim >= in_dim the columns are
/// orthonormal and the map is an isometry; otherwise the rows are
/// orthonormal and scaled by sqrt(in_dim / out_dim).
MatrixXd random_orthogonal_projection(Index in_dim, Index out_dim, std::uint64_t seed);

/// ceil(8 ln k / eps^2).
Index jl_dimension(Index k, double eps);

struct L2Embedding {
  Index target_dim = 0;
  std::uint64_t seed = 0;
  std::vector<Index> y_points;
  HangMap hang;
  MatrixXd projection;  // target_dim x ambient
  MatrixXd coords;      // n x (target_dim + 1)
};

/// Projects Y to target_dim dimensions and hangs X \ Y with one extra
/// coordinate.  Throws std::invalid_argument for non-Euclidean input.
L2Embedding embed_l2_terminal(const TerminalInstance& inst, Index target_dim, std::uint64_t seed);
L2Embedding embed_l2_terminal(const TerminalInstance& inst, const Enrichment& en, Index target_dim,
                              std::uint64_t seed);

}  // namespace tms
