#include "tms/l2.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tms {

MatrixXd random_orthogonal_projection(Index in_dim, Index out_dim, std::uint64_t seed) {
  if (in_dim <= 0 || out_dim <= 0) throw std::invalid_argument("dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Index tall = std::max(in_dim, out_dim);
  const Index thin = std::min(in_dim, out_dim);
  MatrixXd a(tall, thin);
  for (Index j = 0; j < thin; ++j)
    for (Index i = 0; i < tall; ++i) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixXd> qr(a);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(tall, thin);
  // Fix column signs so the draw is Haar-distributed.
  const MatrixXd r = qr.matrixQR().topRows(thin).triangularView<Eigen::Upper>();
  for (Index j = 0; j < thin; ++j)
    if (r(j, j) < 0) q.col(j) *= -1;
  if (out_dim >= in_dim) return q;
  return std::sqrt(static_cast<double>(in_dim) / static_cast<double>(out_dim)) * q.transpose();
}

Index jl_dimension(Index k, double eps) {
  return static_cast<Index>(std::ceil(8.0 * std::log(static_cast<double>(std::max<Index>(k, 2))) / (eps * eps)));
}

L2Embedding embed_l2_terminal(const TerminalInstance& inst, Index target_dim, std::uint64_t seed) {
  if (!inst.metric().euclidean()) throw std::invalid_argument("l2 terminal embedding needs Euclidean input");
  return embed_l2_terminal(inst, enrich(inst), target_dim, seed);
}

L2Embedding embed_l2_terminal(const TerminalInstance& inst, const Enrichment& en, Index target_dim,
                              std::uint64_t seed) {
  if (!inst.metric().euclidean()) throw std::invalid_argument("l2 terminal embedding needs Euclidean input");
  if (target_dim <= 0) throw std::invalid_argument("target dimension must be positive");
  L2Embedding emb;
  emb.target_dim = target_dim;
  emb.seed = seed;
  emb.y_points = en.enriched.points;
  emb.hang = en.hang;
  const MatrixXd& pts = inst.metric().coords();
  emb.projection = random_orthogonal_projection(pts.cols(), target_dim, seed);
  MatrixXd base(static_cast<Index>(emb.y_points.size()), target_dim);
  for (std::size_t a = 0; a < emb.y_points.size(); ++a)
    base.row(static_cast<Index>(a)) = (emb.projection * pts.row(emb.y_points[a]).transpose()).transpose();
  emb.coords = extend_embedding(base, emb.y_points, emb.hang);
  return emb;
}

}  // namespace tms
