#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace tms {

using Index = Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Relative tolerance under which two distances are treated as equal.
inline constexpr double kRelTol = 1e-9;

/// a <= b up to relative tolerance.
inline bool approx_le(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return a <= b + kRelTol * scale;
}

inline bool approx_eq(double a, double b) { return approx_le(a, b) && approx_le(b, a); }

/// Finite metric space given either as an explicit distance matrix or as a
/// Euclidean point set (one point per row).  Euclidean metrics above
/// kOnDemandThreshold points evaluate distances from coordinates instead of
/// caching an n x n matrix.
class FiniteMetric {
 public:
  enum class Kind { kExplicit, kEuclidean };

  static constexpr Index kOnDemandThreshold = 5000;

  FiniteMetric() = default;

  /// Throws std::invalid_argument unless `dist` is square, symmetric,
  /// nonnegative and zero on the diagonal.
  static FiniteMetric from_matrix(MatrixXd dist);
  static FiniteMetric from_points(MatrixXd coords);

  Kind kind() const { return kind_; }
  Index size() const { return n_; }
  bool euclidean() const { return kind_ == Kind::kEuclidean; }
  const MatrixXd& coords() const { return coords_; }
  bool cached() const { return dist_.size() > 0; }

  double operator()(Index i, Index j) const {
    if (cached()) return dist_(i, j);
    return (coords_.row(i) - coords_.row(j)).norm();
  }

  /// Full distance matrix (materialized on demand for large Euclidean sets).
  MatrixXd matrix() const;

  double diameter() const;
  /// Smallest positive distance; 0 for spaces with fewer than two distinct points.
  double min_distance() const;

  /// Same space with every distance multiplied by `factor` (> 0).
  FiniteMetric scaled(double factor) const;

  /// Restriction to `points` (re-indexed 0..|points|-1).
  FiniteMetric subspace(std::span<const Index> points) const;

 private:
  Kind kind_ = Kind::kExplicit;
  Index n_ = 0;
  MatrixXd coords_;
  MatrixXd dist_;
};

/// Triangle-inequality check: exhaustive for n <= exhaustive_limit, otherwise
/// `samples` seeded random triples.  Returns the number of violated triples.
std::size_t triangle_violations(const FiniteMetric& metric, Index exhaustive_limit = 200,
                                std::size_t samples = 100000, unsigned seed = 1);

/// Metric space with a designated terminal subset K and accuracy parameter eps.
class TerminalInstance {
 public:
  TerminalInstance() = default;

  /// Sorts `terminals`; throws std::invalid_argument on empty/out-of-range or
  /// duplicate indices, eps outside (0,1), or two terminals at distance zero.
  TerminalInstance(FiniteMetric metric, std::vector<Index> terminals, double eps);

  const FiniteMetric& metric() const { return metric_; }
  double d(Index i, Index j) const { return metric_(i, j); }
  Index n() const { return metric_.size(); }
  Index k() const { return static_cast<Index>(terminals_.size()); }
  double eps() const { return eps_; }
  const std::vector<Index>& terminals() const { return terminals_; }
  bool is_terminal(Index x) const { return is_terminal_[static_cast<std::size_t>(x)] != 0; }

  /// Minimum distance between distinct terminals (0 when k = 1).
  double delta() const { return delta_; }
  /// Maximum distance between terminals.
  double terminal_diameter() const { return diameter_; }
  /// Delta / delta; 1 when k = 1.
  double aspect_ratio() const { return delta_ > 0 ? diameter_ / delta_ : 1.0; }

  /// Nearest terminal to x, ties broken by smallest index.
  Index nearest_terminal(Index x) const { return nearest_[static_cast<std::size_t>(x)]; }
  double distance_to_terminals(Index x) const { return to_k_[static_cast<std::size_t>(x)]; }

 private:
  FiniteMetric metric_;
  std::vector<Index> terminals_;
  std::vector<char> is_terminal_;
  std::vector<Index> nearest_;
  std::vector<double> to_k_;
  double eps_ = 0.1;
  double delta_ = 0;
  double diameter_ = 0;
};

/// Largest / smallest pairwise distance within `points`.
double subset_diameter(const FiniteMetric& metric, std::span<const Index> points);
double subset_min_distance(const FiniteMetric& metric, std::span<const Index> points);

}  // namespace tms
