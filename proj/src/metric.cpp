#include "tms/metric.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace tms {

FiniteMetric FiniteMetric::from_matrix(MatrixXd dist) {
  if (dist.rows() != dist.cols()) throw std::invalid_argument("distance matrix must be square");
  const Index n = dist.rows();
  for (Index i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw std::invalid_argument("distance matrix diagonal must be zero");
    for (Index j = i + 1; j < n; ++j) {
      if (!(dist(i, j) >= 0.0) || !std::isfinite(dist(i, j)))
        throw std::invalid_argument("distances must be finite and nonnegative");
      if (!approx_eq(dist(i, j), dist(j, i)))
        throw std::invalid_argument("distance matrix must be symmetric");
      dist(j, i) = dist(i, j);
    }
  }
  FiniteMetric m;
  m.kind_ = Kind::kExplicit;
  m.n_ = n;
  m.dist_ = std::move(dist);
  return m;
}

FiniteMetric FiniteMetric::from_points(MatrixXd coords) {
  if (!coords.allFinite()) throw std::invalid_argument("coordinates must be finite");
  FiniteMetric m;
  m.kind_ = Kind::kEuclidean;
  m.n_ = coords.rows();
  m.coords_ = std::move(coords);
  if (m.n_ <= kOnDemandThreshold) {
    m.dist_.resize(m.n_, m.n_);
    for (Index i = 0; i < m.n_; ++i) {
      m.dist_(i, i) = 0.0;
      for (Index j = i + 1; j < m.n_; ++j) {
        const double v = (m.coords_.row(i) - m.coords_.row(j)).norm();
        m.dist_(i, j) = v;
        m.dist_(j, i) = v;
      }
    }
  }
  return m;
}

MatrixXd FiniteMetric::matrix() const {
  if (cached()) return dist_;
  MatrixXd out(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j) out(i, j) = (*this)(i, j);
  return out;
}

double FiniteMetric::diameter() const {
  double best = 0;
  for (Index i = 0; i < n_; ++i)
    for (Index j = i + 1; j < n_; ++j) best = std::max(best, (*this)(i, j));
  return best;
}

double FiniteMetric::min_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n_; ++i)
    for (Index j = i + 1; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (v > 0) best = std::min(best, v);
    }
  return std::isfinite(best) ? best : 0.0;
}

FiniteMetric FiniteMetric::scaled(double factor) const {
  if (!(factor > 0)) throw std::invalid_argument("scale factor must be positive");
  FiniteMetric m = *this;
  m.coords_ *= factor;
  m.dist_ *= factor;
  return m;
}

FiniteMetric FiniteMetric::subspace(std::span<const Index> points) const {
  const auto m = static_cast<Index>(points.size());
  if (euclidean()) {
    MatrixXd c(m, coords_.cols());
    for (Index i = 0; i < m; ++i) c.row(i) = coords_.row(points[static_cast<std::size_t>(i)]);
    return from_points(std::move(c));
  }
  MatrixXd d(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      d(i, j) = dist_(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
  return from_matrix(std::move(d));
}

std::size_t triangle_violations(const FiniteMetric& metric, Index exhaustive_limit,
                                std::size_t samples, unsigned seed) {
  const Index n = metric.size();
  std::size_t bad = 0;
  auto check = [&](Index a, Index b, Index c) {
    if (!approx_le(metric(a, c), metric(a, b) + metric(b, c))) ++bad;
  };
  if (n <= exhaustive_limit) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) check(a, b, c);
    return bad;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) check(pick(rng), pick(rng), pick(rng));
  return bad;
}

TerminalInstance::TerminalInstance(FiniteMetric metric, std::vector<Index> terminals, double eps)
    : metric_(std::move(metric)), terminals_(std::move(terminals)), eps_(eps) {
  if (!(eps_ > 0 && eps_ < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  if (terminals_.empty()) throw std::invalid_argument("terminal set is empty");
  std::sort(terminals_.begin(), terminals_.end());
  const Index n = metric_.size();
  if (terminals_.front() < 0 || terminals_.back() >= n)
    throw std::invalid_argument("terminal index out of range");
  if (std::adjacent_find(terminals_.begin(), terminals_.end()) != terminals_.end())
    throw std::invalid_argument("duplicate terminal index");

  is_terminal_.assign(static_cast<std::size_t>(n), 0);
  for (Index u : terminals_) is_terminal_[static_cast<std::size_t>(u)] = 1;

  delta_ = terminals_.size() >= 2 ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t a = 0; a < terminals_.size(); ++a)
    for (std::size_t b = a + 1; b < terminals_.size(); ++b) {
      const double v = metric_(terminals_[a], terminals_[b]);
      delta_ = std::min(delta_, v);
      diameter_ = std::max(diameter_, v);
    }
  if (terminals_.size() >= 2 && !(delta_ > 0))
    throw std::invalid_argument("two terminals coincide (distance 0)");

  nearest_.resize(static_cast<std::size_t>(n));
  to_k_.resize(static_cast<std::size_t>(n));
  for (Index x = 0; x < n; ++x) {
    Index best = terminals_.front();
    double bd = metric_(x, best);
    for (Index u : terminals_) {
      const double v = metric_(x, u);
      if (v < bd) {
        bd = v;
        best = u;
      }
    }
    nearest_[static_cast<std::size_t>(x)] = best;
    to_k_[static_cast<std::size_t>(x)] = bd;
  }
}

double subset_diameter(const FiniteMetric& metric, std::span<const Index> points) {
  double best = 0;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      best = std::max(best, metric(points[a], points[b]));
  return best;
}

double subset_min_distance(const FiniteMetric& metric, std::span<const Index> points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double v = metric(points[a], points[b]);
      if (v > 0) best = std::min(best, v);
    }
  return std::isfinite(best) ? best : 0.0;
}

}  // namespace tms
