#include "tms/generators.hpp"

#include "tms/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tms {
namespace {

using Rng = std::mt19937_64;

std::vector<Index> random_terminals(Index n, Index k, Rng& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

MatrixXd uniform_box(Index n, int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd p(n, dim);
  for (Index i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j) p(i, j) = u(rng);
  return p;
}

GeneratedInstance euclidean(MatrixXd pts, std::vector<Index> K, double eps) {
  return {TerminalInstance(FiniteMetric::from_points(std::move(pts)), std::move(K), eps), std::nullopt};
}

void floyd_warshall(MatrixXd& w) {
  const Index n = w.rows();
  for (Index c = 0; c < n; ++c)
    for (Index a = 0; a < n; ++a) {
      const double ac = w(a, c);
      for (Index b = 0; b < n; ++b) w(a, b) = std::min(w(a, b), ac + w(c, b));
    }
}

GeneratedInstance completion(const GenParams& p, Rng& rng) {
  const Index n = p.n;
  const Index k = p.k;
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  const auto cols = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(k))));
  const Index rows = (k + cols - 1) / cols;
  MatrixXd shadow(n, 2);
  VectorXd lift = VectorXd::Zero(n);
  for (Index i = 0; i < k; ++i) shadow.row(i) << static_cast<double>(i % cols), static_cast<double>(i / cols);
  std::uniform_real_distribution<double> ux(-0.5, static_cast<double>(cols) - 0.5);
  std::uniform_real_distribution<double> uy(-0.5, static_cast<double>(rows) - 0.5);
  std::uniform_real_distribution<double> uh(0.1, 1.5);
  std::uniform_real_distribution<double> stretch(1.0, 2.0);
  for (Index i = k; i < n; ++i) {
    shadow.row(i) << ux(rng), uy(rng);
    lift(i) = uh(rng);
  }
  // Every weight is at least the lifted planar metric |c_a - c_b| + h_a + h_b,
  // which agrees with the grid on K, so the closure leaves K untouched.
  MatrixXd w(n, n);
  for (Index a = 0; a < n; ++a) {
    w(a, a) = 0;
    for (Index b = a + 1; b < n; ++b) {
      const double floor_ab = (shadow.row(a) - shadow.row(b)).norm() + lift(a) + lift(b);
      const bool both_free = a >= k && b >= k;
      w(a, b) = both_free ? floor_ab * stretch(rng) : floor_ab;
      w(b, a) = w(a, b);
    }
  }
  floyd_warshall(w);
  std::vector<Index> K(static_cast<std::size_t>(k));
  std::iota(K.begin(), K.end(), Index{0});
  return {TerminalInstance(FiniteMetric::from_matrix(std::move(w)), std::move(K), p.eps), std::nullopt};
}

GeneratedInstance lower_bound(const GenParams& p, Rng& rng) {
  if (p.lambda < 2) throw std::invalid_argument("lower-bound instances need lambda >= 2");
  if (p.n < 2) throw std::invalid_argument("lower-bound instances need n >= 2");
  LowerBoundInfo info;
  info.sphere_dim = static_cast<int>(std::ceil(std::log2(static_cast<double>(p.lambda)) - 1e-12));
  const int t = info.sphere_dim;
  info.sample_count = static_cast<std::size_t>(10000) * static_cast<std::size_t>(t);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd samples(static_cast<Index>(info.sample_count), t);
  for (Index s = 0; s < samples.rows(); ++s) {
    for (int j = 0; j < t; ++j) samples(s, j) = gauss(rng);
    const double norm = samples.row(s).norm();
    samples.row(s) /= norm > 0 ? norm : 1.0;
  }
  std::vector<Index> order(info.sample_count);
  std::iota(order.begin(), order.end(), Index{0});
  auto dist = [&](Index a, Index b) { return (samples.row(a) - samples.row(b)).norm(); };
  auto net = greedy_net_in_order(std::span<const Index>(order), p.eps, dist);
  info.full_net_size = net.size();
  const std::size_t cap = static_cast<std::size_t>(p.n / 2);
  if (net.size() > cap) net.resize(cap);
  const auto k = static_cast<Index>(net.size());
  info.sphere_points.resize(k, t);
  for (Index i = 0; i < k; ++i) info.sphere_points.row(i) = samples.row(net[static_cast<std::size_t>(i)]);

  MatrixXd d(p.n, p.n);
  for (Index a = 0; a < p.n; ++a)
    for (Index b = 0; b < p.n; ++b) {
      if (a == b)
        d(a, b) = 0;
      else if (a < k && b < k)
        d(a, b) = (info.sphere_points.row(a) - info.sphere_points.row(b)).norm();
      else if (a < k || b < k)
        d(a, b) = 1;
      else
        d(a, b) = 2;
    }
  std::vector<Index> K(static_cast<std::size_t>(k));
  std::iota(K.begin(), K.end(), Index{0});
  return {TerminalInstance(FiniteMetric::from_matrix(std::move(d)), std::move(K), p.eps), std::move(info)};
}

}  // namespace

const std::vector<std::string>& instance_kinds() {
  static const std::vector<std::string> kinds = {"uniform-square", "uniform-cube", "gaussian-clusters", "grid",
                                                 "line",           "completion",   "lower-bound"};
  return kinds;
}

GeneratedInstance gen_instance(const GenParams& p) {
  if (p.n < 1) throw std::invalid_argument("n must be positive");
  if (!(p.eps > 0 && p.eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  Rng rng(p.seed);
  if (p.kind == "uniform-square") {
    auto pts = uniform_box(p.n, 2, rng);
    return euclidean(std::move(pts), random_terminals(p.n, p.k, rng), p.eps);
  }
  if (p.kind == "uniform-cube") {
    if (p.dim < 1) throw std::invalid_argument("dim must be positive");
    auto pts = uniform_box(p.n, p.dim, rng);
    return euclidean(std::move(pts), random_terminals(p.n, p.k, rng), p.eps);
  }
  if (p.kind == "gaussian-clusters") {
    if (p.clusters < 1 || !(p.sigma > 0)) throw std::invalid_argument("need clusters >= 1 and sigma > 0");
    std::uniform_real_distribution<double> uc(0.1, 0.9);
    std::uniform_int_distribution<int> pick(0, p.clusters - 1);
    std::normal_distribution<double> gauss(0.0, p.sigma);
    MatrixXd centres(p.clusters, 2);
    for (int c = 0; c < p.clusters; ++c) centres.row(c) << uc(rng), uc(rng);
    MatrixXd pts(p.n, 2);
    for (Index i = 0; i < p.n; ++i) {
      const int c = pick(rng);
      pts.row(i) << centres(c, 0) + gauss(rng), centres(c, 1) + gauss(rng);
    }
    return euclidean(std::move(pts), random_terminals(p.n, p.k, rng), p.eps);
  }
  if (p.kind == "grid") {
    const auto side = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(p.n))));
    MatrixXd pts(p.n, 2);
    for (Index i = 0; i < p.n; ++i)
      pts.row(i) << p.spacing * static_cast<double>(i % side), p.spacing * static_cast<double>(i / side);
    return euclidean(std::move(pts), random_terminals(p.n, p.k, rng), p.eps);
  }
  if (p.kind == "line") {
    if (p.k < 1 || p.k > p.n) throw std::invalid_argument("need 1 <= k <= n");
    MatrixXd pts(p.n, 1);
    for (Index i = 0; i < p.n; ++i) pts(i, 0) = p.spacing * static_cast<double>(i);
    std::vector<Index> K;
    for (Index a = 0; a < p.k; ++a)
      K.push_back(p.k == 1 ? 0 : static_cast<Index>(std::llround(static_cast<double>(a * (p.n - 1)) /
                                                                 static_cast<double>(p.k - 1))));
    K.erase(std::unique(K.begin(), K.end()), K.end());
    return euclidean(std::move(pts), std::move(K), p.eps);
  }
  if (p.kind == "completion") return completion(p, rng);
  if (p.kind == "lower-bound") return lower_bound(p, rng);
  throw std::invalid_argument("unknown instance kind '" + p.kind + "'");
}

}  // namespace tms
