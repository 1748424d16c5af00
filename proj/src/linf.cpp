#include "tms/linf.hpp"

#include "tms/net.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace tms {
namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

struct DisjointSets {
  std::vector<Index> parent;
  explicit DisjointSets(Index n) : parent(at(n)) { std::iota(parent.begin(), parent.end(), Index{0}); }
  Index find(Index x) {
    while (parent[at(x)] != x) {
      parent[at(x)] = parent[at(parent[at(x)])];
      x = parent[at(x)];
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[at(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

// Zero-weight edges only touch terminals, so they glue X into components
// that each contain a terminal.  A shortest path alternates between metric
// hops and free moves inside a component; consecutive metric hops collapse by
// the triangle inequality, and a singleton is never worth visiting as an
// intermediate.  So d_i(x, y) = min(d(x, y), min_{A,B} w(x,A) + D(A,B) + w(B,y))
// over the glued components A, B, where w is the point-to-set distance and D
// the shortest-path distance between components.
MatrixXd contracted_metric(const MatrixXd& dist, std::span<const Index> terminals, double threshold) {
  const Index n = dist.rows();
  DisjointSets sets(n);
  for (Index v : terminals)
    for (Index x = 0; x < n; ++x)
      if (x != v && dist(x, v) < threshold) sets.unite(x, v);

  std::vector<Index> comp_of(at(n), -1);
  std::vector<std::vector<Index>> comps;
  {
    std::vector<Index> size(at(n), 0);
    for (Index x = 0; x < n; ++x) ++size[at(sets.find(x))];
    std::vector<Index> id(at(n), -1);
    for (Index x = 0; x < n; ++x) {
      const Index root = sets.find(x);
      if (size[at(root)] < 2) continue;
      if (id[at(root)] < 0) {
        id[at(root)] = static_cast<Index>(comps.size());
        comps.emplace_back();
      }
      comp_of[at(x)] = id[at(root)];
      comps[at(id[at(root)])].push_back(x);
    }
  }
  if (comps.empty()) return dist;

  const auto m = static_cast<Index>(comps.size());
  // to_comp(x, A) = min_{a in A} d(x, a), zero for members.
  MatrixXd to_comp(n, m);
  for (Index x = 0; x < n; ++x)
    for (Index a = 0; a < m; ++a) {
      double best = std::numeric_limits<double>::infinity();
      for (Index p : comps[at(a)]) best = std::min(best, dist(x, p));
      to_comp(x, a) = comp_of[at(x)] == a ? 0.0 : best;
    }
  MatrixXd between(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (Index p : comps[at(a)]) best = std::min(best, to_comp(p, b));
      between(a, b) = a == b ? 0.0 : best;
    }
  for (Index c = 0; c < m; ++c)
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) between(a, b) = std::min(between(a, b), between(a, c) + between(c, b));

  // exit(x, B) = min_A to_comp(x, A) + between(A, B)
  MatrixXd exit(n, m);
  for (Index x = 0; x < n; ++x)
    for (Index b = 0; b < m; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (Index a = 0; a < m; ++a) best = std::min(best, to_comp(x, a) + between(a, b));
      exit(x, b) = best;
    }
  MatrixXd out(n, n);
  for (Index x = 0; x < n; ++x) {
    out(x, x) = 0;
    for (Index y = x + 1; y < n; ++y) {
      double best = dist(x, y);
      for (Index b = 0; b < m; ++b) best = std::min(best, exit(x, b) + to_comp(y, b));
      out(x, y) = best;
      out(y, x) = best;
    }
  }
  return out;
}

ContractedMetricFamily build_contracted_metrics(const TerminalInstance& inst) {
  ContractedMetricFamily fam;
  fam.eps = inst.eps();
  fam.k_eff = std::max<Index>(inst.k(), 4);
  const double min_d = inst.metric().min_distance();
  fam.scale = min_d > 0 ? 1.0 / min_d : 1.0;
  fam.base = inst.metric().matrix() * fam.scale;
  const double diam = fam.base.maxCoeff();
  const int top = diam > 1 ? static_cast<int>(std::ceil(std::log2(diam) - 1e-12)) : 0;
  for (int i = 0; i <= top; ++i) {
    const double thr = std::ldexp(1.0, i - 1) * fam.eps / static_cast<double>(fam.k_eff);
    fam.thresholds.push_back(thr);
    fam.levels.push_back(contracted_metric(fam.base, inst.terminals(), thr));
  }
  return fam;
}

std::vector<std::vector<Index>> build_separated_families(std::span<const Index> net, const MatrixXd& di,
                                                         double separation) {
  std::vector<std::vector<Index>> families;
  std::vector<char> assigned(net.size(), 0);
  std::size_t left = net.size();
  while (left > 0) {
    std::vector<Index> family;
    for (std::size_t a = 0; a < net.size(); ++a) {
      if (assigned[a]) continue;
      const bool fits = std::all_of(family.begin(), family.end(),
                                    [&](Index q) { return approx_le(separation, di(net[a], q)); });
      if (!fits) continue;
      family.push_back(net[a]);
      assigned[a] = 1;
      --left;
    }
    families.push_back(std::move(family));
  }
  return families;
}

int linf_dimension(int t, Index k_eff, double eps) {
  return static_cast<int>(std::ceil(2.0 * t * std::log2(2.0 * static_cast<double>(k_eff) / eps) - 1e-12));
}

LinfEmbedding embed_linf(const TerminalInstance& inst) {
  return embed_linf(inst, build_contracted_metrics(inst));
}

LinfEmbedding embed_linf(const TerminalInstance& inst, const ContractedMetricFamily& family) {
  if (inst.k() == 0) throw std::invalid_argument("need at least one terminal");
  if (inst.k() < 4)
    std::cerr << "warning: k = " << inst.k() << " < 4; padding k to 4 in the dimension and thresholds\n";
  LinfEmbedding emb;
  emb.eps = family.eps;
  emb.scale = family.scale;
  emb.k_eff = family.k_eff;
  const Index n = inst.n();
  const auto& K = inst.terminals();

  for (std::size_t i = 0; i < family.levels.size(); ++i) {
    const MatrixXd& di = family.levels[i];
    LinfLevel level;
    level.index = static_cast<int>(i);
    level.radius = emb.eps * std::ldexp(1.0, level.index - 2);
    auto dist = [&](Index a, Index b) { return di(a, b); };
    level.net = greedy_net_in_order(std::span<const Index>(K), level.radius, dist);
    level.families = build_separated_families(level.net, di, 5.0 * std::ldexp(1.0, level.index));
    emb.t = std::max(emb.t, static_cast<int>(level.families.size()));
    emb.levels.push_back(std::move(level));
  }
  emb.dim = linf_dimension(emb.t, emb.k_eff, emb.eps);

  const auto L = static_cast<Index>(emb.levels.size());
  emb.g = MatrixXd::Zero(n, L * emb.t);
  emb.coords = MatrixXd::Zero(n, emb.dim);
  for (Index i = 0; i < L; ++i) {
    const MatrixXd& di = family.levels[at(i)];
    const double cap = std::ldexp(1.0, static_cast<int>(i) + 1);
    const auto& fams = emb.levels[at(i)].families;
    for (std::size_t j = 0; j < fams.size(); ++j) {
      const Index col = i * emb.t + static_cast<Index>(j);
      const int h = emb.slot(static_cast<int>(i), static_cast<int>(j));
      for (Index x = 0; x < n; ++x) {
        double best = cap;
        for (Index p : fams[j]) best = std::min(best, di(x, p));
        emb.g(x, col) = best;
        emb.coords(x, h) += best;
      }
    }
  }
  return emb;
}

}  // namespace tms
