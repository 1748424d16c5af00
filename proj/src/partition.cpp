#include "tms/partition.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <utility>

namespace tms {
namespace {

int ceil_log2(double ratio) {
  // Exact powers of two must not round up.
  return static_cast<int>(std::ceil(std::log2(ratio) - 1e-12));
}

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

}  // namespace

int log2_ceil_inverse(double eps) { return std::max(0, ceil_log2(1.0 / eps)); }

bool EnrichedSet::contains(Index x) const {
  return std::binary_search(points.begin(), points.end(), x);
}

PartialPartition build_partial_partitions(const TerminalInstance& inst) {
  if (inst.k() < 2) throw std::invalid_argument("need at least two terminals");
  const double eps = inst.eps();
  static bool warned = false;
  if (eps > 1.0 / 20 && !std::exchange(warned, true))
    std::cerr << "warning: eps = " << eps
              << " exceeds 1/20; the certified stretch constant assumes eps <= 1/20\n";

  PartialPartition pp;
  pp.eps = eps;
  pp.delta = inst.delta();
  pp.diameter = inst.terminal_diameter();
  const double r0 = eps * eps * pp.delta;
  pp.top = std::max(0, ceil_log2(pp.diameter / r0));
  while (std::ldexp(r0, pp.top) < pp.diameter) ++pp.top;
  pp.levels.resize(static_cast<std::size_t>(pp.top) + 1);

  const FiniteMetric& metric = inst.metric();
  const Index n = inst.n();
  pp.final_level.assign(at(n), -1);
  pp.final_cluster.assign(at(n), -1);

  std::vector<Index> residual(at(n));
  for (Index x = 0; x < n; ++x) residual[at(x)] = x;
  std::vector<char> remaining(at(n), 0);

  for (int i = pp.top; i >= 0; --i) {
    PartitionLevel& level = pp.levels[static_cast<std::size_t>(i)];
    level.index = i;
    level.radius = std::ldexp(r0, i);
    level.residual = residual;
    level.net = (i == pp.top)
                    ? greedy_net(residual, metric, level.radius, inst.terminals())
                    : refine_net(pp.levels[static_cast<std::size_t>(i) + 1].net, residual, metric,
                                 level.radius, inst.terminals());

    for (Index x : residual) remaining[at(x)] = 1;
    std::vector<Index> next;
    for (Index c : level.net.members) {
      Cluster cl;
      cl.center = c;
      for (Index x : residual)
        if (remaining[at(x)] && approx_le(metric(c, x), level.radius)) {
          cl.members.push_back(x);
          remaining[at(x)] = 0;
        }
      cl.final = approx_le(level.radius / eps, inst.distance_to_terminals(c));
      if (cl.final) {
        for (Index x : cl.members) {
          pp.final_level[at(x)] = i;
          pp.final_cluster[at(x)] = static_cast<int>(level.clusters.size());
        }
      } else {
        next.insert(next.end(), cl.members.begin(), cl.members.end());
      }
      level.clusters.push_back(std::move(cl));
    }
    std::sort(next.begin(), next.end());
    residual = std::move(next);
  }
  return pp;
}

std::vector<std::string> validate_partition(const PartialPartition& pp, const TerminalInstance& inst) {
  std::vector<std::string> issues;
  auto fail = [&](std::string msg) { issues.push_back(std::move(msg)); };
  const double eps = pp.eps;
  const Index n = inst.n();
  const FiniteMetric& metric = inst.metric();

  if (pp.levels.empty()) {
    fail("no levels");
    return issues;
  }
  if (!approx_eq(pp.levels.front().radius, eps * eps * inst.delta())) fail("r_0 != eps^2 delta");
  if (!approx_le(inst.terminal_diameter(), pp.levels.back().radius)) fail("r_s < Delta");
  if (static_cast<Index>(pp.levels.back().residual.size()) != n) fail("R_s != X");

  std::vector<int> final_count(at(n), 0);
  std::vector<int> owner(at(n), -1);
  for (std::size_t li = 0; li < pp.levels.size(); ++li) {
    const PartitionLevel& level = pp.levels[li];
    const std::string tag = "level " + std::to_string(li) + ": ";
    for (auto& msg : validate_net(level.net, level.residual, metric, inst.terminals()))
      fail(tag + msg);

    std::fill(owner.begin(), owner.end(), -1);
    std::size_t covered = 0;
    std::vector<Index> non_final;
    for (std::size_t j = 0; j < level.clusters.size(); ++j) {
      const Cluster& cl = level.clusters[j];
      if (cl.center != level.net.members[j]) fail(tag + "cluster order differs from net order");
      bool has_terminal = false;
      for (Index x : cl.members) {
        if (owner[at(x)] != -1) fail(tag + "point " + std::to_string(x) + " in two clusters");
        owner[at(x)] = static_cast<int>(j);
        ++covered;
        if (!approx_le(metric(x, cl.center), level.radius))
          fail(tag + "member " + std::to_string(x) + " farther than r_i from its centre");
        if (inst.is_terminal(x)) has_terminal = true;
        if (cl.final) ++final_count[at(x)];
      }
      const bool should_be_final = approx_le(level.radius / eps, inst.distance_to_terminals(cl.center));
      if (should_be_final != cl.final) fail(tag + "final flag mismatch at centre " + std::to_string(cl.center));
      if (has_terminal && (cl.final || !inst.is_terminal(cl.center)))
        fail(tag + "terminal cluster is final or has a non-terminal centre");
      if (!cl.final) non_final.insert(non_final.end(), cl.members.begin(), cl.members.end());
    }
    for (Index x : level.residual)
      if (owner[at(x)] == -1) fail(tag + "residual point " + std::to_string(x) + " unassigned");
    if (covered != level.residual.size()) fail(tag + "clusters do not partition R_i");
    if (li > 0) {
      std::sort(non_final.begin(), non_final.end());
      if (non_final != pp.levels[li - 1].residual) fail(tag + "R_{i-1} != union of non-final clusters");
    }
    if (li == 0)
      for (Index u : inst.terminals()) {
        const int j = owner[at(u)];
        if (j < 0 || level.clusters[static_cast<std::size_t>(j)].center != u)
          fail("level 0: terminal " + std::to_string(u) + " is not the centre of its own cluster");
      }
    if (li + 1 < pp.levels.size()) {
      const Net& upper = pp.levels[li + 1].net;
      for (Index u : upper.members)
        if (inst.is_terminal(u) &&
            std::find(level.net.members.begin(), level.net.members.end(), u) == level.net.members.end())
          fail(tag + "terminal " + std::to_string(u) + " dropped from the finer net");
    }
  }
  for (Index x = 0; x < n; ++x)
    if (final_count[at(x)] > 1) fail("point " + std::to_string(x) + " in several final clusters");
  return issues;
}

void dump_partition(std::ostream& out, const PartialPartition& pp) {
  for (auto it = pp.levels.rbegin(); it != pp.levels.rend(); ++it) {
    out << "level " << it->index << " r " << it->radius << " clusters " << it->clusters.size() << '\n';
    for (const Cluster& cl : it->clusters)
      out << "  " << cl.center << ' ' << (cl.final ? "final" : "open") << ' ' << cl.members.size() << '\n';
  }
}

EnrichedSet mark_clusters(const PartialPartition& pp, const TerminalInstance& inst) {
  EnrichedSet es;
  es.b = log2_ceil_inverse(pp.eps);
  const auto& K = inst.terminals();
  const Index n = inst.n();
  es.marked.resize(pp.levels.size());
  for (std::size_t i = 0; i < pp.levels.size(); ++i)
    es.marked[i].assign(pp.levels[i].clusters.size(), 0);

  // i_u: highest level whose net contains u.
  es.top_level.assign(K.size(), -1);
  std::vector<int> slot(at(n), -1);
  for (std::size_t a = 0; a < K.size(); ++a) slot[at(K[a])] = static_cast<int>(a);
  for (std::size_t i = 0; i < pp.levels.size(); ++i)
    for (Index c : pp.levels[i].net.members)
      if (slot[at(c)] >= 0) {
        int& top = es.top_level[static_cast<std::size_t>(slot[at(c)])];
        top = std::max(top, static_cast<int>(i));
      }

  std::vector<MarkWitness> witness(at(n));
  std::vector<char> in_y(at(n), 0);
  es.mark_counts.assign(K.size(), 0);
  const double inv_eps2 = 1.0 / (pp.eps * pp.eps);
  for (std::size_t a = 0; a < K.size(); ++a) {
    const Index u = K[a];
    const int iu = es.top_level[a];
    if (iu < 0) continue;
    const double reach = 2 * pp.levels[static_cast<std::size_t>(iu)].radius * inv_eps2;
    for (int i = iu; i >= std::max(0, iu - 2 * es.b); --i) {
      const auto& clusters = pp.levels[static_cast<std::size_t>(i)].clusters;
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        const Index c = clusters[j].center;
        if (!approx_le(inst.d(u, c), reach)) continue;
        es.marked[static_cast<std::size_t>(i)][j] = 1;
        ++es.mark_counts[a];
        if (!in_y[at(c)]) {
          in_y[at(c)] = 1;
          witness[at(c)] = {u, i, static_cast<int>(j)};
        }
      }
    }
  }
  for (Index x = 0; x < n; ++x)
    if (in_y[at(x)]) {
      es.points.push_back(x);
      es.witness.push_back(witness[at(x)]);
    }
  return es;
}

EnrichedSizeReport enriched_size_audit(const EnrichedSet& es, int lambda, std::size_t k) {
  EnrichedSizeReport r;
  r.size = es.points.size();
  r.terminals = k;
  r.lambda = lambda;
  r.b = es.b;
  const double lam = static_cast<double>(lambda);
  r.bound = static_cast<double>(k) * std::pow(lam, 5.0 * es.b);
  r.per_terminal_bound = (2.0 * es.b + 1) * std::pow(lam, 4.0 * es.b + 2);
  r.mark_counts = es.mark_counts;
  for (auto c : es.mark_counts) r.max_marks = std::max(r.max_marks, c);
  r.pass = static_cast<double>(r.size) <= r.bound;
  return r;
}

std::vector<Index> isolated_terminal_violations(const PartialPartition& pp, const EnrichedSet& es,
                                                const TerminalInstance& inst) {
  std::vector<Index> bad;
  const auto& K = inst.terminals();
  const double eps = pp.eps;
  for (std::size_t li = 0; li + 1 < pp.levels.size(); ++li) {
    const PartitionLevel& level = pp.levels[li];
    const double r = level.radius;
    std::vector<char> isolated(K.size(), 1);
    for (std::size_t a = 0; a < K.size(); ++a)
      for (std::size_t w = 0; w < K.size() && isolated[a]; ++w) {
        if (w == a) continue;
        const double dv = inst.d(K[a], K[w]);
        if (!approx_le(dv, r) && !approx_le(r / (eps * eps), dv)) isolated[a] = 0;
      }
    for (std::size_t j = 0; j < level.clusters.size(); ++j) {
      const Cluster& cl = level.clusters[j];
      if (!cl.final || es.marked[li][j]) continue;
      for (Index x : cl.members) {
        bool ok = false;
        for (std::size_t a = 0; a < K.size() && !ok; ++a) {
          const double dv = inst.d(x, K[a]);
          ok = isolated[a] && approx_le(r / (2 * eps), dv) && approx_le(dv, 3 * r / eps);
        }
        if (!ok) bad.push_back(x);
      }
    }
  }
  std::sort(bad.begin(), bad.end());
  return bad;
}

}  // namespace tms
