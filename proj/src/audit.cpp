#include "tms/audit.hpp"

#include "tms/net.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>

namespace tms {
namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

constexpr double kInf = std::numeric_limits<double>::infinity();

void atomic_max(std::atomic<std::size_t>& target, std::size_t value) {
  std::size_t cur = target.load();
  while (value > cur && !target.compare_exchange_weak(cur, value)) {
  }
}

double percentile(std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 1.0;
  const auto pos = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[pos];
}

}  // namespace

unsigned audit_threads() {
  if (const char* env = std::getenv("TMS_AUDIT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(audit_threads(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

MatrixXd exact_graph_distances(Index n, std::span<const Edge> edges, std::span<const Index> sources) {
  std::vector<std::vector<std::pair<Index, double>>> adj(at(n));
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
    adj[at(e.u)].push_back({e.v, e.w});
    adj[at(e.v)].push_back({e.u, e.w});
  }
  MatrixXd out(static_cast<Index>(sources.size()), n);
  parallel_for(sources.size(), [&](std::size_t row) {
    std::vector<double> dist(at(n), kInf);
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[at(sources[row])] = 0;
    heap.push({0.0, sources[row]});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[at(u)]) continue;
      for (const auto& [v, w] : adj[at(u)])
        if (d + w < dist[at(v)]) {
          dist[at(v)] = d + w;
          heap.push({d + w, v});
        }
    }
    for (Index x = 0; x < n; ++x) out(static_cast<Index>(row), x) = dist[at(x)];
  });
  return out;
}

InstanceSummary summarize(const TerminalInstance& inst) {
  InstanceSummary s;
  s.n = inst.n();
  s.k = inst.k();
  s.eps = inst.eps();
  const auto lx = estimate_doubling(inst.metric());
  s.lambda_x = lx.lambda;
  s.lambda_exhaustive = lx.exhaustive;
  s.lambda_k = estimate_doubling(inst.metric().subspace(inst.terminals())).lambda;
  s.delta = inst.delta();
  s.diameter_k = inst.terminal_diameter();
  s.aspect_k = inst.aspect_ratio();
  return s;
}

void StretchReport::set_size(const std::string& key, double value) {
  for (auto& [k, v] : sizes)
    if (k == key) {
      v = value;
      return;
    }
  sizes.emplace_back(key, value);
}

std::optional<double> StretchReport::size(const std::string& key) const {
  for (const auto& [k, v] : sizes)
    if (k == key) return v;
  return std::nullopt;
}

StretchReport audit_pairs(const TerminalInstance& inst, const std::function<double(Index, Index)>& estimate,
                          double lower_bound, double certified, bool distortion_mode) {
  const auto& K = inst.terminals();
  const Index n = inst.n();
  std::vector<std::vector<PairStretch>> rows(K.size());
  parallel_for(K.size(), [&](std::size_t a) {
    const Index v = K[a];
    auto& row = rows[a];
    row.reserve(at(n));
    for (Index x = 0; x < n; ++x) {
      PairStretch ps{x, v, inst.d(x, v), 0.0, 1.0};
      if (x != v) {
        ps.estimate = estimate(x, v);
        if (ps.dist > 0)
          ps.ratio = ps.estimate / ps.dist;
        else
          ps.ratio = ps.estimate == 0 ? 1.0 : kInf;
      }
      row.push_back(ps);
    }
  });

  StretchReport rep;
  rep.certified = certified;
  rep.lower_bound = lower_bound;
  rep.distortion_mode = distortion_mode;
  std::vector<double> ratios;
  std::vector<PairStretch> all;
  all.reserve(K.size() * at(n));
  double sum = 0;
  rep.max_ratio = -kInf;
  rep.min_ratio = kInf;
  for (const auto& row : rows)
    for (const auto& ps : row) {
      all.push_back(ps);
      ratios.push_back(ps.ratio);
      sum += ps.ratio;
      rep.max_ratio = std::max(rep.max_ratio, ps.ratio);
      rep.min_ratio = std::min(rep.min_ratio, ps.ratio);
      const bool bad = !approx_le(lower_bound, ps.ratio) || !approx_le(ps.ratio, certified);
      if (!distortion_mode && bad && !rep.violation) rep.violation = ps;
    }
  rep.pairs = all.size();
  if (all.empty()) {
    rep.max_ratio = rep.min_ratio = 1;
  }
  rep.mean_ratio = rep.pairs ? sum / static_cast<double>(rep.pairs) : 1.0;
  rep.distortion = rep.min_ratio > 0 ? rep.max_ratio / rep.min_ratio : kInf;
  std::sort(ratios.begin(), ratios.end());
  rep.p50 = percentile(ratios, 0.5);
  rep.p90 = percentile(ratios, 0.9);
  rep.p99 = percentile(ratios, 0.99);
  std::stable_sort(all.begin(), all.end(), [](const PairStretch& a, const PairStretch& b) { return a.ratio > b.ratio; });
  all.resize(std::min<std::size_t>(all.size(), 10));
  rep.worst = std::move(all);
  if (distortion_mode) {
    rep.pass = approx_le(rep.distortion, certified);
    if (!rep.pass && !rep.worst.empty()) rep.violation = rep.worst.front();
  } else {
    rep.pass = !rep.violation.has_value();
  }
  return rep;
}

StretchReport audit_stretch(const TerminalSpanner& spanner, const TerminalInstance& inst) {
  const auto edges = spanner.edges();
  const MatrixXd table = exact_graph_distances(inst.n(), edges, inst.terminals());
  std::vector<Index> row_of(at(inst.n()), -1);
  for (std::size_t a = 0; a < inst.terminals().size(); ++a) row_of[at(inst.terminals()[a])] = static_cast<Index>(a);
  auto rep = audit_pairs(
      inst, [&](Index x, Index v) { return table(row_of[at(v)], x); }, 1.0, spanner.certified_stretch());
  rep.structure = spanner.mode == TerminalMode::kDoublingX ? "spanner" : "spanner-k";
  rep.mode = mode_name(spanner.mode);
  rep.set_size("edges", static_cast<double>(spanner.edge_count()));
  rep.set_size("base_edges", static_cast<double>(spanner.base.edges.size()));
  rep.set_size("extension_edges", static_cast<double>(spanner.extension.size()));
  rep.set_size("base_vertices", static_cast<double>(spanner.base.vertices.size()));
  rep.set_size("base_levels", static_cast<double>(spanner.base.levels));
  if (spanner.mode == TerminalMode::kDoublingK) {
    std::size_t mx = 0;
    double total = 0;
    for (auto s : spanner.reach_sizes) {
      mx = std::max(mx, s);
      total += static_cast<double>(s);
    }
    rep.set_size("max_reach", static_cast<double>(mx));
    const auto others = static_cast<double>(inst.n() - inst.k());
    rep.set_size("mean_reach", others > 0 ? total / others : 0.0);
  } else {
    rep.set_size("hanged", static_cast<double>(spanner.hang.hanged_count()));
    // Aspect ratio of Y stays within O(aspect(K) / eps^4); reported, not enforced.
    const auto& y = spanner.base.vertices;
    const double sep = subset_min_distance(inst.metric(), y);
    const double aspect_y = sep > 0 ? subset_diameter(inst.metric(), y) / sep : 1.0;
    rep.set_size("aspect_y", aspect_y);
    rep.set_size("aspect_y_eps4_over_k", aspect_y * std::pow(inst.eps(), 4) / inst.aspect_ratio());
  }
  return rep;
}

StretchReport audit_stretch(const TerminalLabeling& labeling, const TerminalInstance& inst, bool oracle) {
  std::atomic<std::size_t> touched_max{0};
  auto rep = audit_pairs(
      inst,
      [&](Index x, Index v) {
        std::size_t touched = 0;
        const double q = labeling.query(x, v, &touched);
        atomic_max(touched_max, touched);
        return q;
      },
      1.0, labeling.certified_stretch());
  rep.structure = oracle ? "oracle" : "labeling";
  rep.mode = mode_name(TerminalMode::kDoublingX);
  std::size_t max_storage = 0;
  double total = 0;
  for (Index x = 0; x < inst.n(); ++x) {
    const auto s = labeling.storage(x);
    max_storage = std::max(max_storage, s);
    total += static_cast<double>(s);
  }
  rep.set_size("base_vertices", static_cast<double>(labeling.base().vertices().size()));
  rep.set_size("base_levels", static_cast<double>(labeling.base().radii().size()));
  rep.set_size("label_entries", static_cast<double>(labeling.base().total_entries()));
  rep.set_size("max_base_label", static_cast<double>(labeling.base().max_label_size()));
  rep.set_size("total_storage", total);
  rep.set_size("max_storage", static_cast<double>(max_storage));
  rep.set_size("hanged", static_cast<double>(labeling.hang().hanged_count()));
  rep.set_size("max_query_touched", static_cast<double>(touched_max.load()));
  return rep;
}

StretchReport audit_stretch(const KDoublingLabeling& labeling, const TerminalInstance& inst, bool oracle) {
  std::atomic<std::size_t> touched_max{0};
  auto rep = audit_pairs(
      inst,
      [&](Index x, Index v) {
        std::size_t touched = 0;
        const double q = labeling.query(x, v, &touched);
        atomic_max(touched_max, touched);
        return q;
      },
      1.0, labeling.certified_stretch());
  rep.structure = oracle ? "oracle-k" : "labeling-k";
  rep.mode = mode_name(TerminalMode::kDoublingK);
  std::size_t max_storage = 0, max_reach = 0;
  double total = 0;
  for (Index x = 0; x < inst.n(); ++x) {
    const auto s = labeling.storage(x);
    max_storage = std::max(max_storage, s);
    total += static_cast<double>(s);
    max_reach = std::max(max_reach, labeling.reach()[at(x)].size());
  }
  rep.set_size("base_vertices", static_cast<double>(labeling.base().vertices().size()));
  rep.set_size("label_entries", static_cast<double>(labeling.base().total_entries()));
  rep.set_size("max_base_label", static_cast<double>(labeling.base().max_label_size()));
  rep.set_size("max_reach", static_cast<double>(max_reach));
  rep.set_size("total_storage", total);
  rep.set_size("max_storage", static_cast<double>(max_storage));
  rep.set_size("max_query_touched", static_cast<double>(touched_max.load()));
  return rep;
}

StretchReport audit_embedding(const MatrixXd& coords, double p, double scale, const TerminalInstance& inst,
                              double lower_bound, double certified, bool distortion_mode) {
  if (coords.rows() != inst.n()) throw std::invalid_argument("embedding has the wrong number of rows");
  auto rep = audit_pairs(
      inst,
      [&](Index x, Index v) { return lp_distance(coords.row(x).transpose(), coords.row(v).transpose(), p) / scale; },
      lower_bound, certified, distortion_mode);
  rep.set_size("dimension", static_cast<double>(coords.cols()));
  return rep;
}

double base_spanner_max_stretch(const BaseSpanner& spanner, const FiniteMetric& metric) {
  const auto& V = spanner.vertices;
  if (V.size() < 2) return 1.0;
  std::vector<Index> local(at(metric.size()), -1);
  for (std::size_t a = 0; a < V.size(); ++a) local[at(V[a])] = static_cast<Index>(a);
  std::vector<Edge> edges;
  edges.reserve(spanner.edges.size());
  for (const Edge& e : spanner.edges) edges.push_back({local[at(e.u)], local[at(e.v)], e.w});
  std::vector<Index> sources(V.size());
  for (std::size_t a = 0; a < V.size(); ++a) sources[a] = static_cast<Index>(a);
  const auto m = static_cast<Index>(V.size());
  const MatrixXd table = exact_graph_distances(m, edges, sources);
  double worst = 1.0;
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b) {
      const double dv = metric(V[at(a)], V[at(b)]);
      const double ratio = dv > 0 ? table(a, b) / dv : (table(a, b) == 0 ? 1.0 : kInf);
      worst = std::max(worst, ratio);
    }
  return worst;
}

double base_labeling_max_stretch(const BaseLabeling& labeling, const FiniteMetric& metric, double* min_ratio) {
  const auto& V = labeling.vertices();
  std::vector<double> worst(V.size(), 1.0), best(V.size(), 1.0);
  parallel_for(V.size(), [&](std::size_t a) {
    for (std::size_t b = a + 1; b < V.size(); ++b) {
      const double dv = metric(V[a], V[b]);
      const double q = base_oracle_query(labeling, V[a], V[b]);
      const double ratio = dv > 0 ? q / dv : (q == 0 ? 1.0 : kInf);
      worst[a] = std::max(worst[a], ratio);
      best[a] = std::min(best[a], ratio);
    }
  });
  if (min_ratio) *min_ratio = V.empty() ? 1.0 : *std::min_element(best.begin(), best.end());
  return V.empty() ? 1.0 : *std::max_element(worst.begin(), worst.end());
}

ExtensionCheck check_extension(const HangMap& hang, std::span<const Index> y_points, const TerminalInstance& inst,
                               const std::function<double(Index, Index)>& estimate) {
  ExtensionCheck out;
  for (Index x = 0; x < inst.n(); ++x) {
    if (!hang.hanged(x)) continue;
    const Index u = hang[x].target;
    const double dxu = inst.d(x, u);
    ++out.checked;
    if (!approx_eq(estimate(x, u), dxu)) {
      if (!out.violations++) out.first = "d^(x,u) != d(x,u) at x=" + std::to_string(x);
      continue;
    }
    for (Index v : y_points) {
      if (v == u) continue;
      const double uv = estimate(u, v);
      const double xv = estimate(x, v);
      ++out.checked;
      if (!approx_le(std::max(dxu, uv), xv) || !approx_le(xv, dxu + uv)) {
        if (!out.violations++)
          out.first = "extension bounds fail at x=" + std::to_string(x) + " v=" + std::to_string(v);
      }
    }
  }
  return out;
}

LinfPropertyReport audit_linf_properties(const LinfEmbedding& emb, const ContractedMetricFamily& family,
                                         const TerminalInstance& inst, std::size_t samples, std::uint64_t seed) {
  LinfPropertyReport rep;
  rep.samples = samples;
  const Index n = inst.n();
  const auto& K = inst.terminals();
  const int levels = static_cast<int>(emb.levels.size());
  if (levels == 0 || emb.t == 0) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick_point(0, n - 1);
  std::uniform_int_distribution<std::size_t> pick_terminal(0, K.size() - 1);
  std::uniform_int_distribution<int> pick_level(0, levels - 1);
  std::uniform_int_distribution<int> pick_family(0, emb.t - 1);
  const double window = std::log2(2.0 * static_cast<double>(emb.k_eff) / emb.eps);

  for (std::size_t s = 0; s < samples; ++s) {
    const int i = pick_level(rng);
    const int j = pick_family(rng);
    const Index col = static_cast<Index>(i) * emb.t + j;
    const Index x = pick_point(rng);
    const Index y = pick_point(rng);
    const MatrixXd& di = family.levels[static_cast<std::size_t>(i)];
    const double cap = std::ldexp(1.0, i + 1);
    const double gx = emb.g(x, col), gy = emb.g(y, col);
    if (!approx_le(std::abs(gx - gy), di(x, y) + kRelTol) || !approx_le(di(x, y), family.base(x, y)))
      ++rep.lipschitz_violations;
    if (gx < 0 || !approx_le(gx, cap)) ++rep.truncation_violations;
    if (!approx_le(family.base(x, y) - emb.eps * std::ldexp(1.0, i), di(x, y))) ++rep.sandwich_violations;

    // Scales far above d(x, v) must not separate x from a terminal v.  Half
    // the draws use the nearest terminal so that short pairs are exercised.
    const Index v = (s % 2 == 0) ? inst.nearest_terminal(x) : K[pick_terminal(rng)];
    const double dv = family.base(x, v);
    if (dv > 0) {
      const int i_prime = static_cast<int>(std::floor(std::log2(dv))) + 1;  // 2^(i'-1) <= d < 2^i'
      const int first = static_cast<int>(std::floor(static_cast<double>(i_prime) + window)) + 1;
      if (first < levels) {
        std::uniform_int_distribution<int> pick_far(first, levels - 1);
        const int far = pick_far(rng);
        const Index far_col = static_cast<Index>(far) * emb.t + pick_family(rng);
        ++rep.vanishing_checked;
        if (!approx_eq(emb.g(x, far_col), emb.g(v, far_col))) ++rep.vanishing_violations;
      }
    }
  }

  for (Index v : K)
    for (Index x = 0; x < n; ++x) {
      if (x == v) continue;
      ++rep.witness_pairs;
      const double target = (1 - 3 * emb.eps) * family.base(x, v);
      const double best = (emb.coords.row(x) - emb.coords.row(v)).cwiseAbs().maxCoeff();
      if (!approx_le(target, best)) ++rep.witness_missing;
    }
  return rep;
}

double detour_distance(const FiniteMetric& metric, Index x, Index v) {
  // After the first hop to some z != v, the direct edge {z, v} is available
  // and metric paths never beat it.
  double best = kInf;
  for (Index z = 0; z < metric.size(); ++z)
    if (z != x && z != v) best = std::min(best, metric(x, z) + metric(z, v));
  return best;
}

LowerBoundReport lower_bound_audit(const GeneratedInstance& gen, int lambda) {
  if (!gen.lower_bound) throw std::invalid_argument("lower-bound audit needs a lower-bound instance");
  const TerminalInstance& inst = gen.instance;
  const LowerBoundInfo& info = *gen.lower_bound;
  LowerBoundReport rep;
  rep.n = inst.n();
  rep.k = inst.k();
  rep.eps = inst.eps();
  rep.lambda = lambda;
  rep.sphere_dim = info.sphere_dim;
  rep.full_net_size = info.full_net_size;
  rep.min_terminal_separation = inst.delta();
  rep.triangle_violations = triangle_violations(inst.metric());
  rep.required_edges = static_cast<std::size_t>(inst.k()) * static_cast<std::size_t>(inst.n() - inst.k());
  rep.implied_c = lambda > 1 && info.full_net_size > 0
                      ? inst.eps() * std::exp2(std::log2(static_cast<double>(info.full_net_size)) /
                                               std::log2(static_cast<double>(lambda)))
                      : 0.0;

  rep.min_detour_ratio = kInf;
  for (Index x = 0; x < inst.n(); ++x) {
    if (inst.is_terminal(x)) continue;
    for (Index v : inst.terminals()) {
      ++rep.cross_pairs;
      const double dv = inst.d(x, v);
      const double detour = detour_distance(inst.metric(), x, v);
      rep.min_detour_ratio = std::min(rep.min_detour_ratio, detour / dv);
      if (!approx_le(detour, (1 + inst.eps()) * dv)) ++rep.forced_pairs;
    }
  }

  const TerminalSpanner sp = build_k_doubling_spanner(inst);
  rep.spanner_base_edges = sp.base.edges.size();
  std::vector<char> seen(at(inst.n()) * at(inst.k()), 0);
  std::vector<Index> slot(at(inst.n()), -1);
  for (std::size_t a = 0; a < inst.terminals().size(); ++a) slot[at(inst.terminals()[a])] = static_cast<Index>(a);
  for (const Edge& e : sp.extension) {
    const bool cross = inst.is_terminal(e.u) != inst.is_terminal(e.v);
    if (!cross) continue;
    const Index x = inst.is_terminal(e.u) ? e.v : e.u;
    const Index v = inst.is_terminal(e.u) ? e.u : e.v;
    char& flag = seen[at(x) * at(inst.k()) + at(slot[at(v)])];
    if (!flag) {
      flag = 1;
      ++rep.spanner_cross_edges;
    }
  }
  rep.spanner_has_all_cross_edges =
      rep.spanner_cross_edges == rep.required_edges && sp.extension.size() == rep.required_edges;
  rep.spanner_audit = audit_stretch(sp, inst);
  rep.spanner_audit.instance = summarize(inst);
  rep.pass = rep.triangle_violations == 0 && rep.min_terminal_separation > inst.eps() &&
             rep.forced_pairs == rep.cross_pairs && rep.spanner_has_all_cross_edges && rep.spanner_audit.pass;
  return rep;
}

}  // namespace tms
