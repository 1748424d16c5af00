#include "tms/terminal.hpp"

#include "tms/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tms {
namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

HangMap hang_all_on_single_terminal(const TerminalInstance& inst) {
  HangMap hm;
  hm.entries.resize(at(inst.n()));
  const Index u = inst.terminals().front();
  for (Index x = 0; x < inst.n(); ++x)
    if (x != u) hm.entries[at(x)] = {u, inst.d(x, u), HangReason::kNearestTerminal};
  return hm;
}

}  // namespace

std::size_t HangMap::hanged_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const HangEntry& e) { return e.target >= 0; }));
}

HangMap hang_points(const PartialPartition& pp, const EnrichedSet& es, const TerminalInstance& inst) {
  HangMap hm;
  hm.entries.resize(at(inst.n()));
  std::vector<char> in_y(at(inst.n()), 0);
  for (Index y : es.points) in_y[at(y)] = 1;
  for (Index x = 0; x < inst.n(); ++x) {
    if (in_y[at(x)]) continue;
    const int li = pp.final_level[at(x)];
    if (li >= 0) {
      const auto j = static_cast<std::size_t>(pp.final_cluster[at(x)]);
      if (es.marked[static_cast<std::size_t>(li)][j]) {
        const Index c = pp.levels[static_cast<std::size_t>(li)].clusters[j].center;
        hm.entries[at(x)] = {c, inst.d(x, c), HangReason::kFinalMarkedCenter};
        continue;
      }
    }
    const Index u = inst.nearest_terminal(x);
    hm.entries[at(x)] = {u, inst.d(x, u), HangReason::kNearestTerminal};
  }
  return hm;
}

Enrichment enrich(const TerminalInstance& inst) {
  Enrichment en;
  if (inst.k() == 1) {
    en.enriched.points = inst.terminals();
    en.enriched.b = log2_ceil_inverse(inst.eps());
    en.enriched.top_level = {0};
    en.enriched.mark_counts = {1};
    en.enriched.witness = {{inst.terminals().front(), 0, 0}};
    en.hang = hang_all_on_single_terminal(inst);
    return en;
  }
  en.partition = build_partial_partitions(inst);
  en.enriched = mark_clusters(*en.partition, inst);
  en.hang = hang_points(*en.partition, en.enriched, inst);
  return en;
}

const char* mode_name(TerminalMode mode) {
  return mode == TerminalMode::kDoublingX ? "X-doubling" : "K-doubling";
}

std::vector<Edge> TerminalSpanner::edges() const {
  std::vector<Edge> all = base.edges;
  all.insert(all.end(), extension.begin(), extension.end());
  return all;
}

double TerminalSpanner::certified_stretch() const {
  return mode == TerminalMode::kDoublingX ? 1 + 12 * eps : 1 + 3 * eps;
}

TerminalSpanner build_terminal_spanner(const TerminalInstance& inst) {
  return build_terminal_spanner(inst, enrich(inst));
}

TerminalSpanner build_terminal_spanner(const TerminalInstance& inst, const Enrichment& en) {
  TerminalSpanner sp;
  sp.mode = TerminalMode::kDoublingX;
  sp.eps = inst.eps();
  sp.n = inst.n();
  sp.terminals = inst.terminals();
  sp.base = build_base_spanner(en.enriched.points, inst.metric(), inst.eps());
  sp.hang = en.hang;
  for (Index x = 0; x < inst.n(); ++x)
    if (sp.hang.hanged(x)) sp.extension.push_back({x, sp.hang[x].target, sp.hang[x].dist});
  return sp;
}

std::vector<Index> terminal_reach(const TerminalInstance& inst, Index x) {
  const Index u = inst.nearest_terminal(x);
  const double R = inst.distance_to_terminals(x);
  if (R == 0) return {u};
  const double eps = inst.eps();
  std::vector<Index> order{u};
  for (Index v : inst.terminals())
    if (v != u && approx_le(inst.d(x, v), 2 * R / eps)) order.push_back(v);
  auto dist = [&](Index a, Index b) { return inst.d(a, b); };
  return greedy_net_in_order(std::span<const Index>(order), eps * R, dist);
}

TerminalSpanner build_k_doubling_spanner(const TerminalInstance& inst) {
  TerminalSpanner sp;
  sp.mode = TerminalMode::kDoublingK;
  sp.eps = inst.eps();
  sp.n = inst.n();
  sp.terminals = inst.terminals();
  sp.base = build_base_spanner(inst.terminals(), inst.metric(), inst.eps());
  sp.reach_sizes.assign(at(inst.n()), 0);
  for (Index x = 0; x < inst.n(); ++x) {
    if (inst.is_terminal(x)) continue;
    const auto reach = terminal_reach(inst, x);
    sp.reach_sizes[at(x)] = reach.size();
    for (Index v : reach) sp.extension.push_back({x, v, inst.d(x, v)});
  }
  return sp;
}

TerminalLabeling::TerminalLabeling(BaseLabeling base, HangMap hang, std::vector<Index> terminals,
                                   double eps)
    : base_(std::move(base)), hang_(std::move(hang)), terminals_(std::move(terminals)), eps_(eps) {
  for (Index x = 0; x < n(); ++x) {
    if (hang_.hanged(x) && !base_.contains(hang_[x].target))
      throw std::invalid_argument("hang target outside the labeled set");
    if (!hang_.hanged(x) && !base_.contains(x))
      throw std::invalid_argument("point " + std::to_string(x) + " neither labeled nor hanged");
  }
}

double TerminalLabeling::query(Index x, Index v, std::size_t* touched) const {
  if (x < 0 || x >= n()) throw std::out_of_range("unknown index " + std::to_string(x));
  if (!base_.contains(v)) throw std::invalid_argument("query target must be a labeled point");
  if (hang_.hanged(x)) {
    const HangEntry& h = hang_[x];
    return h.dist + base_oracle_query(base_, h.target, v, touched);
  }
  return base_oracle_query(base_, x, v, touched);
}

std::size_t TerminalLabeling::storage(Index x) const {
  return hang_.hanged(x) ? 1 : base_.label(x).size();
}

TerminalLabeling extend_labeling(BaseLabeling base, HangMap hang, std::vector<Index> terminals, double eps) {
  return TerminalLabeling(std::move(base), std::move(hang), std::move(terminals), eps);
}

TerminalLabeling build_terminal_labeling(const TerminalInstance& inst) {
  return build_terminal_labeling(inst, enrich(inst));
}

TerminalLabeling build_terminal_labeling(const TerminalInstance& inst, const Enrichment& en) {
  return extend_labeling(build_base_labeling(en.enriched.points, inst.metric(), inst.eps()), en.hang,
                         inst.terminals(), inst.eps());
}

KDoublingLabeling::KDoublingLabeling(BaseLabeling base, std::vector<std::vector<ReachRecord>> reach,
                                     std::vector<Index> terminals, double eps)
    : base_(std::move(base)), reach_(std::move(reach)), terminals_(std::move(terminals)), eps_(eps) {
  for (Index x = 0; x < n(); ++x) {
    if (base_.contains(x)) continue;
    if (reach_[at(x)].empty())
      throw std::invalid_argument("non-terminal " + std::to_string(x) + " has no reach records");
    for (const auto& r : reach_[at(x)])
      if (!base_.contains(r.point)) throw std::invalid_argument("reach record outside K");
  }
}

double KDoublingLabeling::query(Index x, Index v, std::size_t* touched) const {
  if (x < 0 || x >= n()) throw std::out_of_range("unknown index " + std::to_string(x));
  if (!base_.contains(v)) throw std::invalid_argument("query target must be a terminal");
  if (base_.contains(x)) return base_oracle_query(base_, x, v, touched);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : reach_[at(x)]) best = std::min(best, r.dist + base_oracle_query(base_, r.point, v, touched));
  return best;
}

std::size_t KDoublingLabeling::storage(Index x) const {
  return base_.contains(x) ? base_.label(x).size() : reach_[at(x)].size();
}

KDoublingLabeling build_k_doubling_labeling(const TerminalInstance& inst) {
  std::vector<std::vector<ReachRecord>> reach(at(inst.n()));
  for (Index x = 0; x < inst.n(); ++x) {
    if (inst.is_terminal(x)) continue;
    for (Index v : terminal_reach(inst, x)) reach[at(x)].push_back({v, inst.d(x, v)});
  }
  return KDoublingLabeling(build_base_labeling(inst.terminals(), inst.metric(), inst.eps()), std::move(reach),
                           inst.terminals(), inst.eps());
}

double lp_distance(const Eigen::Ref<const VectorXd>& a, const Eigen::Ref<const VectorXd>& b, double p) {
  if (std::isinf(p)) return (a - b).cwiseAbs().maxCoeff();
  if (p == 2) return (a - b).norm();
  return std::pow((a - b).cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

MatrixXd extend_embedding(const MatrixXd& base, std::span<const Index> y_points, const HangMap& hang) {
  if (base.rows() != static_cast<Index>(y_points.size()))
    throw std::invalid_argument("embedding rows must align with Y");
  const auto n = static_cast<Index>(hang.entries.size());
  const Index s = base.cols();
  std::vector<Index> row(at(n), -1);
  for (std::size_t a = 0; a < y_points.size(); ++a) row[at(y_points[a])] = static_cast<Index>(a);
  MatrixXd out = MatrixXd::Zero(n, s + 1);
  for (Index x = 0; x < n; ++x) {
    if (row[at(x)] >= 0) {
      out.row(x).head(s) = base.row(row[at(x)]);
    } else if (hang.hanged(x)) {
      const HangEntry& h = hang[x];
      if (row[at(h.target)] < 0) throw std::invalid_argument("hang target outside Y");
      out.row(x).head(s) = base.row(row[at(h.target)]);
      out(x, s) = h.dist;
    } else {
      throw std::invalid_argument("point " + std::to_string(x) + " neither in Y nor hanged");
    }
  }
  return out;
}

}  // namespace tms
