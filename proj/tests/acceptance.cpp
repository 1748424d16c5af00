// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include "tms/audit.hpp"
#include "tms/generators.hpp"
#include "tms/l2.hpp"
#include "tms/linf.hpp"
#include "tms/net.hpp"
#include "tms/partition.hpp"
#include "tms/report.hpp"
#include "tms/structure_io.hpp"
#include "tms/terminal.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace tms;

namespace {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

GeneratedInstance make(const std::string& kind, Index n, Index k, double eps, std::uint64_t seed) {
  GenParams p;
  p.kind = kind;
  p.n = n;
  p.k = k;
  p.eps = eps;
  p.seed = seed;
  return gen_instance(p);
}

std::string label(const TerminalInstance& inst, const std::string& kind, std::uint64_t seed) {
  return kind + " n=" + std::to_string(inst.n()) + " k=" + std::to_string(inst.k()) + " eps=" + fmt(inst.eps()) +
         " seed=" + std::to_string(seed);
}

// Doubling-X structures on the shared n = 500 instance set.
struct XCase {
  std::string kind;
  std::uint64_t seed = 0;
  GeneratedInstance gen;
  Enrichment en;
  TerminalSpanner spanner;
  TerminalLabeling labeling;
  const TerminalInstance& inst() const { return gen.instance; }
  std::string name() const { return label(gen.instance, kind, seed); }
};

std::vector<XCase> build_x_cases() {
  std::vector<XCase> cases;
  auto add = [&](const std::string& kind, Index k, double eps, std::uint64_t seed) {
    XCase c;
    c.kind = kind;
    c.seed = seed;
    c.gen = make(kind, 500, k, eps, seed);
    c.en = enrich(c.gen.instance);
    c.spanner = build_terminal_spanner(c.gen.instance, c.en);
    c.labeling = build_terminal_labeling(c.gen.instance, c.en);
    cases.push_back(std::move(c));
  };
  for (const std::string kind : {"uniform-square", "gaussian-clusters"})
    for (Index k : {10, 25, 50})
      for (double eps : {0.05, 0.1, 0.2}) add(kind, k, eps, 1);
  add("uniform-square", 25, 0.1, 2);
  add("gaussian-clusters", 25, 0.1, 2);
  return cases;
}

Outcome criterion_x_stretch(const std::vector<XCase>& cases) {
  Outcome o{1, "doubling-X spanner, oracle and labeling stretch in [1, 1 + 12 eps]"};
  double worst_slack = 0;
  for (const auto& c : cases) {
    const double bound = 1 + 12 * c.inst().eps();
    const StretchReport reports[] = {audit_stretch(c.spanner, c.inst()), audit_stretch(c.labeling, c.inst(), true),
                                     audit_stretch(c.labeling, c.inst(), false)};
    for (const auto& r : reports) {
      o.require(r.pass && approx_le(1.0, r.min_ratio) && approx_le(r.max_ratio, bound),
                r.structure + " on " + c.name() + " max " + fmt(r.max_ratio, 6) + " min " + fmt(r.min_ratio, 6));
      worst_slack = std::max(worst_slack, (r.max_ratio - 1) / (bound - 1));
    }
  }
  o.note(std::to_string(cases.size()) + " instances; worst (max ratio - 1) / (12 eps) = " + fmt(worst_slack));
  return o;
}

Outcome criterion_x_size(const std::vector<XCase>& cases) {
  Outcome o{2, "doubling-X size: edges = base(|Y|) + (n - |Y|), |Y| <= k lambda^(5b), n = 2000 shape"};
  std::size_t max_y = 0;
  for (const auto& c : cases) {
    const auto n = static_cast<std::size_t>(c.inst().n());
    const std::size_t y = c.en.enriched.points.size();
    max_y = std::max(max_y, y);
    o.require(c.spanner.edge_count() == c.spanner.base.edges.size() + (n - y), "edge identity on " + c.name());
    const auto est = estimate_doubling(c.inst().metric());
    o.require(est.exhaustive, "exhaustive doubling estimate on " + c.name());
    const auto sz = enriched_size_audit(c.en.enriched, est.lambda, static_cast<std::size_t>(c.inst().k()));
    o.require(sz.pass, "|Y| = " + std::to_string(y) + " > " + fmt(sz.bound) + " on " + c.name());
  }
  o.note("identity and |Y| bound on " + std::to_string(cases.size()) + " instances, max |Y| = " +
         std::to_string(max_y));

  // k = ceil(n^0.3), eps = 0.2, n = 2000: edges - n <= 0.5 n.
  const Index n = 2000;
  const auto k = static_cast<Index>(std::ceil(std::pow(2000.0, 0.3)));
  const auto g = make("uniform-square", n, k, 0.2, 1);
  const auto en = enrich(g.instance);
  const auto sp = build_terminal_spanner(g.instance, en);
  const auto y = en.enriched.points.size();
  const auto est = estimate_doubling(g.instance.metric());
  const auto sz = enriched_size_audit(en.enriched, est.lambda, static_cast<std::size_t>(k));
  const double per_point = static_cast<double>(sp.base.edges.size()) / static_cast<double>(y);
  const double excess = static_cast<double>(sp.edge_count()) - static_cast<double>(n);
  o.require(sp.edge_count() == sp.base.edges.size() + static_cast<std::size_t>(n) - y, "edge identity at n = 2000");
  o.note("n = 2000 k = " + std::to_string(k) + ": |Y| = " + std::to_string(y) + ", edges = " +
         std::to_string(sp.edge_count()) + ", base edges = " + std::to_string(sp.base.edges.size()) +
         ", lambda (sampled) = " + std::to_string(est.lambda) + ", k lambda^(5b) * base per-point = " +
         fmt(sz.bound * per_point));
  o.require(excess <= 0.5 * static_cast<double>(n),
            "edges - n = " + fmt(excess, 8) + " > 0.5 n = " + fmt(0.5 * static_cast<double>(n)));
  return o;
}

Outcome criterion_base(const std::vector<XCase>& cases) {
  Outcome o{3, "base spanner and labeling all-pairs stretch on Y <= 1 + eps"};
  double worst_sp = 0, worst_lab = 0, min_lab = std::numeric_limits<double>::infinity();
  for (const auto& c : cases) {
    const double eps = c.inst().eps();
    const double s = base_spanner_max_stretch(c.spanner.base, c.inst().metric());
    double lo = 1;
    const double l = base_labeling_max_stretch(c.labeling.base(), c.inst().metric(), &lo);
    o.require(approx_le(s, 1 + eps), "base spanner " + fmt(s, 6) + " on " + c.name());
    o.require(approx_le(l, 1 + eps) && approx_le(1.0, lo), "base labeling [" + fmt(lo, 6) + ", " + fmt(l, 6) +
                                                              "] on " + c.name());
    worst_sp = std::max(worst_sp, (s - 1) / eps);
    worst_lab = std::max(worst_lab, (l - 1) / eps);
    min_lab = std::min(min_lab, lo);
  }
  o.note("worst (stretch - 1) / eps: spanner " + fmt(worst_sp) + ", labeling " + fmt(worst_lab) +
         "; min labeling ratio " + fmt(min_lab, 8));
  return o;
}

Outcome criterion_k_doubling() {
  Outcome o{4, "doubling-K spanner and oracle stretch <= 1 + 3 eps, |N(x)| within the packing bound"};
  int count = 0;
  double worst = 0;
  std::size_t max_reach = 0;
  for (double eps : {0.1, 0.2})
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto g = make("completion", 300, 30, eps, seed);
      const auto& inst = g.instance;
      const auto sp = build_k_doubling_spanner(inst);
      const auto lab = build_k_doubling_labeling(inst);
      const auto rs = audit_stretch(sp, inst);
      const auto ro = audit_stretch(lab, inst, true);
      const std::string name = label(inst, "completion", seed);
      for (const auto* r : {&rs, &ro}) {
        o.require(r->pass && approx_le(r->max_ratio, 1 + 3 * eps) && approx_le(1.0, r->min_ratio),
                  r->structure + " on " + name + " max " + fmt(r->max_ratio, 6));
        worst = std::max(worst, (r->max_ratio - 1) / eps);
      }
      const auto lambda_k = estimate_doubling(inst.metric().subspace(inst.terminals())).lambda;
      // N(x) is an (eps R)-net inside a ball of radius 2R/eps.
      const double bound = packing_bound(2 / eps, eps, lambda_k);
      std::size_t local = 0;
      for (std::size_t s : sp.reach_sizes) local = std::max(local, s);
      o.require(static_cast<double>(local) <= bound,
                "max |N(x)| = " + std::to_string(local) + " > " + fmt(bound) + " on " + name);
      max_reach = std::max(max_reach, local);
      ++count;
    }
  o.note(std::to_string(count) + " completion instances; worst (stretch - 1) / eps = " + fmt(worst) +
         "; max |N(x)| = " + std::to_string(max_reach));
  return o;
}

Outcome criterion_linf() {
  Outcome o{5, "l_inf terminal embedding in [1 - 3 eps, 1 + eps], exact dimension, coordinate properties"};
  std::size_t vanishing = 0, samples = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  auto run = [&](const GeneratedInstance& g, const std::string& name) {
    const auto& inst = g.instance;
    const double eps = inst.eps();
    const auto fam = build_contracted_metrics(inst);
    const auto emb = embed_linf(inst, fam);
    const Index k_eff = std::max<Index>(inst.k(), 4);
    const int expected = static_cast<int>(std::ceil(2.0 * emb.t * std::log2(2.0 * static_cast<double>(k_eff) / eps) - 1e-12));
    o.require(emb.dim == expected && emb.coords.cols() == expected,
              "dimension " + std::to_string(emb.dim) + " != " + std::to_string(expected) + " on " + name);
    const auto r = audit_embedding(emb.coords, std::numeric_limits<double>::infinity(), emb.scale, inst, 1 - 3 * eps,
                                   1 + eps, false);
    o.require(r.pass, "ratio range [" + fmt(r.min_ratio, 6) + ", " + fmt(r.max_ratio, 6) + "] on " + name);
    lo = std::min(lo, r.min_ratio);
    hi = std::max(hi, r.max_ratio);
    const auto props = audit_linf_properties(emb, fam, inst, 100000, 7);
    o.require(props.pass(), "coordinate properties on " + name + ": " + to_json(props).dump());
    vanishing += props.vanishing_checked;
    samples += props.samples;
  };
  for (double eps : {0.1, 0.2}) {
    for (std::uint64_t seed : {1, 2}) {
      const auto g = make("completion", 200, 16, eps, seed);
      run(g, label(g.instance, "completion", seed));
    }
    GenParams p;
    p.kind = "gaussian-clusters";
    p.n = 300;
    p.k = 16;
    p.eps = eps;
    p.sigma = 0.001;
    p.seed = 3;
    const auto tight = gen_instance(p);
    run(tight, label(tight.instance, "gaussian-clusters sigma=0.001", 3));
    const auto square = make("uniform-square", 500, 25, eps, 4);
    run(square, label(square.instance, "uniform-square", 4));
  }
  o.require(vanishing > 0, "no scale-vanishing check was applicable");
  o.note("ratios in [" + fmt(lo, 6) + ", " + fmt(hi, 6) + "]; " + std::to_string(samples) + " sampled checks, " +
         std::to_string(vanishing) + " scale-vanishing");
  return o;
}

Outcome criterion_lower_bound() {
  Outcome o{6, "lower-bound instances force every cross edge; doubling-K builder uses exactly those"};
  for (int lambda : {4, 8})
    for (double eps : {0.1, 0.3}) {
      GenParams p;
      p.kind = "lower-bound";
      p.n = 200;
      p.lambda = lambda;
      p.eps = eps;
      const auto g = gen_instance(p);
      const auto r = lower_bound_audit(g, lambda);
      const std::string name = "lambda=" + std::to_string(lambda) + " eps=" + fmt(eps);
      o.require(r.pass, name + ": forced " + std::to_string(r.forced_pairs) + "/" + std::to_string(r.cross_pairs) +
                            ", spanner cross " + std::to_string(r.spanner_cross_edges) + "/" +
                            std::to_string(r.required_edges));
      o.note(name + ": |K| = " + std::to_string(r.k) + ", min detour ratio " + fmt(r.min_detour_ratio, 6) +
             ", cross edges " + std::to_string(r.spanner_cross_edges));
    }
  return o;
}

void add_extension(Outcome& o, const ExtensionCheck& e, const std::string& what, std::size_t& checked) {
  o.require(e.violations == 0, what + ": " + e.first);
  checked += e.checked;
}

void extension_for(Outcome& o, const TerminalInstance& inst, const Enrichment& en, const TerminalSpanner& sp,
                   const TerminalLabeling& lab, const std::string& name, std::size_t& checked) {
  const auto& Y = en.enriched.points;
  const auto edges = sp.edges();
  const MatrixXd table = exact_graph_distances(inst.n(), edges, Y);
  std::vector<Index> row(static_cast<std::size_t>(inst.n()), -1);
  for (std::size_t a = 0; a < Y.size(); ++a) row[static_cast<std::size_t>(Y[a])] = static_cast<Index>(a);
  add_extension(o, check_extension(sp.hang, Y, inst, [&](Index x, Index v) {
                  return table(row[static_cast<std::size_t>(v)], x);
                }),
                "spanner on " + name, checked);
  add_extension(o, check_extension(lab.hang(), Y, inst, [&](Index x, Index v) {
                  return x == v ? 0.0 : lab.query(x, v);
                }),
                "labeling/oracle on " + name, checked);
  const auto emb = embed_l2_terminal(inst, en, jl_dimension(inst.k(), inst.eps()), 5);
  add_extension(o, check_extension(emb.hang, emb.y_points, inst, [&](Index x, Index v) {
                  return (emb.coords.row(x) - emb.coords.row(v)).norm();
                }),
                "embed-l2 on " + name, checked);
}

Outcome criterion_extension(const std::vector<XCase>& cases) {
  Outcome o{7, "hanging extension contract across spanner, labeling, oracle and embed-l2"};
  std::size_t checked = 0;
  for (const auto& c : cases) extension_for(o, c.inst(), c.en, c.spanner, c.labeling, c.name(), checked);
  const auto big = make("uniform-square", 1000, 25, 0.1, 9);
  const auto en = enrich(big.instance);
  extension_for(o, big.instance, en, build_terminal_spanner(big.instance, en),
                build_terminal_labeling(big.instance, en), label(big.instance, "uniform-square", 9), checked);
  o.require(checked > 0, "no hanged point was checked");
  o.note(std::to_string(checked) + " (x, v) pairs checked over " + std::to_string(cases.size() + 1) + " instances");
  return o;
}

Outcome criterion_jl() {
  Outcome o{8, "l_2 terminal embedding: >= 90% of 20 seeds with distortion <= 1.25"};
  const Index target = jl_dimension(25, 0.2);
  int good = 0;
  double worst = 1;
  std::ostringstream list;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenParams p;
    p.kind = "uniform-cube";
    p.dim = 20;
    p.n = 500;
    p.k = 25;
    p.eps = 0.2;
    p.seed = seed;
    const auto g = gen_instance(p);
    const auto emb = embed_l2_terminal(g.instance, target, seed);
    const auto r = audit_embedding(emb.coords, 2, 1, g.instance, 0, 1.25, true);
    if (approx_le(r.distortion, 1.25)) ++good;
    worst = std::max(worst, r.distortion);
    list << (seed > 1 ? " " : "") << fmt(r.distortion, 4);
  }
  o.require(good >= 18, std::to_string(good) + "/20 seeds within 1.25");
  o.note("target dim " + std::to_string(target) + "; " + std::to_string(good) + "/20 seeds within 1.25, worst " +
         fmt(worst, 6));
  o.note("distortions: " + list.str());
  return o;
}

std::size_t file_hash(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return std::hash<std::string>{}(os.str());
}

// Hashes of every structure type and its audit report for one fixed-seed run.
std::vector<std::size_t> determinism_run(const std::filesystem::path& dir) {
  std::vector<std::size_t> h;
  std::filesystem::create_directories(dir);
  const auto g = make("uniform-square", 300, 12, 0.2, 42);
  const auto& inst = g.instance;
  const auto c = make("completion", 200, 16, 0.1, 42);
  auto save = [&](const io::StructureFile& f, const std::string& name) {
    io::save_structure(dir / name, f);
    h.push_back(file_hash(dir / name));
  };
  auto report = [&](const StretchReport& r) { h.push_back(std::hash<std::string>{}(to_json(r).dump())); };

  const auto sp = build_terminal_spanner(inst);
  save(io::from_spanner(sp), "spanner");
  report(audit_stretch(sp, inst));
  const auto lab = build_terminal_labeling(inst);
  save(io::from_labeling(lab, false), "labeling");
  save(io::from_labeling(lab, true), "oracle");
  report(audit_stretch(lab, inst));
  const auto spk = build_k_doubling_spanner(c.instance);
  save(io::from_spanner(spk), "spanner-k");
  report(audit_stretch(spk, c.instance));
  const auto labk = build_k_doubling_labeling(c.instance);
  save(io::from_labeling(labk, true), "oracle-k");
  report(audit_stretch(labk, c.instance, true));

  const auto emb = embed_linf(c.instance);
  h.push_back(std::hash<std::string>{}(
      std::string(reinterpret_cast<const char*>(emb.coords.data()), sizeof(double) * emb.coords.size())));
  const auto l2 = embed_l2_terminal(inst, 40, 3);
  h.push_back(std::hash<std::string>{}(
      std::string(reinterpret_cast<const char*>(l2.coords.data()), sizeof(double) * l2.coords.size())));

  GenParams p;
  p.kind = "lower-bound";
  p.n = 120;
  p.eps = 0.3;
  const auto lb = lower_bound_audit(gen_instance(p), 4);
  h.push_back(std::hash<std::string>{}(to_json(lb).dump()));
  return h;
}

Outcome criterion_determinism() {
  Outcome o{9, "fixed seeds reproduce identical structures and reports"};
  const auto root = std::filesystem::temp_directory_path() / "tms_acceptance_determinism";
  std::filesystem::remove_all(root);
  const auto a = determinism_run(root / "a");
  const auto b = determinism_run(root / "b");
  o.require(a == b, "hash mismatch between runs");
  std::filesystem::remove_all(root);
  o.note(std::to_string(a.size()) + " hashes compared");
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  std::vector<Outcome> results;
  auto timed = [&](const std::function<Outcome()>& fn) {
    const auto t0 = clock::now();
    Outcome o = fn();
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::cout << "[criterion " << o.id << "] " << (o.pass ? "PASS" : "FAIL") << "  " << o.name << "  ("
              << fmt(secs, 3) << " s)\n";
    for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    std::cout.flush();
    results.push_back(std::move(o));
  };

  const auto t0 = clock::now();
  const auto cases = build_x_cases();
  std::cout << "built " << cases.size() << " doubling-X instances in "
            << fmt(std::chrono::duration<double>(clock::now() - t0).count(), 3) << " s\n";

  timed([&] { return criterion_x_stretch(cases); });
  timed([&] { return criterion_x_size(cases); });
  timed([&] { return criterion_base(cases); });
  timed(criterion_k_doubling);
  timed(criterion_linf);
  timed(criterion_lower_bound);
  timed([&] { return criterion_extension(cases); });
  timed(criterion_jl);
  timed(criterion_determinism);

  std::size_t failed = 0;
  for (const auto& o : results) failed += o.pass ? 0 : 1;
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << '\n';
  return failed == 0 ? 0 : 1;
}
