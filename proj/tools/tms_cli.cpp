// Command-line front end: generate instances, build terminal structures,
// audit them against exact distances, and run the lower-bound check.

#include "tms/audit.hpp"
#include "tms/io.hpp"
#include "tms/l2.hpp"
#include "tms/linf.hpp"
#include "tms/report.hpp"
#include "tms/structure_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

namespace {

using namespace tms;
using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct GenOptions {
  GenParams params;
  std::string out;
};

struct BuildOptions {
  std::string structure;
  std::string instance;
  std::string terminals;
  double eps = 0.1;
  std::string out;
  Index target_dim = 0;
  std::uint64_t seed = 1;
};

struct AuditOptions {
  std::string structure;
  std::string instance;
  std::string terminals;
  std::string report;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

struct LowerBoundOptions {
  int lambda = 4;
  double eps = 0.3;
  Index n = 200;
  std::uint64_t seed = 1;
  std::string report;
};

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
}

int run_gen(const GenOptions& o) {
  const GeneratedInstance g = gen_instance(o.params);
  const FiniteMetric& m = g.instance.metric();
  const std::string metric_path = o.out + (m.euclidean() ? ".points" : ".dist");
  io::save_metric(metric_path, m);
  io::save_terminals(o.out + ".terminals", g.instance.terminals());
  std::cout << metric_path << '\n' << o.out << ".terminals\n";
  std::cout << "n = " << g.instance.n() << ", k = " << g.instance.k() << '\n';
  if (g.lower_bound) std::cout << "full sphere net size = " << g.lower_bound->full_net_size << '\n';
  return 0;
}

int run_build(const BuildOptions& o) {
  TerminalInstance inst(io::load_metric(o.instance), io::load_terminals(o.terminals), o.eps);
  const std::string& type = o.structure;
  io::StructureFile file;
  if (type == "spanner") {
    file = io::from_spanner(build_terminal_spanner(inst));
  } else if (type == "spanner-k") {
    file = io::from_spanner(build_k_doubling_spanner(inst));
  } else if (type == "labeling" || type == "oracle") {
    file = io::from_labeling(build_terminal_labeling(inst), type == "oracle");
  } else if (type == "labeling-k" || type == "oracle-k") {
    file = io::from_labeling(build_k_doubling_labeling(inst), type == "oracle-k");
  } else if (type == "embed-linf") {
    const LinfEmbedding emb = embed_linf(inst);
    file.type = type;
    file.eps = inst.eps();
    file.n = inst.n();
    file.terminals = inst.terminals();
    file.coords = emb.coords;
    file.p = std::numeric_limits<double>::infinity();
    file.scale = emb.scale;
    file.t = emb.t;
  } else if (type == "embed-l2") {
    const Index dim = o.target_dim > 0 ? o.target_dim : jl_dimension(inst.k(), inst.eps());
    const L2Embedding emb = embed_l2_terminal(inst, dim, o.seed);
    file.type = type;
    file.eps = inst.eps();
    file.n = inst.n();
    file.terminals = inst.terminals();
    file.coords = emb.coords;
    file.p = 2;
    file.seed = o.seed;
    file.y_points = emb.y_points;
    file.hang = emb.hang;
  } else {
    throw std::invalid_argument("unknown structure '" + type + "'");
  }
  io::save_structure(o.out, file);
  std::cout << "wrote " << type << " to " << o.out << '\n';
  return 0;
}

json extension_json(const ExtensionCheck& c) {
  return {{"checked", c.checked}, {"violations", c.violations}, {"first", c.first}, {"pass", c.violations == 0}};
}

int run_audit(const AuditOptions& o) {
  io::StructureFile s = io::load_structure(o.structure);
  std::vector<Index> K = s.terminals;
  if (!o.terminals.empty()) {
    auto given = io::load_terminals(o.terminals);
    std::sort(given.begin(), given.end());
    if (given != K) throw std::invalid_argument("terminal file does not match the structure's terminals");
  }
  TerminalInstance inst(io::load_metric(o.instance), std::move(K), s.eps);
  if (inst.n() != s.n) throw std::invalid_argument("instance size does not match the structure");

  json report = {{"structure", s.type}, {"instance_file", o.instance}};
  StretchReport stretch;
  bool pass = true;

  if (s.spanner) {
    stretch = audit_stretch(*s.spanner, inst);
    if (s.spanner->mode == TerminalMode::kDoublingX) {
      const auto& Y = s.spanner->base.vertices;
      const auto edges = s.spanner->edges();
      const MatrixXd table = exact_graph_distances(inst.n(), edges, Y);
      std::vector<Index> row(static_cast<std::size_t>(inst.n()), -1);
      for (std::size_t a = 0; a < Y.size(); ++a) row[static_cast<std::size_t>(Y[a])] = static_cast<Index>(a);
      auto est = [&](Index x, Index v) { return table(row[static_cast<std::size_t>(v)], x); };
      const auto ext = check_extension(s.spanner->hang, Y, inst, est);
      report["extension"] = extension_json(ext);
      pass = pass && ext.violations == 0;
    }
    const double base = base_spanner_max_stretch(s.spanner->base, inst.metric());
    const bool base_ok = approx_le(base, 1 + s.eps);
    report["base"] = {{"max_stretch", base}, {"certified", 1 + s.eps}, {"pass", base_ok}};
    pass = pass && base_ok;
  } else if (s.labeling) {
    stretch = audit_stretch(*s.labeling, inst, s.type == "oracle");
    const auto& Y = s.labeling->base().vertices();
    auto est = [&](Index x, Index v) { return x == v ? 0.0 : s.labeling->query(x, v); };
    const auto ext = check_extension(s.labeling->hang(), Y, inst, est);
    report["extension"] = extension_json(ext);
    double lo = 1;
    const double hi = base_labeling_max_stretch(s.labeling->base(), inst.metric(), &lo);
    const bool base_ok = approx_le(hi, 1 + s.eps) && approx_le(1.0, lo);
    report["base"] = {{"max_stretch", hi}, {"min_stretch", lo}, {"certified", 1 + s.eps}, {"pass", base_ok}};
    pass = pass && ext.violations == 0 && base_ok;
  } else if (s.k_labeling) {
    stretch = audit_stretch(*s.k_labeling, inst, s.type == "oracle-k");
  } else if (s.type == "embed-linf") {
    stretch = audit_embedding(s.coords, s.p, s.scale, inst, 1 - 3 * s.eps, 1 + s.eps, false);
    stretch.structure = s.type;
    stretch.mode = "linf";
    // The coordinate-level checks need the contracted metrics; rebuild and
    // require the rebuilt coordinates to match the file.
    const ContractedMetricFamily family = build_contracted_metrics(inst);
    const LinfEmbedding emb = embed_linf(inst, family);
    const bool same = emb.coords.rows() == s.coords.rows() && emb.coords.cols() == s.coords.cols() &&
                      emb.coords == s.coords;
    const int expected_dim = linf_dimension(s.t, std::max<Index>(inst.k(), 4), s.eps);
    const auto props = audit_linf_properties(emb, family, inst, o.samples, o.seed);
    stretch.set_size("t", s.t);
    report["dimension"] = {{"D", s.coords.cols()}, {"expected", expected_dim}, {"pass", s.coords.cols() == expected_dim}};
    report["rebuild_matches"] = same;
    report["properties"] = to_json(props);
    pass = pass && s.coords.cols() == expected_dim && same && props.pass();
  } else if (s.type == "embed-l2") {
    stretch = audit_embedding(s.coords, 2, 1, inst, 0, 1 + 12 * s.eps, true);
    stretch.structure = s.type;
    stretch.mode = "l2";
    stretch.set_size("y_points", static_cast<double>(s.y_points.size()));
    auto est = [&](Index x, Index v) { return (s.coords.row(x) - s.coords.row(v)).norm(); };
    const auto ext = check_extension(s.hang, s.y_points, inst, est);
    report["extension"] = extension_json(ext);
    pass = pass && ext.violations == 0;
  }
  stretch.instance = summarize(inst);
  pass = pass && stretch.pass;
  report["stretch"] = to_json(stretch);
  report["pass"] = pass;
  stamp(report);
  if (!o.report.empty()) write_json(o.report, report);
  std::cout << format_table(stretch);
  for (const char* key : {"extension", "base", "dimension", "properties"})
    if (report.contains(key)) std::cout << "  " << key << ": " << report[key].dump() << '\n';
  std::cout << (pass ? "AUDIT PASS" : "AUDIT FAIL") << '\n';
  return pass ? 0 : kExitFail;
}

int run_lower_bound(const LowerBoundOptions& o) {
  GenParams p;
  p.kind = "lower-bound";
  p.lambda = o.lambda;
  p.eps = o.eps;
  p.n = o.n;
  p.seed = o.seed;
  const GeneratedInstance g = gen_instance(p);
  const LowerBoundReport rep = lower_bound_audit(g, o.lambda);
  json report = to_json(rep);
  stamp(report);
  if (!o.report.empty()) write_json(o.report, report);
  std::cout << format_table(rep);
  return rep.pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terminal metric structures: spanners, distance oracles, labelings and embeddings"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a seeded instance");
  g->add_option("--kind", gen.params.kind, "Instance family")
      ->check(CLI::IsMember(instance_kinds()))
      ->capture_default_str();
  g->add_option("--n", gen.params.n, "Number of points")->capture_default_str();
  g->add_option("--k", gen.params.k, "Number of terminals")->capture_default_str();
  g->add_option("--eps", gen.params.eps, "Accuracy parameter (lower-bound net radius)")->capture_default_str();
  g->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
  g->add_option("--lambda", gen.params.lambda, "Doubling constant (lower-bound)")->capture_default_str();
  g->add_option("--dim", gen.params.dim, "Ambient dimension (uniform-cube)")->capture_default_str();
  g->add_option("--clusters", gen.params.clusters, "Blob count (gaussian-clusters)")->capture_default_str();
  g->add_option("--sigma", gen.params.sigma, "Blob spread (gaussian-clusters)")->capture_default_str();
  g->add_option("--spacing", gen.params.spacing, "Point spacing (grid, line)")->capture_default_str();
  g->add_option("--out", gen.out, "Output prefix; writes PREFIX.points or PREFIX.dist and PREFIX.terminals")
      ->required();

  BuildOptions build;
  auto* b = app.add_subcommand("build", "Build a structure on an instance");
  b->add_option("--structure", build.structure, "Structure type")
      ->required()
      ->check(CLI::IsMember(io::structure_types()));
  b->add_option("--instance", build.instance, "Point file or distance matrix (.dist)")->required();
  b->add_option("--terminals", build.terminals, "Terminal index file")->required();
  b->add_option("--eps", build.eps, "Accuracy parameter in (0,1)")->capture_default_str();
  b->add_option("--out", build.out, "Structure output file")->required();
  b->add_option("--target-dim", build.target_dim, "Projection dimension for embed-l2 (default ceil(8 ln k / eps^2))");
  b->add_option("--seed", build.seed, "Projection seed for embed-l2")->capture_default_str();

  AuditOptions audit;
  auto* a = app.add_subcommand("audit", "Audit a structure against exact distances");
  a->add_option("--structure", audit.structure, "Structure file")->required();
  a->add_option("--instance", audit.instance, "Point file or distance matrix")->required();
  a->add_option("--terminals", audit.terminals, "Terminal file (checked against the structure)");
  a->add_option("--report", audit.report, "JSON report output");
  a->add_option("--samples", audit.samples, "Sampled coordinate checks (embed-linf)")->capture_default_str();
  a->add_option("--seed", audit.seed, "Seed for sampled checks")->capture_default_str();

  LowerBoundOptions lb;
  auto* l = app.add_subcommand("lower-bound", "Generate and audit a lower-bound instance");
  l->add_option("--lambda", lb.lambda, "Doubling constant (sphere dimension ceil(log2 lambda))")->capture_default_str();
  l->add_option("--eps", lb.eps, "Accuracy parameter")->capture_default_str();
  l->add_option("--n", lb.n, "Number of points")->capture_default_str();
  l->add_option("--seed", lb.seed, "Random seed")->capture_default_str();
  l->add_option("--report", lb.report, "JSON report output");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) return run_gen(gen);
    if (*b) return run_build(build);
    if (*a) return run_audit(audit);
    if (*l) return run_lower_bound(lb);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
