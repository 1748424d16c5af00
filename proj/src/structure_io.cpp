#include "tms/structure_io.hpp"

#include "tms/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tms::io {
namespace {

using nlohmann::json;

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

bool is_spanner_type(const std::string& type) { return type == "spanner" || type == "spanner-k"; }

void write_spanner(std::ostream& out, const StructureFile& s) {
  const TerminalSpanner& sp = *s.spanner;
  out << "# tms-structure " << s.type << '\n';
  out << "# mode " << mode_name(sp.mode) << '\n';
  out << "# eps " << format_double(sp.eps) << '\n';
  out << "# n " << sp.n << '\n';
  out << "# terminals";
  for (Index v : sp.terminals) out << ' ' << v;
  out << '\n';
  out << "# base_vertices";
  for (Index v : sp.base.vertices) out << ' ' << v;
  out << '\n';
  out << "# base_edges " << sp.base.edges.size() << '\n';
  out << "# base_levels " << sp.base.levels << '\n';
  out << "# certified " << format_double(sp.certified_stretch()) << '\n';
  for (const Edge& e : sp.base.edges) out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
  for (const Edge& e : sp.extension) out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

StructureFile read_spanner(std::istream& in) {
  StructureFile s;
  TerminalSpanner sp;
  std::size_t base_edges = 0;
  std::string line;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "tms-structure") {
        ls >> s.type;
      } else if (key == "mode") {
        std::string m;
        ls >> m;
        sp.mode = m == mode_name(TerminalMode::kDoublingK) ? TerminalMode::kDoublingK : TerminalMode::kDoublingX;
      } else if (key == "eps") {
        ls >> sp.eps;
      } else if (key == "n") {
        ls >> sp.n;
      } else if (key == "terminals") {
        for (Index v; ls >> v;) sp.terminals.push_back(v);
      } else if (key == "base_vertices") {
        for (Index v; ls >> v;) sp.base.vertices.push_back(v);
      } else if (key == "base_edges") {
        ls >> base_edges;
      } else if (key == "base_levels") {
        ls >> sp.base.levels;
      }
      continue;
    }
    Edge e;
    if (!(ls >> e.u >> e.v >> e.w)) throw std::runtime_error("malformed edge line: " + line);
    if (e.u < 0 || e.v < 0 || e.u >= sp.n || e.v >= sp.n) throw std::runtime_error("edge endpoint out of range");
    edges.push_back(e);
  }
  if (!is_spanner_type(s.type)) throw std::runtime_error("not a spanner file");
  if (base_edges > edges.size()) throw std::runtime_error("base edge count exceeds edge list");
  sp.base.eps = sp.eps;
  sp.base.edges.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(base_edges));
  sp.extension.assign(edges.begin() + static_cast<std::ptrdiff_t>(base_edges), edges.end());
  if (sp.mode == TerminalMode::kDoublingX) {
    sp.hang.entries.assign(at(sp.n), HangEntry{});
    for (const Edge& e : sp.extension) {
      const bool to_terminal = std::binary_search(sp.terminals.begin(), sp.terminals.end(), e.v);
      sp.hang.entries[at(e.u)] =
          HangEntry{e.v, e.w, to_terminal ? HangReason::kNearestTerminal : HangReason::kFinalMarkedCenter};
    }
  } else {
    sp.reach_sizes.assign(at(sp.n), 0);
    for (const Edge& e : sp.extension) ++sp.reach_sizes[at(e.u)];
  }
  s.eps = sp.eps;
  s.n = sp.n;
  s.terminals = sp.terminals;
  s.spanner = std::move(sp);
  return s;
}

json base_to_json(const BaseLabeling& base) {
  json labels = json::array();
  for (Index v : base.vertices()) {
    json entries = json::array();
    for (const LabelEntry& e : base.label(v)) entries.push_back({e.level, e.center, e.dist});
    labels.push_back(std::move(entries));
  }
  return {{"vertices", base.vertices()}, {"radii", base.radii()}, {"eps", base.eps()}, {"labels", labels}};
}

BaseLabeling base_from_json(const json& j) {
  auto vertices = j.at("vertices").get<std::vector<Index>>();
  auto radii = j.at("radii").get<std::vector<double>>();
  std::vector<std::vector<LabelEntry>> labels;
  for (const auto& entries : j.at("labels")) {
    auto& row = labels.emplace_back();
    for (const auto& e : entries) row.push_back({e.at(0).get<std::int32_t>(), e.at(1).get<Index>(), e.at(2).get<double>()});
  }
  return BaseLabeling(std::move(vertices), std::move(labels), std::move(radii), j.at("eps").get<double>());
}

json hang_to_json(const HangMap& hang) {
  json out = json::array();
  for (std::size_t x = 0; x < hang.entries.size(); ++x) {
    const HangEntry& e = hang.entries[x];
    if (e.target < 0) continue;
    out.push_back({x, e.target, e.dist, e.reason == HangReason::kFinalMarkedCenter ? "final-marked" : "nearest-terminal"});
  }
  return out;
}

HangMap hang_from_json(const json& j, Index n) {
  HangMap hang;
  hang.entries.assign(at(n), HangEntry{});
  for (const auto& e : j) {
    const auto x = e.at(0).get<Index>();
    if (x < 0 || x >= n) throw std::runtime_error("hang record out of range");
    hang.entries[at(x)] = HangEntry{e.at(1).get<Index>(), e.at(2).get<double>(),
                                    e.at(3).get<std::string>() == "final-marked" ? HangReason::kFinalMarkedCenter
                                                                                 : HangReason::kNearestTerminal};
  }
  return hang;
}

json coords_to_json(const MatrixXd& coords) {
  json rows = json::array();
  for (Index i = 0; i < coords.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < coords.cols(); ++j) row.push_back(coords(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd coords_from_json(const json& j) {
  const auto rows = static_cast<Index>(j.size());
  const auto cols = rows ? static_cast<Index>(j.at(0).size()) : 0;
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j.at(at(i)).size()) != cols) throw std::runtime_error("ragged coordinate rows");
    for (Index c = 0; c < cols; ++c) m(i, c) = j[at(i)][at(c)].get<double>();
  }
  return m;
}

json to_document(const StructureFile& s) {
  json doc = {{"type", s.type}, {"eps", s.eps}, {"n", s.n}, {"terminals", s.terminals}};
  if (s.labeling) {
    doc["mode"] = mode_name(TerminalMode::kDoublingX);
    doc["certified"] = s.labeling->certified_stretch();
    doc["base"] = base_to_json(s.labeling->base());
    doc["hang"] = hang_to_json(s.labeling->hang());
  } else if (s.k_labeling) {
    doc["mode"] = mode_name(TerminalMode::kDoublingK);
    doc["certified"] = s.k_labeling->certified_stretch();
    doc["base"] = base_to_json(s.k_labeling->base());
    json reach = json::array();
    for (const auto& records : s.k_labeling->reach()) {
      json row = json::array();
      for (const ReachRecord& r : records) row.push_back({r.point, r.dist});
      reach.push_back(std::move(row));
    }
    doc["reach"] = reach;
  } else {
    doc["p"] = std::isinf(s.p) ? json("inf") : json(s.p);
    doc["scale"] = s.scale;
    doc["dimension"] = s.coords.cols();
    if (s.type == "embed-linf") doc["t"] = s.t;
    if (s.type == "embed-l2") {
      doc["seed"] = s.seed;
      doc["y"] = s.y_points;
      doc["hang"] = hang_to_json(s.hang);
    }
    doc["coords"] = coords_to_json(s.coords);
  }
  return doc;
}

StructureFile from_document(const json& doc) {
  StructureFile s;
  s.type = doc.at("type").get<std::string>();
  s.eps = doc.at("eps").get<double>();
  s.n = doc.at("n").get<Index>();
  s.terminals = doc.at("terminals").get<std::vector<Index>>();
  if (s.type == "labeling" || s.type == "oracle") {
    s.labeling = extend_labeling(base_from_json(doc.at("base")), hang_from_json(doc.at("hang"), s.n), s.terminals,
                                 s.eps);
  } else if (s.type == "labeling-k" || s.type == "oracle-k") {
    std::vector<std::vector<ReachRecord>> reach;
    for (const auto& row : doc.at("reach")) {
      auto& records = reach.emplace_back();
      for (const auto& r : row) records.push_back({r.at(0).get<Index>(), r.at(1).get<double>()});
    }
    s.k_labeling = KDoublingLabeling(base_from_json(doc.at("base")), std::move(reach), s.terminals, s.eps);
  } else if (s.type == "embed-linf" || s.type == "embed-l2") {
    const json& p = doc.at("p");
    s.p = p.is_string() ? std::numeric_limits<double>::infinity() : p.get<double>();
    s.scale = doc.at("scale").get<double>();
    s.coords = coords_from_json(doc.at("coords"));
    if (doc.contains("t")) s.t = doc.at("t").get<int>();
    if (s.type == "embed-l2") {
      s.seed = doc.at("seed").get<std::uint64_t>();
      s.y_points = doc.at("y").get<std::vector<Index>>();
      s.hang = hang_from_json(doc.at("hang"), s.n);
    }
    if (s.coords.rows() != s.n) throw std::runtime_error("coordinate row count does not match n");
  } else {
    throw std::runtime_error("unknown structure type '" + s.type + "'");
  }
  return s;
}

}  // namespace

const std::vector<std::string>& structure_types() {
  static const std::vector<std::string> types = {"spanner",    "spanner-k", "oracle",     "labeling",
                                                 "oracle-k",   "labeling-k", "embed-linf", "embed-l2"};
  return types;
}

StructureFile from_spanner(const TerminalSpanner& spanner) {
  StructureFile s;
  s.type = spanner.mode == TerminalMode::kDoublingX ? "spanner" : "spanner-k";
  s.eps = spanner.eps;
  s.n = spanner.n;
  s.terminals = spanner.terminals;
  s.spanner = spanner;
  return s;
}

StructureFile from_labeling(const TerminalLabeling& labeling, bool oracle) {
  StructureFile s;
  s.type = oracle ? "oracle" : "labeling";
  s.eps = labeling.eps();
  s.n = labeling.n();
  s.terminals = labeling.terminals();
  s.labeling = labeling;
  return s;
}

StructureFile from_labeling(const KDoublingLabeling& labeling, bool oracle) {
  StructureFile s;
  s.type = oracle ? "oracle-k" : "labeling-k";
  s.eps = labeling.eps();
  s.n = labeling.n();
  s.terminals = labeling.terminals();
  s.k_labeling = labeling;
  return s;
}

void save_structure(const std::filesystem::path& path, const StructureFile& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (is_spanner_type(s.type)) {
    if (!s.spanner) throw std::runtime_error("spanner structure without edges");
    write_spanner(out, s);
  } else {
    out << to_document(s).dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

StructureFile load_structure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const int first = (in >> std::ws).peek();
  if (first == '#') return read_spanner(in);
  try {
    return from_document(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed structure file " + path.string() + ": " + e.what());
  }
}

}  // namespace tms::io
