#include "tms/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace tms {
namespace {

using nlohmann::json;

// JSON has no infinity; unbounded ratios are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const InstanceSummary& s) {
  return {{"n", s.n},
          {"k", s.k},
          {"eps", s.eps},
          {"lambda_x", s.lambda_x},
          {"lambda_k", s.lambda_k},
          {"lambda_exhaustive", s.lambda_exhaustive},
          {"delta", num(s.delta)},
          {"diameter_k", num(s.diameter_k)},
          {"aspect_k", num(s.aspect_k)}};
}

json to_json(const PairStretch& p) {
  return {{"x", p.x}, {"v", p.v}, {"dist", num(p.dist)}, {"estimate", num(p.estimate)}, {"ratio", num(p.ratio)}};
}

json to_json(const StretchReport& r) {
  json sizes = json::object();
  for (const auto& [k, v] : r.sizes) sizes[k] = num(v);
  json worst = json::array();
  for (const auto& p : r.worst) worst.push_back(to_json(p));
  return {{"structure", r.structure},
          {"mode", r.mode},
          {"instance", to_json(r.instance)},
          {"sizes", sizes},
          {"pairs", r.pairs},
          {"max_ratio", num(r.max_ratio)},
          {"min_ratio", num(r.min_ratio)},
          {"mean_ratio", num(r.mean_ratio)},
          {"p50", num(r.p50)},
          {"p90", num(r.p90)},
          {"p99", num(r.p99)},
          {"distortion", num(r.distortion)},
          {"certified", r.certified},
          {"lower_bound", r.lower_bound},
          {"distortion_mode", r.distortion_mode},
          {"pass", r.pass},
          {"worst", worst},
          {"violation", r.violation ? to_json(*r.violation) : json(nullptr)}};
}

json to_json(const LinfPropertyReport& r) {
  return {{"samples", r.samples},
          {"lipschitz_violations", r.lipschitz_violations},
          {"truncation_violations", r.truncation_violations},
          {"vanishing_checked", r.vanishing_checked},
          {"vanishing_violations", r.vanishing_violations},
          {"sandwich_violations", r.sandwich_violations},
          {"witness_pairs", r.witness_pairs},
          {"witness_missing", r.witness_missing},
          {"pass", r.pass()}};
}

json to_json(const LowerBoundReport& r) {
  return {{"structure", "lower-bound"},
          {"n", r.n},
          {"k", r.k},
          {"eps", r.eps},
          {"lambda", r.lambda},
          {"sphere_dim", r.sphere_dim},
          {"full_net_size", r.full_net_size},
          {"min_terminal_separation", num(r.min_terminal_separation)},
          {"triangle_violations", r.triangle_violations},
          {"cross_pairs", r.cross_pairs},
          {"forced_pairs", r.forced_pairs},
          {"min_detour_ratio", num(r.min_detour_ratio)},
          {"required_edges", r.required_edges},
          {"implied_c", num(r.implied_c)},
          {"spanner_cross_edges", r.spanner_cross_edges},
          {"spanner_base_edges", r.spanner_base_edges},
          {"spanner_has_all_cross_edges", r.spanner_has_all_cross_edges},
          {"spanner_audit", to_json(r.spanner_audit)},
          {"pass", r.pass}};
}

void stamp(json& report) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  report["timestamp"] = os.str();
}

std::string format_table(const StretchReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  auto row = [&](const std::string& key, const auto& value) { os << "  " << std::left << std::setw(22) << key << value << '\n'; };
  os << r.structure << " (" << r.mode << ")\n";
  row("n", r.instance.n);
  row("k", r.instance.k);
  row("eps", r.instance.eps);
  row("lambda(X) / lambda(K)", std::to_string(r.instance.lambda_x) + " / " + std::to_string(r.instance.lambda_k));
  for (const auto& [k, v] : r.sizes) row(k, v);
  row("pairs", r.pairs);
  row("max ratio", r.max_ratio);
  row("min ratio", r.min_ratio);
  row("mean ratio", r.mean_ratio);
  row("p50 / p90 / p99", std::to_string(r.p50) + " / " + std::to_string(r.p90) + " / " + std::to_string(r.p99));
  row("distortion", r.distortion);
  row(r.distortion_mode ? "certified distortion" : "certified bound", r.certified);
  if (r.violation)
    row("first violation", "x=" + std::to_string(r.violation->x) + " v=" + std::to_string(r.violation->v) +
                               " ratio=" + std::to_string(r.violation->ratio));
  row("result", r.pass ? "PASS" : "FAIL");
  return os.str();
}

std::string format_table(const LowerBoundReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  auto row = [&](const std::string& key, const auto& value) { os << "  " << std::left << std::setw(28) << key << value << '\n'; };
  os << "lower-bound instance\n";
  row("n / k", std::to_string(r.n) + " / " + std::to_string(r.k));
  row("eps", r.eps);
  row("lambda / sphere dim", std::to_string(r.lambda) + " / " + std::to_string(r.sphere_dim));
  row("full net size", r.full_net_size);
  row("implied c", r.implied_c);
  row("min terminal separation", r.min_terminal_separation);
  row("triangle violations", r.triangle_violations);
  row("forced pairs", std::to_string(r.forced_pairs) + " of " + std::to_string(r.cross_pairs));
  row("min detour ratio", r.min_detour_ratio);
  row("required edges", r.required_edges);
  row("spanner cross edges", r.spanner_cross_edges);
  row("spanner max stretch", r.spanner_audit.max_ratio);
  row("result", r.pass ? "PASS" : "FAIL");
  return os.str();
}

}  // namespace tms
