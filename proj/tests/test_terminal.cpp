#include "oracles.hpp"

#include "tms/audit.hpp"
#include "tms/generators.hpp"
#include "tms/terminal.hpp"

#include <doctest.h>

#include <limits>

using namespace tms;

namespace {

TerminalInstance collinear(double eps) { return TerminalInstance(oracle::line({0, 1, 100}), {0, 2}, eps); }

// Worst K x X ratio of a spanner, by Floyd-Warshall.
double floyd_terminal_stretch(const TerminalSpanner& sp, const TerminalInstance& inst) {
  const auto edges = sp.edges();
  const MatrixXd g = oracle::graph_apsp(inst.n(), edges);
  double worst = 1;
  for (Index v : inst.terminals())
    for (Index x = 0; x < inst.n(); ++x)
      if (x != v) worst = std::max(worst, g(x, v) / inst.d(x, v));
  return worst;
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

}  // namespace

TEST_SUITE("terminal-structures") {

TEST_CASE("collinear doubling-X spanner") {
  const auto inst = collinear(0.1);
  const auto en = enrich(inst);
  CHECK(en.enriched.points == std::vector<Index>{0, 2});
  CHECK(en.hang[1].target == 0);
  CHECK(en.hang[1].reason == HangReason::kNearestTerminal);
  CHECK_FALSE(en.hang.hanged(0));

  const auto sp = build_terminal_spanner(inst, en);
  REQUIRE(sp.base.edges.size() == 1);
  CHECK(sp.base.edges[0] == Edge{0, 2, 100.0});
  REQUIRE(sp.extension.size() == 1);
  CHECK(sp.extension[0] == Edge{1, 0, 1.0});
  CHECK(sp.certified_stretch() == doctest::Approx(2.2));

  const auto rep = audit_stretch(sp, inst);
  CHECK(rep.max_ratio == doctest::Approx(101.0 / 99.0));
  CHECK(rep.pass);
  CHECK(floyd_terminal_stretch(sp, inst) == doctest::Approx(101.0 / 99.0));
}

TEST_CASE("collinear with eps 0.05 keeps point 1 in Y") {
  const auto inst = collinear(0.05);
  const auto en = enrich(inst);
  CHECK(en.enriched.points == std::vector<Index>{0, 1, 2});
  CHECK(en.hang.hanged_count() == 0);
  const auto rep = audit_stretch(build_terminal_spanner(inst, en), inst);
  CHECK(rep.max_ratio <= 1.05 + 1e-9);
  CHECK(rep.pass);
}

TEST_CASE("collinear labeling queries") {
  const auto inst = collinear(0.1);
  const auto lab = build_terminal_labeling(inst);
  CHECK(lab.query(1, 0) == doctest::Approx(1));
  CHECK(lab.query(1, 2) == doctest::Approx(101));
  CHECK(lab.query(0, 2) == doctest::Approx(100));
  CHECK(lab.storage(1) == 1);
  CHECK_THROWS_AS(lab.query(0, 1), std::invalid_argument);
}

TEST_CASE("X = K reduces to the base spanner") {
  const TerminalInstance inst(oracle::line({0, 1, 3, 7, 15, 31}), {0, 1, 2, 3, 4, 5}, 0.05);
  const auto sp = build_terminal_spanner(inst);
  CHECK(sp.extension.empty());
  CHECK(floyd_terminal_stretch(sp, inst) <= 1.05 + 1e-9);
}

TEST_CASE("single terminal: every point hangs on it") {
  const TerminalInstance inst(oracle::line({0, 1, 2, 5}), {2}, 0.1);
  const auto en = enrich(inst);
  CHECK(en.enriched.points == std::vector<Index>{2});
  for (Index x : {0, 1, 3}) CHECK(en.hang[x].target == 2);
  const auto sp = build_terminal_spanner(inst, en);
  CHECK(sp.extension.size() == 3);
  CHECK(audit_stretch(sp, inst).max_ratio == doctest::Approx(1));
}

TEST_CASE("final marked clusters hang on their centre") {
  // Search seeded instances for a point hung on a non-terminal centre.
  bool found = false;
  for (std::uint64_t seed = 1; seed <= 20 && !found; ++seed) {
    const auto g = make("gaussian-clusters", 200, 5, 0.2, seed);
    const auto en = enrich(g.instance);
    for (Index x = 0; x < g.instance.n(); ++x) {
      if (!en.hang.hanged(x) || en.hang[x].reason != HangReason::kFinalMarkedCenter) continue;
      const Index y = en.hang[x].target;
      CHECK(en.enriched.contains(y));
      const int lvl = en.partition->final_level[static_cast<std::size_t>(x)];
      REQUIRE(lvl >= 0);
      const auto& c = en.partition->levels[static_cast<std::size_t>(lvl)]
                          .clusters[static_cast<std::size_t>(en.partition->final_cluster[static_cast<std::size_t>(x)])];
      CHECK(c.center == y);
      CHECK(c.final);
      if (y != g.instance.nearest_terminal(x)) found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("spanner edge count = base edges + hanged points") {
  for (double eps : {0.05, 0.1, 0.2}) {
    const auto g = make("uniform-square", 300, 10, eps, 3);
    const auto en = enrich(g.instance);
    const auto sp = build_terminal_spanner(g.instance, en);
    const auto y = static_cast<std::size_t>(en.enriched.points.size());
    CHECK(sp.edge_count() == sp.base.edges.size() + (300 - y));
    CHECK(sp.base.vertices == en.enriched.points);
  }
}

TEST_CASE("doubling-X structures meet 1 + 12 eps against Floyd-Warshall") {
  for (const std::string kind : {"uniform-square", "gaussian-clusters"})
    for (double eps : {0.05, 0.2}) {
      const auto g = make(kind, 150, 10, eps, 5);
      const auto& inst = g.instance;
      const auto en = enrich(inst);
      const auto sp = build_terminal_spanner(inst, en);
      CHECK(floyd_terminal_stretch(sp, inst) <= 1 + 12 * eps + 1e-9);
      const auto lab = build_terminal_labeling(inst, en);
      for (Index v : inst.terminals())
        for (Index x = 0; x < inst.n(); ++x) {
          if (x == v) continue;
          const double r = lab.query(x, v) / inst.d(x, v);
          CHECK(r >= 1 - 1e-9);
          CHECK(r <= 1 + 12 * eps + 1e-9);
        }
    }
}

TEST_CASE("k-doubling reach on the collinear instance") {
  const auto inst = collinear(0.1);
  CHECK(terminal_reach(inst, 1) == std::vector<Index>{0});
  const auto sp = build_k_doubling_spanner(inst);
  CHECK(sp.extension.size() == 1);
  CHECK(sp.reach_sizes[1] == 1);
  CHECK(sp.certified_stretch() == doctest::Approx(1.3));
}

TEST_CASE("k-doubling with one terminal is a star") {
  const TerminalInstance inst(oracle::line({0, 1, 2, 5}), {1}, 0.1);
  const auto sp = build_k_doubling_spanner(inst);
  CHECK(sp.base.edges.empty());
  CHECK(sp.extension.size() == 3);
  for (const Edge& e : sp.extension) CHECK(e.v == 1);
  CHECK(audit_stretch(sp, inst).max_ratio == doctest::Approx(1));
}

TEST_CASE("reach sets are separated and start with the nearest terminal") {
  const auto g = make("completion", 120, 16, 0.1, 2);
  const auto& inst = g.instance;
  for (Index x = 0; x < inst.n(); ++x) {
    if (inst.is_terminal(x)) continue;
    const auto reach = terminal_reach(inst, x);
    REQUIRE(!reach.empty());
    CHECK(reach.front() == inst.nearest_terminal(x));
    const double R = inst.distance_to_terminals(x);
    for (std::size_t a = 0; a < reach.size(); ++a) {
      CHECK(approx_le(inst.d(x, reach[a]), 2 * R / 0.1));
      for (std::size_t b = a + 1; b < reach.size(); ++b) CHECK_FALSE(approx_le(inst.d(reach[a], reach[b]), 0.1 * R));
    }
  }
}

TEST_CASE("k-doubling spanner and labeling meet 1 + 3 eps") {
  for (double eps : {0.1, 0.2}) {
    const auto g = make("completion", 150, 16, eps, 8);
    const auto& inst = g.instance;
    const auto sp = build_k_doubling_spanner(inst);
    CHECK(floyd_terminal_stretch(sp, inst) <= 1 + 3 * eps + 1e-9);
    const auto lab = build_k_doubling_labeling(inst);
    for (Index v : inst.terminals())
      for (Index x = 0; x < inst.n(); ++x) {
        if (x == v) continue;
        const double r = lab.query(x, v) / inst.d(x, v);
        CHECK(r >= 1 - 1e-9);
        CHECK(r <= 1 + 3 * eps + 1e-9);
      }
    CHECK_THROWS_AS(lab.query(0, inst.n() - 1), std::invalid_argument);
  }
}

TEST_CASE("lp extension") {
  MatrixXd base(2, 1);
  base << 0, 3;
  const std::vector<Index> y{0, 1};
  HangMap hang;
  hang.entries = {HangEntry{}, HangEntry{}, HangEntry{0, 4, HangReason::kNearestTerminal}};
  const MatrixXd f = extend_embedding(base, y, hang);
  REQUIRE(f.rows() == 3);
  REQUIRE(f.cols() == 2);
  // v = u(x): image distance d(x,u).
  CHECK(lp_distance(f.row(2).transpose(), f.row(0).transpose(), 2) == doctest::Approx(4));
  // p = 2: sqrt(3^2 + 4^2).
  CHECK(lp_distance(f.row(2).transpose(), f.row(1).transpose(), 2) == doctest::Approx(5));
  // p = inf: max rule.
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(lp_distance(f.row(2).transpose(), f.row(1).transpose(), inf) == doctest::Approx(4));
  CHECK(lp_distance(f.row(2).transpose(), f.row(1).transpose(), 1) == doctest::Approx(7));
}

}  // TEST_SUITE
