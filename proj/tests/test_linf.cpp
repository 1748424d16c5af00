#include "oracles.hpp"

#include "tms/audit.hpp"
#include "tms/generators.hpp"
#include "tms/l2.hpp"
#include "tms/linf.hpp"

#include <doctest.h>

#include <limits>

using namespace tms;

namespace {

// Floyd-Warshall on the complete graph with terminal edges below the
// threshold set to zero.
MatrixXd brute_contracted(const MatrixXd& d, const std::vector<Index>& K, double threshold) {
  MatrixXd w = d;
  for (Index v : K)
    for (Index x = 0; x < d.rows(); ++x)
      if (d(x, v) < threshold) w(x, v) = w(v, x) = 0;
  return oracle::floyd(w);
}

double linf_norm(const MatrixXd& c, Index a, Index b) { return (c.row(a) - c.row(b)).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("linf-embedding") {

TEST_CASE("contracted metric extremes") {
  const auto m = oracle::line({0, 1, 3, 6});
  const MatrixXd d = m.matrix();
  const std::vector<Index> K{0, 3};
  CHECK(contracted_metric(d, K, 0.5).isApprox(d));
  const MatrixXd all = contracted_metric(d, K, 100);
  for (Index x = 0; x < 4; ++x)
    for (Index v : K) CHECK(all(x, v) == 0);
}

TEST_CASE("contracted metric matches Floyd-Warshall") {
  const auto path = oracle::line({0, 1, 2, 3});
  const std::vector<Index> K{0, 2};
  for (double thr : {0.5, 1.0, 1.5, 2.5, 4.0}) {
    CAPTURE(thr);
    const MatrixXd got = contracted_metric(path.matrix(), K, thr);
    const MatrixXd want = brute_contracted(path.matrix(), K, thr);
    for (Index a = 0; a < 4; ++a)
      for (Index b = 0; b < 4; ++b) CHECK(oracle::rel_close(got(a, b), want(a, b)));
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GenParams p;
    p.kind = "completion";
    p.n = 60;
    p.k = 9;
    p.seed = seed;
    const auto g = gen_instance(p);
    const MatrixXd d = g.instance.metric().matrix();
    for (double thr : {0.3, 1.0, 2.0}) {
      const MatrixXd got = contracted_metric(d, g.instance.terminals(), thr);
      const MatrixXd want = brute_contracted(d, g.instance.terminals(), thr);
      CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-9 * d.maxCoeff());
    }
  }
}

TEST_CASE("contracted family levels") {
  GenParams p;
  p.kind = "completion";
  p.n = 50;
  p.k = 9;
  const auto g = gen_instance(p);
  const auto fam = build_contracted_metrics(g.instance);
  CHECK(fam.base.minCoeff() == 0);
  CHECK(fam.k_eff == 9);
  REQUIRE(fam.levels.size() == fam.thresholds.size());
  const double L = std::ceil(std::log2(fam.base.maxCoeff()) - 1e-12);
  CHECK(static_cast<double>(fam.levels.size()) == L + 1);
  for (std::size_t i = 0; i < fam.levels.size(); ++i) {
    CHECK(fam.thresholds[i] == doctest::Approx(std::ldexp(1.0, static_cast<int>(i) - 1) * 0.1 / 9));
    CHECK((fam.levels[i].array() <= fam.base.array() + 1e-9).all());
  }
}

TEST_CASE("separated families") {
  MatrixXd di = MatrixXd::Constant(4, 4, 4.0);
  di.diagonal().setZero();
  const std::vector<Index> net{0, 1, 2, 3};
  // Mutual distance 2^i = 4 with separation 5 * 4: singletons.
  const auto fams = build_separated_families(net, di, 20);
  CHECK(fams.size() == 4);
  for (const auto& f : fams) CHECK(f.size() == 1);
  // Already separated: one family.
  CHECK(build_separated_families(net, di, 4).size() == 1);
  const std::vector<Index> one{2};
  CHECK(build_separated_families(one, di, 20).size() == 1);
}

TEST_CASE("simplex terminals embed within bounds") {
  MatrixXd d = MatrixXd::Ones(4, 4);
  d.diagonal().setZero();
  for (double eps : {0.1, 0.2}) {
    const TerminalInstance inst(FiniteMetric::from_matrix(d), {0, 1, 2, 3}, eps);
    const auto emb = embed_linf(inst);
    CHECK(emb.dim == linf_dimension(emb.t, 4, eps));
    for (Index a = 0; a < 4; ++a) {
      CHECK(linf_norm(emb.coords, a, a) == 0);
      for (Index b = a + 1; b < 4; ++b) {
        const double r = linf_norm(emb.coords, a, b) / (emb.scale * d(a, b));
        CHECK(r >= 1 - 3 * eps - 1e-9);
        CHECK(r <= 1 + eps + 1e-9);
      }
    }
  }
}

TEST_CASE("completion instance with a grid of terminals") {
  GenParams p;
  p.kind = "completion";
  p.n = 200;
  p.k = 16;
  p.eps = 0.1;
  const auto g = gen_instance(p);
  const auto& inst = g.instance;
  const auto fam = build_contracted_metrics(inst);
  const auto emb = embed_linf(inst, fam);
  CHECK(emb.dim == static_cast<int>(std::ceil(2.0 * emb.t * std::log2(2.0 * 16 / 0.1) - 1e-12)));
  CHECK(emb.coords.cols() == emb.dim);
  const auto rep = audit_embedding(emb.coords, std::numeric_limits<double>::infinity(), emb.scale, inst, 0.7, 1.1,
                                   false);
  CHECK(rep.pass);
  const auto props = audit_linf_properties(emb, fam, inst, 20000, 3);
  CHECK(props.pass());
  // g columns are truncated distances.
  for (std::size_t i = 0; i < emb.levels.size(); ++i)
    for (int j = 0; j < emb.t; ++j) {
      const Index col = static_cast<Index>(i) * emb.t + j;
      CHECK(emb.g.col(col).minCoeff() >= 0);
      CHECK(emb.g.col(col).maxCoeff() <= std::ldexp(1.0, static_cast<int>(i) + 1) + 1e-9);
    }
}

TEST_CASE("small k is padded to four") {
  const TerminalInstance inst(oracle::line({0, 1, 2, 7}), {0, 3}, 0.2);
  const auto emb = embed_linf(inst);
  CHECK(emb.k_eff == 4);
  CHECK(emb.dim == linf_dimension(emb.t, 4, 0.2));
}

TEST_CASE("random orthogonal projection") {
  const MatrixXd wide = random_orthogonal_projection(5, 8, 1);  // isometry
  CHECK(wide.rows() == 8);
  CHECK(wide.cols() == 5);
  CHECK((wide.transpose() * wide).isApprox(MatrixXd::Identity(5, 5), 1e-12));
  const MatrixXd thin = random_orthogonal_projection(20, 4, 1);
  CHECK((thin * thin.transpose()).isApprox(MatrixXd::Identity(4, 4) * 5.0, 1e-12));
  CHECK(random_orthogonal_projection(20, 4, 1) == thin);
  CHECK(random_orthogonal_projection(20, 4, 2) != thin);
  CHECK(jl_dimension(25, 0.2) == 644);
}

TEST_CASE("l2 terminal embedding is exact on Y when the target is wide") {
  GenParams p;
  p.kind = "uniform-cube";
  p.dim = 5;
  p.n = 150;
  p.k = 10;
  p.eps = 0.2;
  const auto g = gen_instance(p);
  const auto& inst = g.instance;
  const auto emb = embed_l2_terminal(inst, 8, 3);
  CHECK(emb.coords.cols() == 9);
  for (Index a : emb.y_points)
    for (Index b : emb.y_points)
      CHECK(oracle::rel_close((emb.coords.row(a) - emb.coords.row(b)).norm(), inst.d(a, b), 1e-9));
  const auto rep = audit_embedding(emb.coords, 2, 1, inst, 0, 1 + 12 * 0.2, true);
  CHECK(rep.pass);
}

TEST_CASE("l2 embedding rejects non-Euclidean input") {
  MatrixXd d = MatrixXd::Ones(3, 3);
  d.diagonal().setZero();
  const TerminalInstance inst(FiniteMetric::from_matrix(d), {0, 1}, 0.1);
  CHECK_THROWS_AS(embed_l2_terminal(inst, 4, 1), std::invalid_argument);
}

}  // TEST_SUITE
