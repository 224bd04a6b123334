#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "critlab/perturbation.hpp"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>

using namespace critlab;

namespace {

DiscreteOperator path_op(Index n, double c_val = 0.0) {
  Graph g = path_graph(n);
  return DiscreteOperator::build(g, {}, {}, Vector::Constant(g.size(), c_val));
}

// brute-force 3G scan over all (x, y, z) triples
double three_g_oracle(const GreenMatrix& G, const Vector& V, const Vector& m) {
  double best = 0.0;
  for (Index x = 0; x < G.dim(); ++x)
    for (Index y = 0; y < G.dim(); ++y) {
      double acc = 0.0;
      for (Index z = 0; z < G.dim(); ++z) {
        Index hz = G.domain[static_cast<size_t>(z)];
        acc += G.values(x, z) * std::abs(V[hz]) * G.values(z, y) * m[hz];
      }
      best = std::max(best, acc / G.values(x, y));
    }
  return best;
}

}  // namespace

TEST_CASE("3G constant") {
  DiscreteOperator P = path_op(5);
  GreenMatrix G = dirichlet_green(P, P.graph().interior());
  const Vector& m = P.graph().measure();
  SUBCASE("V == 0 gives C0 = 0") {
    CHECK(three_g_constant(G, Vector::Zero(7), m) == 0.0);
  }
  SUBCASE("V == 1 matches the brute-force triple scan") {
    Vector V = Vector::Ones(7);
    double c0 = three_g_constant(G, V, m);
    CHECK(c0 == doctest::Approx(three_g_oracle(G, V, m)).epsilon(1e-13));
    // golden value frozen from the oracle run: 35/6
    CHECK(c0 == doctest::Approx(35.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("point-supported V reduces to the single-term formula") {
    Vector V = Vector::Zero(7);
    V[3] = 1.3;
    double c0 = three_g_constant(G, V, m);
    double best = 0.0;
    for (Index x = 1; x <= 5; ++x)
      for (Index y = 1; y <= 5; ++y)
        best = std::max(best, G.at(x, 3) * 1.3 * m[3] * G.at(3, y) / G.at(x, y));
    CHECK(c0 == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("semismall profile") {
  Graph host = path_graph(61);
  DiscreteOperator P =
      DiscreteOperator::build(host, {}, {}, Vector::Constant(host.size(), 0.1));
  Exhaustion ex = radial_exhaustion(host, {8, 14, 20, 26, 30});
  GreenMatrix G = dirichlet_green(P, host.interior());
  const Vector& m = host.measure();
  Index anchor = 31;  // center
  SUBCASE("compactly supported V vanishes beyond its support") {
    Vector V = Vector::Zero(host.size());
    for (Index x : ex.levels[0]) V[x] = 1.0;
    auto s = semismall_profile(G, V, m, host, ex, anchor);
    for (size_t k = 1; k < s.size(); ++k) CHECK(s[k] == 0.0);
  }
  SUBCASE("V == 1 on the short-range host decays") {
    auto s = semismall_profile(G, Vector::Ones(host.size()), m, host, ex, anchor);
    for (size_t k = 1; k + 1 < s.size(); ++k) CHECK(s[k] <= s[k - 1] * (1 + 1e-9));
    CHECK(s[s.size() - 2] < 0.5 * s[0]);
  }
  SUBCASE("boundary anchor is rejected") {
    CHECK_THROWS_AS(
        semismall_profile(G, Vector::Ones(host.size()), m, host, ex, 0),
        std::invalid_argument);
  }
}

TEST_CASE("quasimetric constant") {
  SUBCASE("two interior nodes, exhaustive by hand") {
    DiscreteOperator P = path_op(2);
    GreenMatrix G = dirichlet_green(P, {1, 2});
    double by_hand = 0.0;
    for (Index x = 0; x < 2; ++x)
      for (Index y = 0; y < 2; ++y)
        for (Index z = 0; z < 2; ++z) {
          double d_xy = 1.0 / G.values(x, y);
          by_hand = std::max(
              by_hand, d_xy / (1.0 / G.values(x, z) + 1.0 / G.values(z, y)));
        }
    CHECK(quasimetric_constant(G) == doctest::Approx(by_hand).epsilon(1e-14));
  }
  SUBCASE("path of five: golden value from the exhaustive scan") {
    DiscreteOperator P = path_op(5);
    GreenMatrix G = dirichlet_green(P, P.graph().interior());
    double C = quasimetric_constant(G);
    CHECK(std::isfinite(C));
    CHECK(C == doctest::Approx(1.5).epsilon(1e-12));  // frozen from the scan
  }
  SUBCASE("nonsymmetric kernels are rejected with guidance") {
    Graph g = Graph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}}, Vector::Ones(3), {0});
    DiscreteOperator P = DiscreteOperator::build(g, {{1, 2, 0.6}}, {}, Vector::Zero(3));
    GreenMatrix G = dirichlet_green(P, {1, 2});
    CHECK_THROWS_WITH_AS(quasimetric_constant(G), doctest::Contains("symmetrize"),
                         std::invalid_argument);
  }
}

TEST_CASE("iterated kernels") {
  DiscreteOperator P = path_op(3);
  GreenMatrix G = dirichlet_green(P, {1, 2, 3});
  const Vector& m = P.graph().measure();
  SUBCASE("V == 0 collapses to zero tables") {
    auto ks = iterated_kernels(G, Vector::Zero(5), m, 3);
    for (size_t i = 1; i < ks.size(); ++i) CHECK(ks[i].cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("point-supported V gives a rank-one first iterate") {
    Vector V = Vector::Zero(5);
    V[2] = 0.7;
    auto ks = iterated_kernels(G, V, m, 1);
    Index z = G.local(2);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(ks[1](i, j) ==
              doctest::Approx(G.values(i, z) * 0.7 * m[2] * G.values(z, j)));
  }
  SUBCASE("matches the matrix-power oracle") {
    Vector V = Vector::Ones(5);
    auto ks = iterated_kernels(G, V, m, 5);
    Matrix kernel = G.values * m.segment(1, 3).asDiagonal();  // V == 1
    Matrix power = G.values;
    for (int i = 1; i <= 5; ++i) {
      power = (kernel * power).eval();
      CHECK((ks[static_cast<size_t>(i)] - power).cwiseAbs().maxCoeff() <=
            1e-12 * power.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("neumann series") {
  std::mt19937_64 rng(101);
  SUBCASE("eps = 0 returns G exactly") {
    DiscreteOperator P = path_op(4);
    GreenMatrix G = dirichlet_green(P, P.graph().interior());
    NeumannResult nr = neumann_series(G, Vector::Ones(6), P.graph().measure(), 0.0);
    CHECK(nr.converged);
    CHECK((nr.H - G.values).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("random instances match the dense inverse at eps = 1/(4 C0)") {
    for (int trial = 0; trial < 10; ++trial) {
      DiscreteOperator P = testing::random_operator(rng, 10, trial % 2, 0.05);
      const Graph& g = P.graph();
      GreenMatrix G = dirichlet_green(P, g.interior());
      Vector V = testing::random_node_function(rng, g.size(), -1.0, 1.0);
      double C0 = three_g_constant(G, V, g.measure());
      double eps = 1.0 / (4.0 * C0);
      NeumannResult nr = neumann_series(G, V, g.measure(), eps);
      REQUIRE(nr.converged);
      // independent oracle: dense inverse of the perturbed interior matrix
      Matrix K = P.weighted_interior(g.interior());
      Vector vm(G.dim());
      for (Index k = 0; k < G.dim(); ++k) {
        Index x = G.domain[static_cast<size_t>(k)];
        vm[k] = V[x] * g.measure(x);
      }
      Matrix direct = (K - eps * Matrix(vm.asDiagonal())).inverse();
      CHECK((nr.H - direct).cwiseAbs().maxCoeff() / G.values.maxCoeff() <= 1e-10);
      CHECK(resolvent_residual(G, nr.H, V, g.measure(), eps) <= 1e-9);
      CHECK(resolvent_residual(G, direct, V, g.measure(), eps) <= 1e-12);
    }
  }
  SUBCASE("divergence beyond the spectral radius is flagged") {
    DiscreteOperator P = path_op(5);
    GreenMatrix G = dirichlet_green(P, P.graph().interior());
    Vector V = Vector::Ones(7);
    Matrix kernel = G.values * P.graph().measure().segment(1, 5).asDiagonal();
    double rho = kernel.eigenvalues().cwiseAbs().maxCoeff();  // eigen-oracle
    NeumannResult nr = neumann_series(G, V, P.graph().measure(), 1.05 / rho);
    CHECK_FALSE(nr.converged);
    CHECK(nr.spectral_radius == doctest::Approx(rho).epsilon(1e-10));
  }
}

TEST_CASE("sandwich bounds") {
  DiscreteOperator P = path_op(5);
  const Graph& g = P.graph();
  GreenMatrix G = dirichlet_green(P, g.interior());
  Vector V = Vector::Ones(7);
  double C0 = three_g_constant(G, V, g.measure());
  SUBCASE("eps = 0 collapses both sides onto G") {
    SandwichReport r = sandwich_check(G, G.values, 0.0, C0);
    CHECK(r.lower_ok);
    CHECK(r.upper_ok);
    CHECK(r.lower_factor == doctest::Approx(1.0));
    CHECK(r.upper_factor == doctest::Approx(1.0));
  }
  auto perturbed = [&](double eps) {
    DiscreteOperator pp = DiscreteOperator::build(g, {}, {}, P.potential() - eps * V);
    return dirichlet_green(pp, g.interior());
  };
  SUBCASE("holds at eps = 1/(4 C0)") {
    double eps = 1.0 / (4.0 * C0);
    SandwichReport r = sandwich_check(G, perturbed(eps).values, eps, C0);
    CHECK(r.lower_ok);
    CHECK(r.upper_ok);
  }
  SUBCASE("holds just below 1/(2 C0) with a small positive lower factor") {
    double eps = 0.499 / C0;
    SandwichReport r = sandwich_check(G, perturbed(eps).values, eps, C0);
    CHECK(r.lower_factor > 0.0);
    CHECK(r.lower_factor < 0.01);
    CHECK(r.lower_ok);
    CHECK(r.upper_ok);
  }
}

TEST_CASE("green monotone in eps: property over 100 random subcritical instances") {
  std::mt19937_64 rng(211);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    DiscreteOperator P = testing::random_operator(rng, 8, trial % 3 == 0, 0.1);
    Vector W = testing::random_node_function(rng, P.graph().size(), 0.0, 1.0);
    GreenMatrix G = dirichlet_green(P, P.graph().interior());
    Vector wm(G.dim());
    for (Index k = 0; k < G.dim(); ++k) {
      Index x = G.domain[static_cast<size_t>(k)];
      wm[k] = W[x] * P.graph().measure(x);
    }
    Matrix kernel = G.values * wm.asDiagonal();
    double lam0 = 1.0 / kernel.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(monotone_in_eps(P, P.graph().interior(), W, 0.1 * lam0, 0.25 * lam0));
    ++checked;
  }
  CHECK(checked == 100);
  // equal eps values give equality
  DiscreteOperator P = path_op(4, 0.2);
  CHECK(monotone_in_eps(P, P.graph().interior(), Vector::Ones(6), 0.05, 0.05));
}

TEST_CASE("equivalence interval") {
  DiscreteOperator P = path_op(9, 0.2);
  const IndexList& I = P.graph().interior();
  Vector W = Vector::Ones(11);
  auto pts = equivalence_interval(P, I, W, {0.0, 0.1, 0.25, 10.0});
  CHECK(pts[0].ratio == 1.0);  // identical solves, bitwise
  CHECK(pts[1].ratio > 1.0);
  CHECK(pts[2].ratio > pts[1].ratio);
  CHECK(pts[3].verdict == "skipped: not subcritical at this lambda");
}

TEST_CASE("schur bound") {
  DiscreteOperator P = path_op(5);
  const Graph& g = P.graph();
  GreenMatrix G = dirichlet_green(P, g.interior());
  SUBCASE("W == 0 certifies the zero operator") {
    SchurReport r = schur_bound(G, Vector::Zero(7), g.measure(), Vector::Ones(7),
                                0.1, 0.1, 1.0);
    CHECK(r.certified);
    CHECK(r.bound == 0.0);
  }
  SUBCASE("ground-state test function certifies a bound above the true norm") {
    Vector W = Vector::Ones(7);
    Matrix K = P.weighted_interior(g.interior());
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    double lam0 = es.eigenvalues()[0];
    Vector u = Vector::Zero(7);
    for (Index k = 0; k < 5; ++k) u[k + 1] = std::abs(es.eigenvectors()(k, 0));
    SchurReport r = schur_bound(G, W, g.measure(), u, 0.5 * lam0, 0.1 * lam0, lam0);
    CHECK(r.certified);
    CHECK(r.bound >= r.true_norm - 1e-10);
    CHECK(r.bound < 1.0);  // E0 + delta < lambda0
  }
}

TEST_CASE("quasimetric 3G consistency on random symmetric instances") {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 10; ++trial) {
    DiscreteOperator P = testing::random_operator(rng, 9, false, 0.05);
    GreenMatrix G = dirichlet_green(P, P.graph().interior());
    QuasimetricCheck chk = quasimetric_3g_check(G);
    CHECK(chk.ok);
    CHECK(chk.worst_ratio <= 1.0 + 1e-12);
    CHECK(chk.worst_ratio == doctest::Approx(1.0));  // the max is attained
  }
}

TEST_CASE("monte-carlo triple scan reports its coverage") {
  DiscreteOperator P = path_op(12, 0.1);
  GreenMatrix G = dirichlet_green(P, P.graph().interior());
  TripleScanOptions opts;
  opts.exhaustive_cap = 8;  // force sampling
  opts.samples = 500;
  double c_mc = quasimetric_constant(G, &opts);
  CHECK(opts.coverage < 1.0);
  CHECK(opts.coverage > 0.0);
  double c_full = quasimetric_constant(G);
  CHECK(c_mc <= c_full + 1e-12);  // sampling can only undershoot the max
  CHECK(c_mc > 0.5 * c_full);
}
