#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "critlab/hardy.hpp"
#include "critlab/spectral.hpp"
#include "helpers.hpp"

using namespace critlab;

namespace {

DiscreteOperator path_op(Index n, double c_val = 0.0) {
  Graph g = path_graph(n);
  return DiscreteOperator::build(g, {}, {}, Vector::Constant(g.size(), c_val));
}

}  // namespace

TEST_CASE("optimal construction: W = P(sqrt(G_phi u))/sqrt(G_phi u)") {
  Index n = 7;
  DiscreteOperator P = path_op(n);
  const Graph& g = P.graph();
  GreenMatrix G = dirichlet_green(P, g.interior());
  Vector u = Vector::Ones(g.size());  // P 1 = 0 on the free path
  Vector phi = Vector::Zero(g.size());
  phi[4] = 1.0;  // delta mass at the center
  Vector G_phi = Vector::Zero(g.size());
  Vector gp = green_potential(G, phi, g.measure());
  for (Index k = 0; k < G.dim(); ++k) G_phi[G.domain[static_cast<size_t>(k)]] = gp[k];

  HardyConstruction hc = optimal_hardy_weight(P, g.interior(), G_phi, u);
  CHECK(hc.identity_residual <= 1e-10);

  // golden values frozen from the dense oracle run (2-sqrt(2), ..., 2-sqrt(3) center)
  const double golden[7] = {0.585786437626905,    0.06814834742186339,
                            0.028802880693022184, 0.2679491924311228,
                            0.02880288069302254,  0.06814834742186326,
                            0.5857864376269051};
  for (Index i = 1; i <= n; ++i)
    CHECK(hc.weight[i] == doctest::Approx(golden[i - 1]).epsilon(1e-12));
  CHECK(hc.negative_nodes.empty());

  // (P - W) v vanishes identically: recompute through the operator
  Vector Pv = P.apply(hc.witness);
  for (Index x : g.interior())
    CHECK(std::abs(Pv[x] - hc.weight[x] * hc.witness[x]) <= 1e-14);
}

TEST_CASE("optimal construction rejects vanishing witnesses") {
  DiscreteOperator P = path_op(3);
  Vector u = Vector::Ones(5), G_phi = Vector::Zero(5);
  CHECK_THROWS_AS(optimal_hardy_weight(P, P.graph().interior(), G_phi, u),
                  std::invalid_argument);
}

TEST_CASE("alpha roots") {
  SUBCASE("lambda = 1 is the double root 1/2") {
    auto [am, ap] = alpha_roots(1.0);
    CHECK(am == doctest::Approx(0.5));
    CHECK(ap == doctest::Approx(0.5));
  }
  SUBCASE("lambda = 3/4 gives (1/4, 3/4)") {
    auto [am, ap] = alpha_roots(0.75);
    CHECK(am == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ap == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("lambda -> 0+ approaches (0, 1)") {
    auto [am, ap] = alpha_roots(1e-12);
    CHECK(am == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(ap == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("identities hold to machine precision for 1000 random lambdas") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(1e-6, 1.0);
    for (int k = 0; k < 1000; ++k) {
      double lam = unif(rng);
      auto [am, ap] = alpha_roots(lam);
      CHECK(std::abs(am + ap - 1.0) <= 1e-15);
      CHECK(std::abs(4.0 * am * (1.0 - am) - lam) <= 1e-14);
      CHECK(std::abs(4.0 * ap * (1.0 - ap) - lam) <= 1e-14);
    }
  }
  SUBCASE("out-of-range lambda is rejected") {
    CHECK_THROWS_AS(alpha_roots(0.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_roots(1.5), std::invalid_argument);
    CHECK_THROWS_AS(alpha_roots(-0.3), std::invalid_argument);
  }
}

TEST_CASE("supersolution pair") {
  DiscreteOperator P = path_op(9, 0.1);
  const Graph& g = P.graph();
  GreenMatrix G = dirichlet_green(P, g.interior());
  Vector phi = Vector::Zero(g.size());
  phi[5] = 1.0;
  Vector G_phi = Vector::Zero(g.size());
  Vector gp = green_potential(G, phi, g.measure());
  for (Index k = 0; k < G.dim(); ++k) G_phi[G.domain[static_cast<size_t>(k)]] = gp[k];
  Vector u = P.harmonic_extension(Vector::Ones(2));

  SUBCASE("lambda = 1 collapses onto the optimal witness") {
    auto [hm, hp] = supersolution_pair(u, G_phi, 1.0);
    for (Index x : g.interior()) {
      double v = std::sqrt(u[x] * G_phi[x]);
      CHECK(hm[x] == doctest::Approx(v).epsilon(1e-14));
      CHECK(hp[x] == doctest::Approx(v).epsilon(1e-14));
    }
  }
  SUBCASE("h_+/h_- = (G_phi/u)^(a_+ - a_-) decays outward") {
    auto [hm, hp] = supersolution_pair(u, G_phi, 0.75);
    double near = hp[5] / hm[5];
    double far = hp[9] / hm[9];
    CHECK(far < near);
    // exact power-law identity
    auto [am, ap] = alpha_roots(0.75);
    for (Index x : g.interior())
      CHECK(hp[x] / hm[x] ==
            doctest::Approx(std::pow(G_phi[x] / u[x], ap - am)).epsilon(1e-12));
  }
  SUBCASE("nonpositive inputs are rejected") {
    Vector bad = u;
    bad[3] = -1.0;
    CHECK_THROWS_AS(supersolution_pair(bad, G_phi, 0.5), std::invalid_argument);
  }
}

TEST_CASE("critical hardy weight W_mu") {
  DiscreteOperator P = path_op(5);
  const Graph& g = P.graph();
  GreenMatrix G = dirichlet_green(P, g.interior());
  SUBCASE("delta mass: W_mu concentrates as 1/G(y0,y0)") {
    Vector mu = Vector::Zero(7);
    mu[2] = 1.0 / g.measure(2);
    HardyConstruction hc = critical_hardy_weight(G, mu, g.measure());
    CHECK(hc.weight[2] ==
          doctest::Approx(mu[2] / G.at(2, 2) / 1.0).epsilon(1e-14));
    for (Index x : g.interior())
      if (x != 2) CHECK(hc.weight[x] == 0.0);
  }
  SUBCASE("unit density has the closed form 2/(i(6-i))") {
    HardyConstruction hc = critical_hardy_weight(G, Vector::Ones(7), g.measure());
    for (Index i = 1; i <= 5; ++i)
      CHECK(hc.weight[i] ==
            doctest::Approx(2.0 / (static_cast<double>(i) * (6.0 - i))).epsilon(1e-13));
  }
  SUBCASE("(P - W_mu) G_mu = 0 is exact algebra") {
    std::mt19937_64 rng(5);
    Vector mu = testing::random_node_function(rng, 7, 0.1, 1.0);
    HardyConstruction hc = critical_hardy_weight(G, mu, g.measure());
    Vector Pv = P.apply(hc.witness);
    for (Index x : g.interior())
      CHECK(std::abs(Pv[x] - hc.weight[x] * hc.witness[x]) <= 1e-12);
  }
  SUBCASE("zero measure is rejected") {
    CHECK_THROWS_AS(critical_hardy_weight(G, Vector::Zero(7), g.measure()),
                    std::invalid_argument);
  }
}

TEST_CASE("invariance identity over random measures") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    DiscreteOperator P = testing::random_operator(rng, 9, trial % 2, 0.05);
    const Graph& g = P.graph();
    GreenMatrix G = dirichlet_green(P, g.interior());
    Vector mu = testing::random_node_function(rng, g.size(), 0.0, 1.0);
    for (Index b : g.boundary()) mu[b] = 0.0;
    if (mu.maxCoeff() <= 0.0) continue;
    HardyConstruction hc = critical_hardy_weight(G, mu, g.measure());
    CHECK(invariance_residual(G, hc.weight, hc.witness, g.measure()) <= 1e-10);
  }
  // delta mass reduces the identity to the reproduction property
  DiscreteOperator P = path_op(5);
  GreenMatrix G = dirichlet_green(P, P.graph().interior());
  Vector mu = Vector::Zero(7);
  mu[3] = 2.0;
  HardyConstruction hc = critical_hardy_weight(G, mu, P.graph().measure());
  CHECK(invariance_residual(G, hc.weight, hc.witness, P.graph().measure()) <= 1e-13);
}

TEST_CASE("lambda0(P, W_mu) >= 1 on truncations and nonincreasing") {
  Graph host = path_graph(25);
  DiscreteOperator P =
      DiscreteOperator::build(host, {}, {}, Vector::Constant(host.size(), 0.15));
  Exhaustion ex = radial_exhaustion(host, {4, 8, 12});
  GreenMatrix G = dirichlet_green(P, host.interior());
  std::mt19937_64 rng(11);
  Vector mu = testing::random_node_function(rng, host.size(), 0.1, 1.0);
  for (Index b : host.boundary()) mu[b] = 0.0;
  HardyConstruction hc = critical_hardy_weight(G, mu, host.measure());
  std::vector<double> lam;
  for (const auto& lvl : ex.levels)
    lam.push_back(principal_eigenvalue(P, lvl, hc.weight));
  for (size_t k = 0; k < lam.size(); ++k) {
    CHECK(lam[k] >= 1.0 - 1e-8);
    if (k) CHECK(lam[k] <= lam[k - 1] * (1.0 + 1e-9));
  }
  CHECK(lam.back() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("v_mu comparison verdicts") {
  Graph host = path_graph(41);
  DiscreteOperator P =
      DiscreteOperator::build(host, {}, {}, Vector::Constant(host.size(), 0.1));
  Exhaustion ex = radial_exhaustion(host, {5, 10, 15, 20});
  GreenMatrix G = dirichlet_green(P, host.interior());
  Index anchor = 21;
  SUBCASE("delta at the anchor: ratios identically one") {
    Vector mu = Vector::Zero(host.size());
    mu[anchor] = 1.0;
    VmuReport r = v_mu_comparison(G, mu, host.measure(), host, ex, anchor);
    CHECK(r.verdict == "comparable (trend)");
    for (const auto& t : r.tails)
      if (!t.empty) {
        CHECK(t.g_ratio_max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.w_ratio_max == doctest::Approx(1.0).epsilon(1e-12));
      }
  }
  SUBCASE("compactly supported mu stabilizes") {
    Vector mu = Vector::Zero(host.size());
    for (Index x : ex.levels[0]) mu[x] = 1.0;
    VmuReport r = v_mu_comparison(G, mu, host.measure(), host, ex, anchor);
    CHECK(r.verdict == "comparable (trend)");
  }
  SUBCASE("heavy tails blow the ratios up") {
    Vector mu = Vector::Zero(host.size());
    for (Index x : host.interior())
      mu[x] = std::exp(host.coords()[static_cast<size_t>(x)].norm());
    VmuReport r = v_mu_comparison(G, mu, host.measure(), host, ex, anchor);
    CHECK(r.verdict == "not comparable");
  }
}

TEST_CASE("cutoff tail norms") {
  Graph host = path_graph(41);
  DiscreteOperator P =
      DiscreteOperator::build(host, {}, {}, Vector::Constant(host.size(), 0.1));
  Exhaustion ex = radial_exhaustion(host, {5, 10, 15, 20});
  GreenMatrix G = dirichlet_green(P, host.interior());
  Index anchor = 21;
  SUBCASE("compact mu: tails vanish exactly once the support is cut away") {
    Vector mu = Vector::Zero(host.size());
    for (Index x : ex.levels[0]) mu[x] = 1.0;
    auto t = cutoff_tail_norms(G, mu, host.measure(), host, ex, anchor);
    CHECK(t.back() == 0.0);
  }
  SUBCASE("unit density decays on the short-range host") {
    auto t = cutoff_tail_norms(G, Vector::Ones(host.size()), host.measure(), host,
                               ex, anchor);
    for (size_t k = 1; k < t.size(); ++k) CHECK(t[k] <= t[k - 1] * (1 + 1e-9));
  }
  SUBCASE("heavy tails do not vanish") {
    Vector mu = Vector::Zero(host.size());
    for (Index x : host.interior())
      mu[x] = std::exp(host.coords()[static_cast<size_t>(x)].norm());
    auto t = cutoff_tail_norms(G, mu, host.measure(), host, ex, anchor);
    CHECK(t.back() > 0.5 * t.front());
  }
  SUBCASE("too few levels is an error") {
    Exhaustion shallow = radial_exhaustion(host, {10, 20});
    CHECK_THROWS_AS(cutoff_tail_norms(G, Vector::Ones(host.size()), host.measure(),
                                      host, shallow, anchor),
                    std::invalid_argument);
  }
}
