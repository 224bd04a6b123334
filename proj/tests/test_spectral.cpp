#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "critlab/hardy.hpp"
#include "critlab/spectral.hpp"
#include "helpers.hpp"

#include <unsupported/Eigen/MatrixFunctions>

using namespace critlab;

namespace {

DiscreteOperator path_op(Index n, double c_val = 0.0) {
  Graph g = path_graph(n);
  return DiscreteOperator::build(g, {}, {}, Vector::Constant(g.size(), c_val));
}

}  // namespace

TEST_CASE("principal eigenvalue of the path matches the closed form") {
  for (Index n : {4, 7, 12}) {
    DiscreteOperator P = path_op(n);
    double lam = principal_eigenvalue(P, P.graph().interior(), Vector::Ones(n + 2));
    double closed = 2.0 * (1.0 - std::cos(M_PI / (n + 1)));
    CHECK(lam == doctest::Approx(closed).epsilon(1e-10));
  }
}

TEST_CASE("pencil and power routes agree on 50 random symmetric instances") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteOperator P = testing::random_operator(rng, 9, false, 0.05);
    const Graph& g = P.graph();
    Vector W = testing::random_node_function(rng, g.size(), 0.1, 1.0);
    double pencil = principal_eigenvalue(P, g.interior(), W);
    GreenMatrix G = dirichlet_green(P, g.interior());
    double power = principal_eigenvalue_power(G, W, g.measure());
    CHECK(std::abs(pencil - power) / power <= 1e-8);
    // dense generalized eigensolver as a third, independent route
    Matrix K = P.weighted_interior(g.interior());
    Matrix B = Matrix::Zero(K.rows(), K.cols());
    for (Index k = 0; k < K.rows(); ++k) {
      Index x = g.interior()[static_cast<size_t>(k)];
      B(k, k) = W[x] * g.measure(x);
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(K, B);
    CHECK(pencil == doctest::Approx(ges.eigenvalues()[0]).epsilon(1e-8));
  }
}

TEST_CASE("weight identically zero is rejected") {
  DiscreteOperator P = path_op(4);
  CHECK_THROWS_AS(principal_eigenvalue(P, P.graph().interior(), Vector::Zero(6)),
                  std::invalid_argument);
}

TEST_CASE("weighted Green operator") {
  DiscreteOperator P = path_op(5, 0.1);
  const Graph& g = P.graph();
  GreenMatrix G = dirichlet_green(P, g.interior());
  SUBCASE("rank-one weight: Perron value is G(z0,z0) W(z0) m(z0)") {
    Vector W = Vector::Zero(7);
    W[3] = 0.8;
    WeightedGreenOperator wg = weighted_green_operator(G, W, g.measure());
    CHECK(wg.kernel.rows() == 1);
    CHECK(wg.perron_value ==
          doctest::Approx(G.at(3, 3) * 0.8 * g.measure(3)).epsilon(1e-14));
  }
  SUBCASE("W_mu weight: Perron vector proportional to G_mu") {
    std::mt19937_64 rng(17);
    Vector mu = testing::random_node_function(rng, 7, 0.2, 1.0);
    for (Index b : g.boundary()) mu[b] = 0.0;
    HardyConstruction hc = critical_hardy_weight(G, mu, g.measure());
    WeightedGreenOperator wg = weighted_green_operator(G, hc.weight, g.measure());
    CHECK(wg.perron_value == doctest::Approx(1.0).epsilon(1e-10));
    Index top;
    wg.perron_vector.cwiseAbs().maxCoeff(&top);
    Index host_top = G.domain[static_cast<size_t>(wg.support[static_cast<size_t>(top)])];
    double scale = hc.witness[host_top] / wg.perron_vector[top];
    for (size_t q = 0; q < wg.support.size(); ++q) {
      Index hx = G.domain[static_cast<size_t>(wg.support[q])];
      CHECK(wg.perron_vector[static_cast<Index>(q)] * scale ==
            doctest::Approx(hc.witness[hx]).epsilon(1e-8));
    }
  }
  SUBCASE("phi_p similarity leaves the spectrum invariant for p in {1,2,inf}") {
    Vector mu = Vector::Ones(7);
    HardyConstruction hc = critical_hardy_weight(G, mu, g.measure());
    auto s1 = weighted_spectrum_p(G, hc.weight, g.measure(), hc.witness, hc.witness, 1.0);
    auto s2 = weighted_spectrum_p(G, hc.weight, g.measure(), hc.witness, hc.witness, 2.0);
    auto si = weighted_spectrum_p(G, hc.weight, g.measure(), hc.witness, hc.witness,
                                  std::numeric_limits<double>::infinity());
    for (size_t k = 0; k < s1.size(); ++k) {
      CHECK(std::abs(s1[k] - s2[k]) <= 1e-10);
      CHECK(std::abs(s1[k] - si[k]) <= 1e-10);
    }
  }
}

TEST_CASE("full spectrum of symmetric truncations") {
  SUBCASE("path of five: lambda_j = 2(1 - cos(j pi / 6))") {
    EigenSystem sys = spectrum(path_op(5), path_op(5).graph().interior());
    for (size_t j = 0; j < 5; ++j)
      CHECK(sys.values[j] ==
            doctest::Approx(2.0 * (1.0 - std::cos((j + 1) * M_PI / 6.0)))
                .epsilon(1e-12));
    // m-orthonormality of the eigenvectors
    Matrix gram = sys.vectors.transpose() * sys.vectors;  // m == 1
    CHECK((gram - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("decoupled star: eigenvalues are the shifted potentials") {
    // interior nodes each hang off their own boundary node: K is diagonal
    std::vector<Edge> edges = {{0, 3, 1.0}, {1, 4, 1.0}, {2, 5, 1.0}};
    Graph g = Graph::build(6, std::move(edges), Vector::Ones(6), {3, 4, 5});
    Vector c(6);
    c << 0.4, 0.1, 0.9, 0, 0, 0;
    EigenSystem sys = spectrum(DiscreteOperator::build(g, {}, {}, c), g.interior());
    CHECK(sys.values[0] == doctest::Approx(1.1));
    CHECK(sys.values[1] == doctest::Approx(1.4));
    CHECK(sys.values[2] == doctest::Approx(1.9));
  }
  SUBCASE("random symmetric instance against the dense oracle") {
    std::mt19937_64 rng(23);
    DiscreteOperator P = testing::random_operator(rng, 10, false, 0.0);
    EigenSystem sys = spectrum(P, P.graph().interior());
    Matrix K = P.weighted_interior(P.graph().interior());
    Vector m(K.rows());
    for (Index k = 0; k < K.rows(); ++k)
      m[k] = P.graph().measure(P.graph().interior()[static_cast<size_t>(k)]);
    Matrix S = m.cwiseSqrt().cwiseInverse().asDiagonal() * K *
               m.cwiseSqrt().cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
    for (size_t j = 0; j < sys.values.size(); ++j)
      CHECK(sys.values[j] ==
            doctest::Approx(es.eigenvalues()[static_cast<Index>(j)]).epsilon(1e-11));
  }
  SUBCASE("nonsymmetric operators are refused") {
    Graph g = path_graph(4);
    DiscreteOperator P =
        DiscreteOperator::build(g, {{1, 2, 0.4}}, {}, Vector::Zero(6));
    CHECK_THROWS_AS(spectrum(P, g.interior()), std::invalid_argument);
  }
}

TEST_CASE("heat trace") {
  SUBCASE("matches the matrix exponential for paths and a random instance") {
    std::mt19937_64 rng(29);
    for (int which = 0; which < 3; ++which) {
      DiscreteOperator P = which < 2 ? path_op(5 + 15 * which)
                                     : testing::random_operator(rng, 30, false, 0.1);
      const IndexList& I = P.graph().interior();
      EigenSystem sys = spectrum(P, I);
      Matrix Pmat = P.matrix()(I, I);
      for (double t : {0.1, 1.0, 10.0}) {
        Matrix expm = (-t * Pmat).exp();
        CHECK(heat_trace(sys.values, t) ==
              doctest::Approx(expm.trace()).epsilon(1e-8));
      }
    }
  }
  SUBCASE("long-time behavior is the ground-state term") {
    EigenSystem sys = spectrum(path_op(5), path_op(5).graph().interior());
    double t = 60.0;
    CHECK(heat_trace(sys.values, t) ==
          doctest::Approx(std::exp(-sys.values[0] * t)).epsilon(1e-9));
  }
  SUBCASE("single node: exactly exp(-lambda0 t)") {
    EigenSystem sys = spectrum(path_op(1, 0.3), {1});
    CHECK(heat_trace(sys.values, 2.0) == doctest::Approx(std::exp(-2.3 * 2.0)));
  }
  SUBCASE("t <= 0 is rejected") {
    CHECK_THROWS_AS(heat_trace({1.0}, 0.0), std::invalid_argument);
  }
}

TEST_CASE("torsional-rigidity eigenvalue bound") {
  SUBCASE("printed formula at beta = 2, c_hat = 1, T = 1, j = 1 gives 1/2") {
    CHECK(torsion_bound_constant(2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eigenvalue_lower_bound(1.0, 2.0, 2.0, 1.0, 1) ==
          doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("beta = N collapses the two branches") {
    double b1 = torsion_bound_constant(3.0, 0.7) * std::pow(2.0, -2.0 / 5.0) *
                std::pow(4.0, 2.0 / 5.0);
    CHECK(eigenvalue_lower_bound(2.0, 3.0, 3.0, 0.7, 4) ==
          doctest::Approx(b1).epsilon(1e-14));
  }
  SUBCASE("homogeneity of degree -2/(beta+2) in T") {
    double scale = std::pow(16.0, -2.0 / 4.0);  // beta = 2
    CHECK(eigenvalue_lower_bound(16.0, 2.0, 2.0, 1.0, 5) ==
          doctest::Approx(scale * eigenvalue_lower_bound(1.0, 2.0, 2.0, 1.0, 5)));
  }
  SUBCASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(eigenvalue_lower_bound(0.0, 1.0, 1.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(eigenvalue_lower_bound(1.0, 1.0, 1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(torsion_bound_constant(1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("torsion audit passes on the reference hosts") {
  TorsionAudit ap = torsion_bound_audit(path_op(20), path_op(20).graph().interior(),
                                        1.0, 1.0);
  CHECK(ap.rigidity == doctest::Approx(770.0).epsilon(1e-12));
  CHECK(ap.all_pass);
  CHECK(ap.bounds.size() == 19);  // j >= 1 only

  Graph grid = box_graph_2d(15, 15);
  DiscreteOperator Pg = DiscreteOperator::build(grid, {}, {}, Vector::Zero(grid.size()));
  TorsionAudit ag = torsion_bound_audit(Pg, grid.interior(), 2.0, 2.0);
  CHECK(ag.all_pass);
}

TEST_CASE("criticality probe separates the free line from short-range hosts") {
  SUBCASE("free 1D line decays like the known 1/r rate") {
    Graph host = path_graph(251);
    DiscreteOperator P = DiscreteOperator::build(host, {}, {}, Vector::Zero(host.size()));
    Exhaustion ex = radial_exhaustion(host, {16, 31, 62, 125});
    Vector W = Vector::Zero(host.size());
    for (Index x : host.interior())
      if (host.coords()[static_cast<size_t>(x)].norm() <= 2.0) W[x] = 4.0;
    CriticalityProbe probe = criticality_probe(P, ex, W);
    CHECK(probe.verdict == "critical-trend");
    CHECK(probe.green_blowup);
    // dense eigen-oracle at each level: lambda0 = 1/rho(G diag(W m))
    for (size_t j = 0; j < ex.levels.size(); ++j) {
      GreenMatrix Gj = dirichlet_green(P, ex.levels[j]);
      Vector wm(Gj.dim());
      for (Index k = 0; k < Gj.dim(); ++k) {
        Index x = Gj.domain[static_cast<size_t>(k)];
        wm[k] = W[x] * host.measure(x);
      }
      Matrix kernel = Gj.values * wm.asDiagonal();
      double oracle = 1.0 / kernel.eigenvalues().cwiseAbs().maxCoeff();
      CHECK(probe.lambda0_levels[j] == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
  SUBCASE("short-range host stabilizes") {
    Graph host = path_graph(121);
    DiscreteOperator P =
        DiscreteOperator::build(host, {}, {}, Vector::Constant(host.size(), 0.1));
    Exhaustion ex = radial_exhaustion(host, {15, 30, 60});
    Vector W = Vector::Zero(host.size());
    W[61] = 1.0;
    CriticalityProbe probe = criticality_probe(P, ex, W, 1e-8);
    CHECK(probe.verdict == "subcritical");
    CHECK_FALSE(probe.green_blowup);
  }
  SUBCASE("weight outside the first level is rejected") {
    Graph host = path_graph(61);
    DiscreteOperator P = DiscreteOperator::build(host, {}, {}, Vector::Zero(host.size()));
    Exhaustion ex = radial_exhaustion(host, {8, 16, 30});
    Vector W = Vector::Ones(host.size());
    CHECK_THROWS_AS(criticality_probe(P, ex, W), std::invalid_argument);
  }
}

TEST_CASE("positive criticality partial sums") {
  Graph host = path_graph(41);
  DiscreteOperator P =
      DiscreteOperator::build(host, {}, {}, Vector::Constant(host.size(), 0.1));
  Exhaustion ex = radial_exhaustion(host, {5, 10, 15, 20});
  SUBCASE("compactly supported W always converges") {
    Vector W = Vector::Zero(host.size());
    for (Index x : ex.levels[0]) W[x] = 1.0;
    auto rep = positive_criticality_check(Vector::Ones(host.size()),
                                          Vector::Ones(host.size()), W,
                                          host.measure(), host, ex);
    CHECK(rep.verdict == PositiveCriticality::positive_critical_trend);
    CHECK(rep.partial_sums.back() == rep.partial_sums[1]);  // sums freeze
  }
  SUBCASE("W_mu pairing converges") {
    GreenMatrix G = dirichlet_green(P, host.interior());
    HardyConstruction hc =
        critical_hardy_weight(G, Vector::Ones(host.size()), host.measure());
    auto rep = positive_criticality_check(hc.witness, hc.witness, hc.weight,
                                          host.measure(), host, ex);
    CHECK(rep.verdict == PositiveCriticality::positive_critical_trend);
  }
  SUBCASE("free line with W == 1 diverges") {
    Graph line = path_graph(81);
    Exhaustion exl = radial_exhaustion(line, {10, 20, 40});
    auto rep = positive_criticality_check(Vector::Ones(line.size()),
                                          Vector::Ones(line.size()),
                                          Vector::Ones(line.size()), line.measure(),
                                          line, exl);
    CHECK(rep.verdict == PositiveCriticality::null_critical_trend);
  }
}

TEST_CASE("liouville comparison checker") {
  SUBCASE("self-comparison returns the exact critical signature") {
    DiscreteOperator P = path_op(15);
    Vector Phi = Vector::Ones(17);
    LiouvilleReport rep =
        liouville_compare(P, P, Phi, Phi, {8}, Vector::Zero(17), Phi);
    CHECK(rep.verdict == "critical");
    CHECK(rep.eps0 == 1.0);
    CHECK(rep.residual == 0.0);
    CHECK(rep.psi_phi_min == 1.0);
    CHECK(rep.psi_phi_max == 1.0);
  }
  SUBCASE("potential-difference hypothesis failures are reported individually") {
    Graph g = path_graph(15);
    DiscreteOperator P1 = DiscreteOperator::build(g, {}, {}, Vector::Zero(17));
    Vector c2 = Vector::Constant(17, 0.2);  // |V1 - V2|/2 = 0.1 > W = 0 off K
    DiscreteOperator P2 = DiscreteOperator::build(g, {}, {}, c2);
    Vector Phi = Vector::Ones(17);
    LiouvilleReport rep =
        liouville_compare(P1, P2, Phi, Phi, {8}, Vector::Zero(17), Phi);
    bool potential_failed = false;
    for (const auto& h : rep.hypotheses)
      if (h.name.find("|V1 - V2|") != std::string::npos) potential_failed = !h.ok;
    CHECK(potential_failed);
    CHECK(rep.verdict == "hypotheses failed");
  }
  SUBCASE("principal-part mismatch off K is caught") {
    Graph g1 = path_graph(9);
    Graph g2 = path_graph(9, 1.3);
    DiscreteOperator P1 = DiscreteOperator::build(g1, {}, {}, Vector::Zero(11));
    DiscreteOperator P2 = DiscreteOperator::build(g2, {}, {}, Vector::Zero(11));
    Vector Phi = Vector::Ones(11);
    LiouvilleReport rep =
        liouville_compare(P1, P2, Phi, Phi, {5}, Vector::Zero(11), Phi);
    CHECK(rep.hypotheses[0].ok == false);
  }
}
