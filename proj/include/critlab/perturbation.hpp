#pragma once

#include "critlab/green.hpp"

#include <random>

namespace critlab {

/// 3G constant of V against G:
///   C0 = max over pairs (x,y), including x = y, of
///        Σ_z G(x,z)|V(z)|G(z,y) m(z) / G(x,y).
/// Always finite on a finite graph. V and m are host-indexed.
double three_g_constant(const GreenMatrix& G, const Vector& V, const Vector& m);

/// Anchored tail suprema over exhaustion complements,
///   s_n = sup_{y in M_n*} Σ_{z in M_n*} G(x0,z)|V(z)|G(z,y) m(z) / G(x0,y);
/// empty complements contribute 0.
std::vector<double> semismall_profile(const GreenMatrix& G, const Vector& V,
                                      const Vector& m, const Graph& host,
                                      const Exhaustion& exhaustion, Index anchor);

/// Two-variable version: sup over both x,y in M_n*.
std::vector<double> small_profile(const GreenMatrix& G, const Vector& V,
                                  const Vector& m, const Graph& host,
                                  const Exhaustion& exhaustion);

struct TripleScanOptions {
  Index exhaustive_cap = 300;  // full O(n^3) scan up to this dimension
  Index samples = 2'000'000;   // Monte-Carlo triples beyond the cap
  unsigned long seed = 1;
  double coverage = 0.0;       // filled by the scan: fraction of triples seen
};

/// Quasimetric constant of the symmetric kernel G: the smallest C with
/// d(x,y) <= C (d(x,z) + d(z,y)) for d = 1/G, computed as the max ratio
/// over triples. Throws std::invalid_argument on a nonsymmetric G.
double quasimetric_constant(const GreenMatrix& G, TripleScanOptions* opts = nullptr);

/// Iterated Green kernels G^(0) = G, G^(i) = G diag(V m) G^(i-1).
/// Asserts |G^(i)| <= C0^i G entrywise and throws MaximumPrincipleError
/// when the bound fails beyond round-off.
std::vector<Matrix> iterated_kernels(const GreenMatrix& G, const Vector& V,
                                     const Vector& m, int i_max);

struct NeumannResult {
  Matrix H;                // Σ eps^i G^(i), the perturbed Green table
  int iterations = 0;      // highest i included
  double tail_bound = 0;   // (C0|eps|)^(i+1) / (1 - C0|eps|), inf if >= 1
  bool converged = false;
  double spectral_radius = 0;  // rho(G diag(V m)), the sharp gate
};

/// Neumann series for G_{P - eps V}. Convergence is gated by the exact
/// finite-dimensional condition |eps| * rho(G diag(Vm)) < 1; the paper's
/// sufficient bound 1/C0 is reported through tail_bound.
NeumannResult neumann_series(const GreenMatrix& G, const Vector& V,
                             const Vector& m, double eps, double tol = 1e-14);

/// Sup-norm residual of the resolvent identity
///   H(x,y) = G(x,y) + eps Σ_z H(x,z) V(z) G(z,y) m(z),
/// normalized by sup |G|.
double resolvent_residual(const GreenMatrix& G, const Matrix& H, const Vector& V,
                          const Vector& m, double eps);

struct SandwichReport {
  double lower_factor = 0;  // (1 - 2|eps|C0) / (1 - |eps|C0)
  double upper_factor = 0;  // 1 / (1 - |eps|C0)
  bool lower_ok = false;
  bool upper_ok = false;
  double lower_margin = 0;  // min (G_pert - lower_factor G) / G
  double upper_margin = 0;  // min (upper_factor G - G_pert) / G
};

/// Elementwise two-sided comparison of a perturbed Green table with G.
SandwichReport sandwich_check(const GreenMatrix& G, const Matrix& G_pert,
                              double eps, double C0);

/// G_{P - eps1 W} <= G_{P - eps2 W} elementwise for eps1 < eps2 and W >= 0.
bool monotone_in_eps(const DiscreteOperator& op, const IndexList& domain,
                     const Vector& W, double eps1, double eps2);

struct EquivalencePoint {
  double lambda = 0;
  double ratio = 0;  // max(G_pert/G) / min(G_pert/G); 0 when skipped
  std::string verdict;
};

/// Per-lambda equivalence ratios of G_{P - lambda W} against G.
/// Lambdas at which the perturbed operator fails to be subcritical are
/// skipped with a verdict. A nonempty `window` restricts the ratio to
/// pairs from that fixed node set, so the ratio can be tracked across
/// growing domains without mixing in ever-farther pairs.
std::vector<EquivalencePoint> equivalence_interval(const DiscreteOperator& op,
                                                   const IndexList& domain,
                                                   const Vector& W,
                                                   const std::vector<double>& lambda_grid,
                                                   const IndexList& window = {});

struct SchurReport {
  bool certified = false;
  double bound = 0;       // (E0 + delta) / lambda0 when certified
  double true_norm = 0;   // operator norm on L^2(W dm) from singular values
  double row_margin = 0;  // min over x of u(x)/lambda0 - Σ G(x,y)u(y)W(y)m(y)
  double col_margin = 0;
};

/// Schur-test bound for T f = (E0+delta) ∫ G(.,y) f(y) W dm with test
/// function u; the test inequalities are verified, not assumed.
SchurReport schur_bound(const GreenMatrix& G, const Vector& W, const Vector& m,
                        const Vector& u, double E0, double delta, double lambda0);

struct QuasimetricCheck {
  double constant = 0;
  double worst_ratio = 0;  // max over triples of lhs / (C * rhs)
  bool ok = false;
};

/// Verifies G(x,z)G(z,y)/G(x,y) <= C (G(x,z) + G(z,y)) over all triples
/// with C = quasimetric_constant(G) (the 3G restatement of the
/// quasi-triangle inequality).
QuasimetricCheck quasimetric_3g_check(const GreenMatrix& G,
                                      TripleScanOptions* opts = nullptr);

struct PerturbationProfile {
  double three_g = 0;                  // C0
  std::vector<double> semismall_tail;  // s_n
  std::vector<double> small_tail;
  double quasimetric = 0;  // NaN when G is nonsymmetric
  bool g_bounded = false;
  bool semismall_trend = false;
  bool small_trend = false;
};

/// Assembles the classification profile of V against (P, exhaustion).
/// Trend flags use a decay heuristic (nonincreasing within slack and the
/// last tail below half of the first); they are findings, never proofs.
PerturbationProfile classify_perturbation(const GreenMatrix& G, const Vector& V,
                                          const Vector& m, const Graph& host,
                                          const Exhaustion& exhaustion, Index anchor);

}  // namespace critlab
