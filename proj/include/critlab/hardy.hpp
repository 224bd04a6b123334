#pragma once

#include "critlab/green.hpp"

namespace critlab {

/// A Hardy-weight construction together with its witness function.
/// For the optimal (supersolution) construction the witness is
/// v = sqrt(G_phi * u) and (P - W) v = 0 holds identically on the domain;
/// W may dip negative at isolated nodes, which is reported, never clipped.
/// For the critical construction the witness is the Green potential G_mu
/// and W = mu / G_mu, so (P - W) G_mu = 0 exactly.
struct HardyConstruction {
  enum class Kind { optimal, critical };
  Kind kind = Kind::optimal;
  IndexList domain;            // host ids the construction lives on
  Vector weight;               // host-indexed W, zero off the domain
  Vector witness;              // host-indexed, zero off the domain
  IndexList negative_nodes;    // nodes with W < 0 (optimal kind only)
  double identity_residual = 0;  // max |(P - W) witness| / witness scale
};

/// W = P(v)/v with v = sqrt(G_phi * u) pointwise. G_phi and u are
/// host-indexed, positive on the domain; G_phi must vanish off it.
HardyConstruction optimal_hardy_weight(const DiscreteOperator& op,
                                       const IndexList& domain,
                                       const Vector& G_phi, const Vector& u);

/// Roots of lambda = 4 a (1 - a): a_± = (1 ± sqrt(1 - lambda)) / 2,
/// for 0 < lambda <= 1.
std::pair<double, double> alpha_roots(double lambda);

/// h_± = u^(1 - a_±) * (G_phi)^(a_±) pointwise (zero where G_phi is zero).
std::pair<Vector, Vector> supersolution_pair(const Vector& u, const Vector& G_phi,
                                             double lambda);

/// W_mu = mu / G_mu with witness G_mu; support(W_mu) = support(mu).
HardyConstruction critical_hardy_weight(const GreenMatrix& G, const Vector& mu,
                                        const Vector& m);

/// max_x |Σ_y G(x,y) W(y) G_mu(y) m(y) - G_mu(x)| / G_mu(x) over the domain.
double invariance_residual(const GreenMatrix& G, const Vector& W_mu,
                           const Vector& G_mu, const Vector& m);

struct VmuReport {
  Vector v_mu;  // host-indexed mu / G(.,anchor) on the domain
  struct Tail {
    Index level;
    double g_ratio_min = 0, g_ratio_max = 0;  // G_mu / G(.,anchor) on M_j*
    double w_ratio_min = 0, w_ratio_max = 0;  // V_mu / W_mu where both > 0
    bool empty = true;
  };
  std::vector<Tail> tails;
  std::string verdict;  // "comparable (trend)" / "not comparable" / "inconclusive"
};

/// Tail comparison of G_mu against the anchored Green column and of V_mu
/// against W_mu over exhaustion complements.
VmuReport v_mu_comparison(const GreenMatrix& G, const Vector& mu, const Vector& m,
                          const Graph& host, const Exhaustion& exhaustion,
                          Index anchor);

/// t_k = || G_{mu_k} / G(.,anchor) ||_inf over M_k*, with mu_k the sharp
/// cutoff of mu to the complement of M_{k-1}. Requires >= 3 levels.
std::vector<double> cutoff_tail_norms(const GreenMatrix& G, const Vector& mu,
                                      const Vector& m, const Graph& host,
                                      const Exhaustion& exhaustion, Index anchor);

}  // namespace critlab
