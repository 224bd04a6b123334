#pragma once

#include "critlab/green.hpp"

#include <complex>

namespace critlab {

enum class Criticality { subcritical, critical_trend, supercritical };
enum class PositiveCriticality { positive_critical_trend, null_critical_trend, na };

std::string to_string(Criticality c);
std::string to_string(PositiveCriticality c);

struct SpectralReport {
  double lambda0 = 0;
  std::vector<double> eigenvalues;  // ascending
  Vector ground_state;              // host-indexed, zero off the domain
  Criticality verdict = Criticality::subcritical;
  PositiveCriticality positive_criticality = PositiveCriticality::na;
};

/// Generalized principal eigenvalue lambda0(P, W, domain), W >= 0 and
/// not identically zero on the domain. Symmetric operators go through
/// inverse iteration on the pencil (K, diag(W m)); the general route is
/// power iteration on the positive kernel G diag(W m) with
/// lambda0 = 1/rho. Requires P subcritical on the domain.
double principal_eigenvalue(const DiscreteOperator& op, const IndexList& domain,
                            const Vector& W);

/// Power-iteration route alone (used for the symmetric cross-check).
double principal_eigenvalue_power(const GreenMatrix& G, const Vector& W,
                                  const Vector& m);

struct WeightedGreenOperator {
  IndexList support;      // local indices (into G.domain) where W > 0
  Matrix kernel;          // G(x,y) W(y) m(y) on the support
  Matrix adjoint_kernel;  // G(y,x) W(y) m(y)  (kernel of the adjoint form)
  double perron_value = 0;
  Vector perron_vector;   // positive, on the support
  double spectral_gap = 0;  // (rho - |second|) / rho
  bool support_connected = true;
};

WeightedGreenOperator weighted_green_operator(const GreenMatrix& G, const Vector& W,
                                              const Vector& m);

/// Eigenvalues of the weighted Green kernel under the phi_p diagonal
/// similarity, phi_p = phi^{-1} (phi W phi_tilde)^{1/p}, p in {1,2,inf}
/// (p = inf means exponent 0). Restricted to supp W. phi, phi_tilde are
/// host-indexed and positive on the domain.
std::vector<std::complex<double>> weighted_spectrum_p(const GreenMatrix& G,
                                                      const Vector& W, const Vector& m,
                                                      const Vector& phi,
                                                      const Vector& phi_tilde, double p);

struct EigenSystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns, m-orthonormal on the domain
  IndexList domain;
};

/// Full spectrum of a symmetric operator on the domain in L^2(m).
EigenSystem spectrum(const DiscreteOperator& op, const IndexList& domain);

/// Σ_j exp(-lambda_j t).
double heat_trace(const std::vector<double>& eigenvalues, double t);

/// C(beta) = beta^{beta/(beta+2)}/(beta+2) * (2 Gamma((beta+2)/2)/c_hat)^{2/(beta+2)}.
double torsion_bound_constant(double beta, double c_hat);

/// min of the two branches of the torsional-rigidity eigenvalue bound.
double eigenvalue_lower_bound(double T, double beta, double N, double c_hat, int j);

struct TorsionAudit {
  double rigidity = 0;  // T
  double c_hat = 0;     // heat-kernel sup estimate over the t-grid
  std::vector<double> eigenvalues;
  std::vector<double> bounds;  // bound_j for j >= 1 (bounds[0] is j=1)
  bool all_pass = true;
  int violations = 0;
};

/// Audits lambda_j >= eigenvalue_lower_bound for all computed j >= 1 with
/// T measured on the domain and c_hat estimated from the eigen-expansion
/// of the heat kernel diagonal on t in logspace(-3,3,61).
TorsionAudit torsion_bound_audit(const DiscreteOperator& op, const IndexList& domain,
                                 double beta, double N);

struct CriticalityProbe {
  std::vector<double> lambda0_levels;
  std::vector<double> radii;  // level radius proxy (sqrt of level size if no coords)
  std::string verdict;        // "critical-trend" / "subcritical" / "inconclusive"
  bool green_blowup = false;
  bool green_converged = false;
  std::vector<double> green_trace;
};

/// lambda0(P, test_weight, M_j) along the exhaustion; the test weight must
/// be compactly supported inside the first level. Critical trend:
/// lambda0(M_J) < 1e-3 and decay >= 20% per doubling of the radius.
/// green_tol is the convergence tolerance of the supplementary
/// minimal-Green exhaustion (short-range hosts settle at 1e-8; transient
/// lattices only reach percent scale at desk size).
CriticalityProbe criticality_probe(const DiscreteOperator& op,
                                   const Exhaustion& exhaustion,
                                   const Vector& test_weight,
                                   double green_tol = 1e-8);

struct PositiveCriticalityReport {
  std::vector<double> partial_sums;  // Σ_{M_j} phi phi* W m
  PositiveCriticality verdict = PositiveCriticality::na;
};

PositiveCriticalityReport positive_criticality_check(const Vector& phi,
                                                     const Vector& phi_star,
                                                     const Vector& W, const Vector& m,
                                                     const Graph& host,
                                                     const Exhaustion& exhaustion);

struct LiouvilleReport {
  struct Hypothesis {
    std::string name;
    bool ok = false;
    double margin = 0;
  };
  std::vector<Hypothesis> hypotheses;
  double comparability_C = 0;  // smallest C with Psi_+ <= C Phi
  double eps0 = 0;
  double residual = 0;  // max (f - eps0 Psi) / max f
  double psi_phi_min = 0, psi_phi_max = 0;
  std::string verdict;  // "critical" / "inconclusive" / "hypotheses failed"
};

/// Liouville comparison checker. P1, P2 share the principal part outside
/// K_region; Phi is a positive P1-solution; Psi a P2-subsolution with
/// Psi_+ != 0 and Psi_+ <= C Phi; W bounds |V1 - V2|/2 off K_region.
/// f is a positive P2-supersolution driving the maximal-eps comparison.
LiouvilleReport liouville_compare(const DiscreteOperator& P1,
                                  const DiscreteOperator& P2, const Vector& Phi,
                                  const Vector& Psi, const IndexList& K_region,
                                  const Vector& W, const Vector& f);

}  // namespace critlab
