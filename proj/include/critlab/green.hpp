#pragma once

#include "critlab/operator.hpp"

#include <functional>
#include <unordered_map>

namespace critlab {

/// Restriction of an operator to a subcritical subdomain is singular or
/// fails to produce a positive inverse.
struct NotSubcriticalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computed quantity violates the generalized maximum principle
/// (nonpositive Green entry, non-monotone exhaustion trace, ...).
struct MaximumPrincipleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  Index dense_threshold = 2000;  // dense LU up to here, iterative beyond
  double iterative_tol = 1e-12;  // relative residual for CG / BiCGSTAB
  Index max_iterations = 200000;
};

/// Table of the Dirichlet Green function on a domain: column y solves
/// P G(.,y) = δ_y / m(y) with zero off the domain. Minimal-Green tables
/// produced by exhaustion carry the per-level convergence trace.
struct GreenMatrix {
  IndexList domain;  // host node ids, sorted
  Matrix values;     // G(x,y) indexed by position in `domain`
  std::vector<double> convergence_trace;  // sup relative change per level
  bool converged = true;
  bool blowup_trend = false;

  Index dim() const { return static_cast<Index>(domain.size()); }
  Index local(Index host_node) const;  // -1 if off the domain
  double at(Index host_x, Index host_y) const {
    return values(local_checked(host_x), local_checked(host_y));
  }

  /// Restriction to a subdomain (host ids, must be contained).
  GreenMatrix restrict_to(const IndexList& sub) const;

 private:
  Index local_checked(Index host_node) const;
  mutable std::unordered_map<Index, Index> lookup_;
};

/// Green matrix of P on `domain` (interior host nodes, connected).
/// Throws NotSubcriticalError if the restriction is singular and
/// MaximumPrincipleError if the inverse has nonpositive entries.
GreenMatrix dirichlet_green(const DiscreteOperator& op, const IndexList& domain,
                            const SolveOptions& opts = {});

/// Monotone limit of Dirichlet Green matrices along an exhaustion.
/// The trace entry for level j is the sup relative change over pairs of
/// the first level (the designated compact; rim pairs of growing windows
/// never settle and would mask genuine pointwise convergence). Converged
/// when the trace stays below tol on three consecutive levels; steady
/// growth of the level maxima is reported as a blow-up trend, not an
/// error.
/// Non-monotone values on common indices throw MaximumPrincipleError.
/// per_level, when given, sees every level's Green table as it is built.
GreenMatrix minimal_green_exhaustion(
    const DiscreteOperator& op, const Exhaustion& exhaustion, double tol = 1e-8,
    const SolveOptions& opts = {},
    const std::function<void(Index, const GreenMatrix&)>& per_level = {});

/// G_mu(x) = Σ_y G(x,y) mu(y) m(y), defined on the Green domain.
/// mu is a host-indexed node function, mu ≥ 0 and not identically zero
/// on the domain.
Vector green_potential(const GreenMatrix& G, const Vector& mu, const Vector& m);

struct Torsion {
  Vector g1;        // host-indexed, zero off the domain
  double rigidity;  // T = Σ g1 m over the domain
};

/// Solves P u = 1 on the domain with Dirichlet zero; T = Σ u m.
Torsion torsion_function(const DiscreteOperator& op, const IndexList& domain,
                         const SolveOptions& opts = {});

/// max |G_{P*}(x,y) - G_P(y,x)| over the domain.
double duality_gap(const DiscreteOperator& op, const IndexList& domain,
                   const SolveOptions& opts = {});

bool check_duality(const DiscreteOperator& op, const IndexList& domain,
                   double tol = 1e-12, const SolveOptions& opts = {});

}  // namespace critlab
