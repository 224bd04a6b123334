#pragma once

#include "critlab/graph.hpp"

#include <optional>

namespace critlab {

/// Divergence-form operator on a weighted graph,
///
///   (P u)(x) = (1/m(x)) [ Σ_y a_xy (u(x) - u(y))
///                       + Σ_y b_xy (u(x) - u(y))
///                       + u(x) Σ_y b̃_xy - Σ_y b̃_yx u(y) ]
///            + c(x) u(x)            on interior nodes,
///   (P u)(x) = u(x)                 on boundary nodes (identity rows),
///
/// the upwind discretization of -div[A∇u + u b̃] + b·∇u + cu. The b family
/// samples the gradient along its directed edge; the b̃ family moves mass
/// along its directed edge. With this pairing the formal adjoint in
/// L²(m) is exactly the operator with b and b̃ swapped, and the matrix of
/// the adjoint is the m-weighted transpose.
class DiscreteOperator {
 public:
  static DiscreteOperator build(Graph graph, std::vector<DirectedCoef> drift_b,
                                std::vector<DirectedCoef> drift_b_tilde,
                                Vector potential);

  /// P u on interior rows, u itself on boundary rows.
  Vector apply(const Vector& u) const;

  /// Swaps b and b̃; an involution.
  DiscreteOperator adjoint() const;

  /// Dense matrix of P (identity rows on the boundary).
  Matrix matrix() const;

  /// Flux-form matrix K = diag(m)·P restricted to `domain` (rows and
  /// columns). K is symmetric iff the operator is, and its inverse is the
  /// Green matrix of the domain.
  Matrix weighted_interior(const IndexList& domain) const;

  /// P-harmonic extension: solves P u = 0 on the interior with the given
  /// boundary values.
  Vector harmonic_extension(const Vector& boundary_values) const;

  const Graph& graph() const { return graph_; }
  const Vector& potential() const { return potential_; }
  const std::vector<DirectedCoef>& drift_b() const { return drift_b_; }
  const std::vector<DirectedCoef>& drift_b_tilde() const { return drift_bt_; }
  bool symmetric() const { return symmetric_; }

 private:
  Graph graph_;
  std::vector<DirectedCoef> drift_b_, drift_bt_;
  Vector potential_;
  bool symmetric_ = true;
  Matrix flux_;  // K = diag(m)·P, dense n x n
};

/// Conductance extrema per region. A violation is any a <= 0.
struct EllipticityReport {
  struct Row {
    std::string region;
    double a_min = 0.0;
    double a_max = 0.0;
    double ratio = 0.0;  // a_max / a_min
    bool violation = false;
  };
  std::vector<Row> rows;
  bool any_violation = false;
};

/// Raw edge-table form; flags nonpositive conductances instead of throwing.
EllipticityReport check_ellipticity(const std::vector<Edge>& edges,
                                    const std::optional<Exhaustion>& subsets = {},
                                    const Graph* graph = nullptr);

EllipticityReport check_ellipticity(const DiscreteOperator& op,
                                    const std::optional<Exhaustion>& subsets = {});

/// Upwind radial drift: coefficient kappa/|x| on the edge from each
/// interior node to its closest-to-origin neighbor (the discrete
/// kappa (1/r) ∂_r term). Requires a coordinate graph.
std::vector<DirectedCoef> radial_upwind_drift(const Graph& g, double kappa);

}  // namespace critlab
