#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace critlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// Undirected edge with conductance a > 0 (the principal part A).
struct Edge {
  Index u = 0;
  Index v = 0;
  double a = 1.0;
};

/// Directed first-order coefficient (drift entries b, b-tilde).
struct DirectedCoef {
  Index from = 0;
  Index to = 0;
  double value = 0.0;
};

/// Finite weighted graph with node measure m and a designated Dirichlet
/// boundary. The interior is the complement of the boundary. Construction
/// validates: positive conductances, positive finite measure, connectivity
/// of interior ∪ boundary, and nonempty connected interior.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on any invariant violation.
  static Graph build(Index n, std::vector<Edge> edges, Vector measure,
                     IndexList boundary,
                     std::vector<Eigen::Vector3d> coords = {});

  Index size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vector& measure() const { return measure_; }
  double measure(Index x) const { return measure_[x]; }
  bool is_boundary(Index x) const { return is_boundary_[x]; }
  const IndexList& interior() const { return interior_; }
  const IndexList& boundary() const { return boundary_; }

  /// Neighbors of x with the edge conductance.
  const std::vector<std::pair<Index, double>>& neighbors(Index x) const {
    return adj_[x];
  }

  /// Optional embedding (used by grid generators and radius-based
  /// exhaustions); empty when the graph carries no geometry.
  const std::vector<Eigen::Vector3d>& coords() const { return coords_; }
  bool has_coords() const { return !coords_.empty(); }

  /// True iff the induced subgraph on `subset` is connected (and nonempty).
  bool connected(const IndexList& subset) const;

  /// subset ∪ { nodes adjacent to subset }.
  IndexList closure(const IndexList& subset) const;

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  Vector measure_;
  std::vector<bool> is_boundary_;
  IndexList interior_;
  IndexList boundary_;
  std::vector<std::vector<std::pair<Index, double>>> adj_;
  std::vector<Eigen::Vector3d> coords_;
};

/// Nested interior subsets M_1 ⊂ M_2 ⊂ ... ⊂ M_J exhausting the host
/// interior. complement(j) plays the role of M_j^* = host ∖ closure(M_j).
struct Exhaustion {
  std::vector<IndexList> levels;

  Index depth() const { return static_cast<Index>(levels.size()); }

  /// Interior nodes outside closure(levels[j]).
  IndexList complement(const Graph& g, Index j) const;

  /// Validates strict nesting, per-level connectivity, and that the last
  /// level equals the host interior. Throws std::invalid_argument.
  static Exhaustion validate(const Graph& g, std::vector<IndexList> levels);
};

// -- builders -----------------------------------------------------------

/// Path with `n_interior` interior nodes (labels 1..n) and Dirichlet
/// endpoints 0 and n+1. Conductance a on every edge, measure m per node.
Graph path_graph(Index n_interior, double a = 1.0, double m = 1.0);

/// 2D box with nx*ny interior lattice nodes and a Dirichlet ring.
Graph box_graph_2d(Index nx, Index ny, double a = 1.0, double m = 1.0);

/// 3D box with nx*ny*nz interior lattice nodes and a Dirichlet shell.
Graph box_graph_3d(Index nx, Index ny, Index nz, double a = 1.0,
                   double m = 1.0);

/// Lattice disk |x| <= radius, Dirichlet rim. measure_power weights the
/// node measure as max(|x|,1)^measure_power; edge conductances take the
/// geometric mean of the endpoint measures, which realizes the radially
/// weighted operator -(1/m) div(m grad u).
Graph disk_graph(double radius, double measure_power = 0.0);

/// Exhaustion by metric balls of the given radii around the coordinate
/// origin (requires coords). The last level is widened to the full
/// interior so that the levels exhaust the host.
Exhaustion radial_exhaustion(const Graph& g, const std::vector<double>& radii);

}  // namespace critlab
