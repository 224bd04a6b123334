#include "critlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace critlab {

namespace {

std::map<std::pair<Index, Index>, double> coef_map(
    const std::vector<DirectedCoef>& coefs, Index n) {
  std::map<std::pair<Index, Index>, double> m;
  for (const auto& d : coefs) {
    if (d.from < 0 || d.from >= n || d.to < 0 || d.to >= n || d.from == d.to)
      throw std::invalid_argument("operator: drift coefficient off the node set");
    m[{d.from, d.to}] += d.value;
  }
  return m;
}

}  // namespace

DiscreteOperator DiscreteOperator::build(Graph graph,
                                         std::vector<DirectedCoef> drift_b,
                                         std::vector<DirectedCoef> drift_b_tilde,
                                         Vector potential) {
  Index n = graph.size();
  if (potential.size() != n)
    throw std::invalid_argument("operator: potential size mismatch");

  // drift entries must sit on graph edges
  std::map<std::pair<Index, Index>, double> amap;
  for (const Edge& e : graph.edges()) {
    amap[{e.u, e.v}] = e.a;
    amap[{e.v, e.u}] = e.a;
  }
  auto bmap = coef_map(drift_b, n);
  auto btmap = coef_map(drift_b_tilde, n);
  for (const auto& [k, v] : bmap)
    if (!amap.count(k))
      throw std::invalid_argument("operator: drift b on a non-edge");
  for (const auto& [k, v] : btmap)
    if (!amap.count(k))
      throw std::invalid_argument("operator: drift b-tilde on a non-edge");

  DiscreteOperator op;
  op.graph_ = std::move(graph);
  op.drift_b_ = std::move(drift_b);
  op.drift_bt_ = std::move(drift_b_tilde);
  op.potential_ = std::move(potential);

  // symmetric iff the two drift families coincide entrywise
  op.symmetric_ = true;
  for (const auto& [k, v] : bmap) {
    auto it = btmap.find(k);
    if (std::abs(v - (it == btmap.end() ? 0.0 : it->second)) > 0.0) {
      op.symmetric_ = false;
      break;
    }
  }
  if (op.symmetric_)
    for (const auto& [k, v] : btmap)
      if (!bmap.count(k) && v != 0.0) {
        op.symmetric_ = false;
        break;
      }

  // assemble K = diag(m)·P; identity rows scaled by m on the boundary
  Matrix K = Matrix::Zero(n, n);
  const Graph& g = op.graph_;
  for (Index x : g.interior()) {
    for (auto [y, a] : g.neighbors(x)) {
      K(x, x) += a;
      K(x, y) -= a;
    }
    K(x, x) += g.measure(x) * op.potential_[x];
  }
  for (const auto& [k, v] : bmap) {
    auto [x, y] = k;
    if (g.is_boundary(x)) continue;  // b acts on the row of its tail
    K(x, x) += v;
    K(x, y) -= v;
  }
  for (const auto& [k, v] : btmap) {
    auto [x, y] = k;
    if (!g.is_boundary(x)) K(x, x) += v;  // outflow at the tail
    if (!g.is_boundary(y)) K(y, x) -= v;  // arrival at the head
  }
  for (Index x : g.boundary()) K(x, x) = g.measure(x);
  op.flux_ = std::move(K);
  return op;
}

Vector DiscreteOperator::apply(const Vector& u) const {
  if (u.size() != graph_.size())
    throw std::invalid_argument("apply: dimension mismatch");
  Vector out = flux_ * u;
  out.array() /= graph_.measure().array();
  return out;
}

DiscreteOperator DiscreteOperator::adjoint() const {
  return build(graph_, drift_bt_, drift_b_, potential_);
}

Matrix DiscreteOperator::matrix() const {
  return graph_.measure().cwiseInverse().asDiagonal() * flux_;
}

Matrix DiscreteOperator::weighted_interior(const IndexList& domain) const {
  for (Index x : domain)
    if (graph_.is_boundary(x))
      throw std::invalid_argument("weighted_interior: domain touches the boundary");
  return flux_(domain, domain);
}

Vector DiscreteOperator::harmonic_extension(const Vector& boundary_values) const {
  const IndexList& I = graph_.interior();
  const IndexList& B = graph_.boundary();
  if (boundary_values.size() != static_cast<Index>(B.size()))
    throw std::invalid_argument("harmonic_extension: boundary value count mismatch");
  Matrix KII = flux_(I, I);
  Matrix KIB = flux_(I, B);
  Vector uI = KII.partialPivLu().solve(-KIB * boundary_values);
  Vector u = Vector::Zero(graph_.size());
  for (size_t k = 0; k < I.size(); ++k) u[I[k]] = uI[static_cast<Index>(k)];
  for (size_t k = 0; k < B.size(); ++k) u[B[k]] = boundary_values[static_cast<Index>(k)];
  return u;
}

namespace {

EllipticityReport::Row region_row(const std::string& name,
                                  const std::vector<double>& values) {
  EllipticityReport::Row row;
  row.region = name;
  if (values.empty()) return row;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  row.a_min = *lo;
  row.a_max = *hi;
  row.violation = !(*lo > 0.0);
  row.ratio = row.violation ? std::numeric_limits<double>::infinity()
                            : row.a_max / row.a_min;
  return row;
}

}  // namespace

EllipticityReport check_ellipticity(const std::vector<Edge>& edges,
                                    const std::optional<Exhaustion>& subsets,
                                    const Graph* graph) {
  EllipticityReport rep;
  std::vector<double> all;
  all.reserve(edges.size());
  for (const Edge& e : edges) all.push_back(e.a);
  rep.rows.push_back(region_row("all", all));
  if (subsets && graph) {
    for (Index j = 0; j < subsets->depth(); ++j) {
      std::vector<char> in(static_cast<size_t>(graph->size()), 0);
      for (Index x : subsets->levels[static_cast<size_t>(j)])
        in[static_cast<size_t>(x)] = 1;
      std::vector<double> vals;
      for (const Edge& e : edges)
        if (in[static_cast<size_t>(e.u)] && in[static_cast<size_t>(e.v)])
          vals.push_back(e.a);
      if (!vals.empty())
        rep.rows.push_back(region_row("level_" + std::to_string(j), vals));
    }
  }
  for (const auto& r : rep.rows) rep.any_violation = rep.any_violation || r.violation;
  return rep;
}

EllipticityReport check_ellipticity(const DiscreteOperator& op,
                                    const std::optional<Exhaustion>& subsets) {
  return check_ellipticity(op.graph().edges(), subsets, &op.graph());
}

std::vector<DirectedCoef> radial_upwind_drift(const Graph& g, double kappa) {
  if (!g.has_coords())
    throw std::invalid_argument("radial_upwind_drift: graph has no coordinates");
  std::vector<DirectedCoef> out;
  for (Index x : g.interior()) {
    double rx = g.coords()[static_cast<size_t>(x)].norm();
    if (rx == 0.0) continue;
    Index best = -1;
    double best_r = rx;
    for (auto [y, a] : g.neighbors(x)) {
      (void)a;
      double ry = g.coords()[static_cast<size_t>(y)].norm();
      if (ry < best_r - 1e-12) {
        best_r = ry;
        best = y;
      }
    }
    if (best >= 0) out.push_back({x, best, kappa / rx});
  }
  return out;
}

}  // namespace critlab
