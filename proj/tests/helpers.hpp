#pragma once

#include "critlab/green.hpp"

#include <random>

namespace critlab::testing {

// Random connected instance: a spanning tree on 1..n_interior plus a few
// extra edges, 1-3 boundary nodes attached to random interior nodes,
// conductances and measures in [0.5, 2], nonnegative potential. Drift
// coefficients, when requested, stay below 0.3 * min(a) so the flux matrix
// keeps the M-matrix sign pattern (inverse positivity checked by the
// Green solver anyway).
inline DiscreteOperator random_operator(std::mt19937_64& rng, Index n_interior,
                                        bool with_drift, double c_min = 0.0) {
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  std::uniform_real_distribution<double> drift(0.0, 0.15);
  std::uniform_real_distribution<double> pot(c_min, c_min + 0.5);
  std::uniform_int_distribution<Index> nb(1, 3);

  Index n_boundary = nb(rng);
  Index n = n_interior + n_boundary;
  std::vector<Edge> edges;
  for (Index v = 1; v < n_interior; ++v) {
    std::uniform_int_distribution<Index> up(0, v - 1);
    edges.push_back({up(rng), v, coef(rng)});
  }
  Index extra = n_interior / 3;
  std::uniform_int_distribution<Index> any(0, n_interior - 1);
  for (Index k = 0; k < extra; ++k) {
    Index u = any(rng), v = any(rng);
    bool dup = u == v;
    for (const Edge& e : edges)
      dup = dup || (std::min(e.u, e.v) == std::min(u, v) &&
                    std::max(e.u, e.v) == std::max(u, v));
    if (!dup) edges.push_back({u, v, coef(rng)});
  }
  IndexList boundary;
  for (Index b = 0; b < n_boundary; ++b) {
    boundary.push_back(n_interior + b);
    edges.push_back({any(rng), n_interior + b, coef(rng)});
  }
  Vector m(n);
  for (Index x = 0; x < n; ++x) m[x] = coef(rng);
  Graph g = Graph::build(n, std::move(edges), std::move(m), std::move(boundary));

  std::vector<DirectedCoef> b_coef, bt_coef;
  if (with_drift) {
    for (const Edge& e : g.edges()) {
      if (drift(rng) > 0.075) b_coef.push_back({e.u, e.v, drift(rng)});
      if (drift(rng) > 0.075) bt_coef.push_back({e.v, e.u, drift(rng)});
    }
  }
  Vector c(n);
  for (Index x = 0; x < n; ++x) c[x] = pot(rng);
  return DiscreteOperator::build(std::move(g), std::move(b_coef), std::move(bt_coef),
                                 std::move(c));
}

inline Vector random_node_function(std::mt19937_64& rng, Index n, double lo,
                                   double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Index x = 0; x < n; ++x) v[x] = u(rng);
  return v;
}

}  // namespace critlab::testing
