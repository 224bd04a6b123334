#include "critlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace critlab {

namespace {

void bfs(const std::vector<std::vector<std::pair<Index, double>>>& adj,
         const std::vector<char>& allowed, Index start,
         std::vector<char>& seen) {
  std::vector<Index> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    for (auto [y, a] : adj[x]) {
      (void)a;
      if (allowed[y] && !seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
}

}  // namespace

Graph Graph::build(Index n, std::vector<Edge> edges, Vector measure,
                   IndexList boundary, std::vector<Eigen::Vector3d> coords) {
  if (n <= 0) throw std::invalid_argument("graph: empty node set");
  if (measure.size() != n)
    throw std::invalid_argument("graph: measure size mismatch");
  for (Index x = 0; x < n; ++x) {
    if (!(measure[x] > 0.0) || !std::isfinite(measure[x]))
      throw std::invalid_argument("graph: nonpositive or non-finite measure at node " +
                                  std::to_string(x));
  }
  if (!coords.empty() && static_cast<Index>(coords.size()) != n)
    throw std::invalid_argument("graph: coords size mismatch");

  Graph g;
  g.n_ = n;
  g.measure_ = std::move(measure);
  g.coords_ = std::move(coords);
  g.is_boundary_.assign(static_cast<size_t>(n), false);
  for (Index b : boundary) {
    if (b < 0 || b >= n) throw std::invalid_argument("graph: boundary node out of range");
    g.is_boundary_[static_cast<size_t>(b)] = true;
  }
  g.adj_.resize(static_cast<size_t>(n));
  std::set<std::pair<Index, Index>> seen_edges;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
      throw std::invalid_argument("graph: bad edge endpoints");
    if (!(e.a > 0.0) || !std::isfinite(e.a))
      throw std::invalid_argument("graph: nonpositive conductance on edge (" +
                                  std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    auto key = std::minmax(e.u, e.v);
    if (!seen_edges.insert(key).second)
      throw std::invalid_argument("graph: duplicate edge");
    g.adj_[static_cast<size_t>(e.u)].push_back({e.v, e.a});
    g.adj_[static_cast<size_t>(e.v)].push_back({e.u, e.a});
  }
  g.edges_ = std::move(edges);

  for (Index x = 0; x < n; ++x) {
    if (g.is_boundary_[static_cast<size_t>(x)])
      g.boundary_.push_back(x);
    else
      g.interior_.push_back(x);
  }
  if (g.interior_.empty()) throw std::invalid_argument("graph: empty interior");

  // connectivity of interior ∪ boundary (i.e. the whole graph)
  {
    std::vector<char> allowed(static_cast<size_t>(n), 1), seen(static_cast<size_t>(n), 0);
    bfs(g.adj_, allowed, 0, seen);
    if (std::count(seen.begin(), seen.end(), 1) != n)
      throw std::invalid_argument("graph: node set is disconnected");
  }
  // interior connectivity (Dirichlet problems need an irreducible interior)
  if (!g.connected(g.interior_))
    throw std::invalid_argument("graph: disconnected interior");
  return g;
}

bool Graph::connected(const IndexList& subset) const {
  if (subset.empty()) return false;
  std::vector<char> allowed(static_cast<size_t>(n_), 0), seen(static_cast<size_t>(n_), 0);
  for (Index x : subset) allowed[static_cast<size_t>(x)] = 1;
  bfs(adj_, allowed, subset.front(), seen);
  for (Index x : subset)
    if (!seen[static_cast<size_t>(x)]) return false;
  return true;
}

IndexList Graph::closure(const IndexList& subset) const {
  std::vector<char> in(static_cast<size_t>(n_), 0);
  for (Index x : subset) in[static_cast<size_t>(x)] = 1;
  for (Index x : subset)
    for (auto [y, a] : adj_[static_cast<size_t>(x)]) {
      (void)a;
      in[static_cast<size_t>(y)] = 1;
    }
  IndexList out;
  for (Index x = 0; x < n_; ++x)
    if (in[static_cast<size_t>(x)]) out.push_back(x);
  return out;
}

IndexList Exhaustion::complement(const Graph& g, Index j) const {
  IndexList clo = g.closure(levels.at(static_cast<size_t>(j)));
  std::vector<char> in(static_cast<size_t>(g.size()), 0);
  for (Index x : clo) in[static_cast<size_t>(x)] = 1;
  IndexList out;
  for (Index x : g.interior())
    if (!in[static_cast<size_t>(x)]) out.push_back(x);
  return out;
}

Exhaustion Exhaustion::validate(const Graph& g, std::vector<IndexList> levels) {
  if (levels.empty()) throw std::invalid_argument("exhaustion: no levels");
  for (auto& lvl : levels) {
    std::sort(lvl.begin(), lvl.end());
    if (lvl.empty()) throw std::invalid_argument("exhaustion: empty level");
    for (Index x : lvl)
      if (g.is_boundary(x))
        throw std::invalid_argument("exhaustion: level contains boundary node");
    if (!g.connected(lvl))
      throw std::invalid_argument("exhaustion: disconnected level");
  }
  for (size_t j = 0; j + 1 < levels.size(); ++j) {
    if (!std::includes(levels[j + 1].begin(), levels[j + 1].end(),
                       levels[j].begin(), levels[j].end()) ||
        levels[j + 1].size() <= levels[j].size())
      throw std::invalid_argument("exhaustion: levels not strictly nested");
  }
  IndexList interior = g.interior();
  std::sort(interior.begin(), interior.end());
  if (levels.back() != interior)
    throw std::invalid_argument("exhaustion: union of levels must equal host interior");
  Exhaustion e;
  e.levels = std::move(levels);
  return e;
}

Graph path_graph(Index n_interior, double a, double m) {
  if (n_interior < 1) throw std::invalid_argument("path_graph: need >= 1 interior node");
  Index n = n_interior + 2;
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, a});
  std::vector<Eigen::Vector3d> coords;
  double mid = 0.5 * static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i)
    coords.emplace_back(static_cast<double>(i) - mid, 0.0, 0.0);
  return Graph::build(n, std::move(edges), Vector::Constant(n, m), {0, n - 1},
                      std::move(coords));
}

namespace {

Graph lattice_box(const std::vector<Index>& dims, double a, double m) {
  // interior lattice 1..dims[k], Dirichlet shell at 0 and dims[k]+1
  std::vector<Index> ext(dims.size());
  Index n = 1;
  for (size_t k = 0; k < dims.size(); ++k) {
    ext[k] = dims[k] + 2;
    n *= ext[k];
  }
  auto flat = [&](const std::vector<Index>& c) {
    Index f = 0;
    for (size_t k = 0; k < c.size(); ++k) f = f * ext[k] + c[k];
    return f;
  };
  std::vector<Edge> edges;
  IndexList boundary;
  std::vector<Eigen::Vector3d> coords(static_cast<size_t>(n), Eigen::Vector3d::Zero());
  std::vector<Index> c(dims.size(), 0);
  std::vector<char> is_int(static_cast<size_t>(n), 0);
  // enumerate nodes
  for (Index f = 0; f < n; ++f) {
    Index rem = f;
    for (size_t k = dims.size(); k-- > 0;) {
      c[k] = rem % ext[k];
      rem /= ext[k];
    }
    bool interior = true, corner = false;
    for (size_t k = 0; k < dims.size(); ++k) {
      if (c[k] == 0 || c[k] == ext[k] - 1) interior = false;
      // skip shell nodes touching more than one face: they carry no edge
      // into the interior and would disconnect the graph
    }
    int faces = 0;
    for (size_t k = 0; k < dims.size(); ++k)
      if (c[k] == 0 || c[k] == ext[k] - 1) ++faces;
    corner = faces > 1;
    is_int[static_cast<size_t>(f)] = interior && !corner ? 1 : (corner ? 2 : 0);
    Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
    for (size_t k = 0; k < dims.size(); ++k)
      xyz[static_cast<Eigen::Index>(k)] =
          static_cast<double>(c[k]) - 0.5 * static_cast<double>(ext[k] - 1);
    coords[static_cast<size_t>(f)] = xyz;
  }
  // compress out the corner shell nodes
  std::vector<Index> remap(static_cast<size_t>(n), -1);
  Index nn = 0;
  for (Index f = 0; f < n; ++f)
    if (is_int[static_cast<size_t>(f)] != 2) remap[static_cast<size_t>(f)] = nn++;
  std::vector<Eigen::Vector3d> coords2;
  coords2.reserve(static_cast<size_t>(nn));
  for (Index f = 0; f < n; ++f)
    if (remap[static_cast<size_t>(f)] >= 0) coords2.push_back(coords[static_cast<size_t>(f)]);
  for (Index f = 0; f < n; ++f) {
    if (remap[static_cast<size_t>(f)] < 0) continue;
    Index rem = f;
    for (size_t k = dims.size(); k-- > 0;) {
      c[k] = rem % ext[k];
      rem /= ext[k];
    }
    if (is_int[static_cast<size_t>(f)] == 0) boundary.push_back(remap[static_cast<size_t>(f)]);
    for (size_t k = 0; k < dims.size(); ++k) {
      if (c[k] + 1 >= ext[k]) continue;
      std::vector<Index> d = c;
      d[k] += 1;
      Index f2 = flat(d);
      if (remap[static_cast<size_t>(f2)] < 0) continue;
      // only keep edges with at least one interior endpoint
      if (is_int[static_cast<size_t>(f)] == 1 || is_int[static_cast<size_t>(f2)] == 1)
        edges.push_back({remap[static_cast<size_t>(f)], remap[static_cast<size_t>(f2)], a});
    }
  }
  return Graph::build(nn, std::move(edges), Vector::Constant(nn, m), std::move(boundary),
                      std::move(coords2));
}

}  // namespace

Graph box_graph_2d(Index nx, Index ny, double a, double m) {
  return lattice_box({nx, ny}, a, m);
}

Graph box_graph_3d(Index nx, Index ny, Index nz, double a, double m) {
  return lattice_box({nx, ny, nz}, a, m);
}

Graph disk_graph(double radius, double measure_power) {
  if (radius < 2) throw std::invalid_argument("disk_graph: radius too small");
  Index r = static_cast<Index>(std::floor(radius)) + 1;
  std::map<std::pair<Index, Index>, Index> id;
  std::vector<Eigen::Vector3d> coords;
  auto inside = [&](Index i, Index j) {
    return std::hypot(static_cast<double>(i), static_cast<double>(j)) <= radius;
  };
  for (Index i = -r; i <= r; ++i)
    for (Index j = -r; j <= r; ++j)
      if (inside(i, j)) {
        id[{i, j}] = static_cast<Index>(coords.size());
        coords.emplace_back(static_cast<double>(i), static_cast<double>(j), 0.0);
      }
  Index n = static_cast<Index>(coords.size());
  Vector m(n);
  for (Index k = 0; k < n; ++k) {
    double rr = std::max(coords[static_cast<size_t>(k)].norm(), 1.0);
    m[k] = std::pow(rr, measure_power);
  }
  std::vector<Edge> edges;
  IndexList boundary;
  for (auto& [ij, k] : id) {
    auto [i, j] = ij;
    bool rim = !inside(i + 1, j) || !inside(i - 1, j) || !inside(i, j + 1) ||
               !inside(i, j - 1);
    if (rim) boundary.push_back(k);
    for (auto [di, dj] : {std::pair<Index, Index>{1, 0}, {0, 1}}) {
      auto it = id.find({i + di, j + dj});
      if (it != id.end())
        edges.push_back({k, it->second, std::sqrt(m[k] * m[it->second])});
    }
  }
  return Graph::build(n, std::move(edges), std::move(m), std::move(boundary),
                      std::move(coords));
}

Exhaustion radial_exhaustion(const Graph& g, const std::vector<double>& radii) {
  if (!g.has_coords())
    throw std::invalid_argument("radial_exhaustion: graph has no coordinates");
  std::vector<IndexList> levels;
  for (size_t j = 0; j < radii.size(); ++j) {
    IndexList lvl;
    for (Index x : g.interior())
      if (g.coords()[static_cast<size_t>(x)].norm() <= radii[j]) lvl.push_back(x);
    levels.push_back(std::move(lvl));
  }
  levels.back() = g.interior();
  return Exhaustion::validate(g, std::move(levels));
}

}  // namespace critlab
