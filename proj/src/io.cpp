#include "critlab/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>

namespace critlab {

namespace {

Vector node_function(const json& j, Index n, const char* what) {
  if (j.is_number()) return Vector::Constant(n, j.get<double>());
  if (j.is_array()) {
    if (static_cast<Index>(j.size()) != n)
      throw ConfigError(std::string(what) + ": array length != node count");
    Vector v(n);
    for (Index k = 0; k < n; ++k) v[k] = j[static_cast<size_t>(k)].get<double>();
    return v;
  }
  throw ConfigError(std::string(what) + ": expected number or array");
}

std::vector<DirectedCoef> drift_list(const json& j) {
  std::vector<DirectedCoef> out;
  for (const auto& d : j) {
    out.push_back({d.at("from").get<Index>(), d.at("to").get<Index>(),
                   d.at("value").get<double>()});
  }
  return out;
}

Graph grid_from_json(const json& g) {
  std::string kind = g.at("kind").get<std::string>();
  double a = g.value("a", 1.0);
  double m = g.value("m", 1.0);
  if (kind == "path") return path_graph(g.at("interior").get<Index>(), a, m);
  if (kind == "box2d")
    return box_graph_2d(g.at("nx").get<Index>(), g.at("ny").get<Index>(), a, m);
  if (kind == "box3d")
    return box_graph_3d(g.at("nx").get<Index>(), g.at("ny").get<Index>(),
                        g.at("nz").get<Index>(), a, m);
  if (kind == "disk")
    return disk_graph(g.at("radius").get<double>(), g.value("measure_power", 0.0));
  throw ConfigError("grid: unknown kind '" + kind + "'");
}

}  // namespace

DiscreteOperator operator_from_json(const json& spec) {
  Graph graph;
  if (spec.contains("grid")) {
    graph = grid_from_json(spec.at("grid"));
  } else {
    Index n = spec.at("nodes").get<Index>();
    std::vector<Edge> edges;
    for (const auto& e : spec.at("edges"))
      edges.push_back({e.at("u").get<Index>(), e.at("v").get<Index>(),
                       e.value("a", 1.0)});
    Vector m = node_function(spec.value("m", json(1.0)), n, "m");
    IndexList boundary;
    for (const auto& b : spec.at("boundary")) boundary.push_back(b.get<Index>());
    graph = Graph::build(n, std::move(edges), std::move(m), std::move(boundary));
  }
  Vector c = node_function(spec.value("c", json(0.0)), graph.size(), "c");
  std::vector<DirectedCoef> b, bt;
  if (spec.contains("drift_b")) b = drift_list(spec.at("drift_b"));
  if (spec.contains("drift_b_tilde")) bt = drift_list(spec.at("drift_b_tilde"));
  if (spec.contains("drift") && spec.at("drift").contains("radial")) {
    auto rd = radial_upwind_drift(graph, spec.at("drift").at("radial").get<double>());
    b.insert(b.end(), rd.begin(), rd.end());
  }
  return DiscreteOperator::build(std::move(graph), std::move(b), std::move(bt),
                                 std::move(c));
}

DiscreteOperator load_operator(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open operator file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + file.string() + ": " + e.what());
  }
  return operator_from_json(j);
}

Exhaustion exhaustion_from_json(const Graph& g, const json& spec) {
  if (spec.contains("radii")) {
    std::vector<double> radii;
    for (const auto& r : spec.at("radii")) radii.push_back(r.get<double>());
    return radial_exhaustion(g, radii);
  }
  if (spec.contains("levels")) {
    std::vector<IndexList> levels;
    for (const auto& lvl : spec.at("levels")) {
      IndexList l;
      for (const auto& x : lvl) l.push_back(x.get<Index>());
      levels.push_back(std::move(l));
    }
    return Exhaustion::validate(g, std::move(levels));
  }
  throw ConfigError("exhaustion: expected 'radii' or 'levels'");
}

std::uint64_t domain_hash(const IndexList& domain) {
  std::uint64_t h = 1469598103934665603ull;
  for (Index x : domain) {
    auto v = static_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

void write_green_csv(const std::filesystem::path& file, const GreenMatrix& G) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << "x,y,value\n";
  for (Index i = 0; i < G.dim(); ++i)
    for (Index j = 0; j < G.dim(); ++j)
      out << G.domain[static_cast<size_t>(i)] << ',' << G.domain[static_cast<size_t>(j)]
          << ',' << format_double(G.values(i, j)) << '\n';
}

void write_green_binary(const std::filesystem::path& file, const GreenMatrix& G,
                        double tolerance) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  const char magic[4] = {'C', 'L', 'G', 'B'};
  std::uint32_t version = 1;
  std::uint32_t n = static_cast<std::uint32_t>(G.dim());
  std::uint64_t hash = domain_hash(G.domain);
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&hash), 8);
  out.write(reinterpret_cast<const char*>(&tolerance), 8);
  for (Index i = 0; i < G.dim(); ++i) {
    std::int64_t id = G.domain[static_cast<size_t>(i)];
    out.write(reinterpret_cast<const char*>(&id), 8);
  }
  for (Index i = 0; i < G.dim(); ++i)
    for (Index j = 0; j < G.dim(); ++j) {
      double v = G.values(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

GreenMatrix read_green_binary(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + file.string());
  char magic[4];
  std::uint32_t version = 0, n = 0;
  std::uint64_t hash = 0;
  double tol = 0;
  in.read(magic, 4);
  if (std::memcmp(magic, "CLGB", 4) != 0)
    throw ConfigError("bad magic in " + file.string());
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&hash), 8);
  in.read(reinterpret_cast<char*>(&tol), 8);
  GreenMatrix G;
  G.domain.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::int64_t id;
    in.read(reinterpret_cast<char*>(&id), 8);
    G.domain[i] = id;
  }
  if (domain_hash(G.domain) != hash)
    throw ConfigError("domain hash mismatch in " + file.string());
  G.values.resize(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      G.values(i, j) = v;
    }
  if (!in) throw ConfigError("truncated file " + file.string());
  return G;
}

void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  for (size_t k = 0; k < header.size(); ++k)
    out << header[k] << (k + 1 < header.size() ? ',' : '\n');
  for (const auto& row : rows)
    for (size_t k = 0; k < row.size(); ++k)
      out << format_double(row[k]) << (k + 1 < row.size() ? ',' : '\n');
}

}  // namespace critlab
