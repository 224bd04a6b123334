#pragma once

#include "critlab/green.hpp"

#include <json.hpp>

#include <filesystem>

namespace critlab {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds an operator from a JSON description. Two forms:
///   {"grid": {"kind": "path"|"box2d"|"box3d"|"disk", ...}, "c": ..., "drift": ...}
///   {"nodes": n, "m": [...], "c": [...], "edges": [{"u","v","a"}...],
///    "drift_b": [{"from","to","value"}...], "drift_b_tilde": [...],
///    "boundary": [...]}
/// "c" may be a scalar or a per-node array. Grid drift descriptors:
///   {"radial": kappa} puts upwind coefficients kappa/|x| on inward edges.
DiscreteOperator operator_from_json(const json& spec);

DiscreteOperator load_operator(const std::filesystem::path& file);

/// Exhaustion from {"radii": [...]} (coordinate graphs) or
/// {"levels": [[...], ...]} (explicit node lists).
Exhaustion exhaustion_from_json(const Graph& g, const json& spec);

/// FNV-1a over the little-endian bytes of the sorted domain indices.
std::uint64_t domain_hash(const IndexList& domain);

/// (x, y, value) triples, host indices.
void write_green_csv(const std::filesystem::path& file, const GreenMatrix& G);

/// Binary layout: magic "CLGB", u32 version, u32 n, u64 domain hash,
/// f64 tolerance, n indices (i64), then n*n doubles row-major.
void write_green_binary(const std::filesystem::path& file, const GreenMatrix& G,
                        double tolerance);
GreenMatrix read_green_binary(const std::filesystem::path& file);

/// Generic CSV writer; all numbers are printed with max_digits10.
void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

}  // namespace critlab
