#include "critlab/perturbation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace critlab {

namespace {

Vector localize(const GreenMatrix& G, const Vector& host_values) {
  Vector out(G.dim());
  for (Index k = 0; k < G.dim(); ++k) out[k] = host_values[G.domain[static_cast<size_t>(k)]];
  return out;
}

// G * diag(V m), the kernel of all iterated/Neumann machinery
Matrix weighted_kernel(const GreenMatrix& G, const Vector& V, const Vector& m) {
  Vector v = localize(G, V);
  Vector mm = localize(G, m);
  return G.values * (v.array() * mm.array()).matrix().asDiagonal();
}

double sym_gap(const Matrix& G) {
  return (G - G.transpose()).cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff();
}

}  // namespace

double three_g_constant(const GreenMatrix& G, const Vector& V, const Vector& m) {
  Matrix num = weighted_kernel(G, V.cwiseAbs(), m) * G.values;
  return (num.array() / G.values.array()).maxCoeff();
}

std::vector<double> semismall_profile(const GreenMatrix& G, const Vector& V,
                                      const Vector& m, const Graph& host,
                                      const Exhaustion& exhaustion, Index anchor) {
  Index x0 = G.local(anchor);
  if (x0 < 0 || host.is_boundary(anchor))
    throw std::invalid_argument("semismall_profile: anchor must be interior to the domain");
  Vector vm = (localize(G, V.cwiseAbs()).array() * localize(G, m).array()).matrix();
  std::vector<double> out;
  for (Index j = 0; j < exhaustion.depth(); ++j) {
    IndexList tail = exhaustion.complement(host, j);
    double s = 0.0;
    for (Index y : tail) {
      Index ly = G.local(y);
      if (ly < 0) continue;
      double acc = 0.0;
      for (Index z : tail) {
        Index lz = G.local(z);
        if (lz < 0) continue;
        acc += G.values(x0, lz) * vm[lz] * G.values(lz, ly);
      }
      s = std::max(s, acc / G.values(x0, ly));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> small_profile(const GreenMatrix& G, const Vector& V,
                                  const Vector& m, const Graph& host,
                                  const Exhaustion& exhaustion) {
  Vector vm = (localize(G, V.cwiseAbs()).array() * localize(G, m).array()).matrix();
  std::vector<double> out;
  for (Index j = 0; j < exhaustion.depth(); ++j) {
    IndexList tail = exhaustion.complement(host, j);
    IndexList loc;
    for (Index x : tail) {
      Index lx = G.local(x);
      if (lx >= 0) loc.push_back(lx);
    }
    double s = 0.0;
    for (Index lx : loc)
      for (Index ly : loc) {
        double acc = 0.0;
        for (Index lz : loc) acc += G.values(lx, lz) * vm[lz] * G.values(lz, ly);
        s = std::max(s, acc / G.values(lx, ly));
      }
    out.push_back(s);
  }
  return out;
}

namespace {

template <typename Fn>
void scan_triples(Index n, TripleScanOptions* opts, Fn&& visit) {
  TripleScanOptions local;
  TripleScanOptions& o = opts ? *opts : local;
  double total = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  if (n <= o.exhaustive_cap) {
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        for (Index z = 0; z < n; ++z) visit(x, y, z);
    o.coverage = 1.0;
    return;
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (Index s = 0; s < o.samples; ++s) visit(pick(rng), pick(rng), pick(rng));
  o.coverage = std::min(1.0, static_cast<double>(o.samples) / total);
}

}  // namespace

double quasimetric_constant(const GreenMatrix& G, TripleScanOptions* opts) {
  if (sym_gap(G.values) > 1e-8)
    throw std::invalid_argument(
        "quasimetric_constant: kernel is not symmetric; symmetrize the operator "
        "or skip the quasimetric diagnostics");
  const Matrix& g = G.values;
  double C = 0.0;
  scan_triples(G.dim(), opts, [&](Index x, Index y, Index z) {
    double d_xy = 1.0 / g(x, y);
    double d_xz = 1.0 / g(x, z);
    double d_zy = 1.0 / g(z, y);
    C = std::max(C, d_xy / (d_xz + d_zy));
  });
  return C;
}

std::vector<Matrix> iterated_kernels(const GreenMatrix& G, const Vector& V,
                                     const Vector& m, int i_max) {
  if (i_max < 1) throw std::invalid_argument("iterated_kernels: i_max must be >= 1");
  double C0 = three_g_constant(G, V, m);
  Matrix kernel = weighted_kernel(G, V, m);
  std::vector<Matrix> out;
  out.push_back(G.values);
  double scale = G.values.maxCoeff();
  for (int i = 1; i <= i_max; ++i) {
    out.push_back(kernel * out.back());
    double pow_bound = std::pow(C0, i);
    double worst =
        (out.back().cwiseAbs() - pow_bound * G.values).maxCoeff() / (pow_bound * scale);
    if (worst > 1e-10)
      throw MaximumPrincipleError("iterated kernel exceeds the C0^i G bound");
  }
  return out;
}

NeumannResult neumann_series(const GreenMatrix& G, const Vector& V,
                             const Vector& m, double eps, double tol) {
  Matrix kernel = weighted_kernel(G, V, m);
  NeumannResult res;
  res.spectral_radius = kernel.eigenvalues().cwiseAbs().maxCoeff();
  double C0 = three_g_constant(G, V, m);
  double q = C0 * std::abs(eps);
  if (std::abs(eps) * res.spectral_radius >= 1.0) {
    res.converged = false;
    res.H = G.values;
    res.tail_bound = std::numeric_limits<double>::infinity();
    return res;
  }
  double scale = G.values.maxCoeff();
  Matrix term = G.values;
  Matrix H = G.values;
  int i = 0;
  // hard cap well past any admissible contraction rate
  while (i < 10000) {
    term = eps * (kernel * term);
    ++i;
    H += term;
    if (term.cwiseAbs().maxCoeff() < tol * scale) break;
  }
  res.H = std::move(H);
  res.iterations = i;
  res.converged = true;
  res.tail_bound = q < 1.0 ? std::pow(q, i + 1) / (1.0 - q)
                           : std::numeric_limits<double>::infinity();
  return res;
}

double resolvent_residual(const GreenMatrix& G, const Matrix& H, const Vector& V,
                          const Vector& m, double eps) {
  Matrix rhs = G.values + eps * (H * (localize(G, V).array() * localize(G, m).array())
                                         .matrix()
                                         .asDiagonal() *
                                 G.values);
  return (H - rhs).cwiseAbs().maxCoeff() / G.values.maxCoeff();
}

SandwichReport sandwich_check(const GreenMatrix& G, const Matrix& G_pert,
                              double eps, double C0) {
  SandwichReport rep;
  double q = C0 * std::abs(eps);
  rep.lower_factor = q < 0.5 ? (1.0 - 2.0 * q) / (1.0 - q) : 0.0;
  rep.upper_factor = q < 1.0 ? 1.0 / (1.0 - q) : std::numeric_limits<double>::infinity();
  Matrix rel_lo = (G_pert - rep.lower_factor * G.values).array() / G.values.array();
  rep.lower_margin = rel_lo.minCoeff();
  rep.lower_ok = rep.lower_margin >= -1e-12;
  if (std::isfinite(rep.upper_factor)) {
    Matrix rel_hi = (rep.upper_factor * G.values - G_pert).array() / G.values.array();
    rep.upper_margin = rel_hi.minCoeff();
    rep.upper_ok = rep.upper_margin >= -1e-12;
  } else {
    rep.upper_margin = std::numeric_limits<double>::infinity();
    rep.upper_ok = true;
  }
  return rep;
}

bool monotone_in_eps(const DiscreteOperator& op, const IndexList& domain,
                     const Vector& W, double eps1, double eps2) {
  if (eps1 > eps2) throw std::invalid_argument("monotone_in_eps: eps1 > eps2");
  if (W.minCoeff() < 0.0)
    throw std::invalid_argument("monotone_in_eps: W must be nonnegative");
  auto perturbed = [&](double eps) {
    DiscreteOperator pe = DiscreteOperator::build(
        op.graph(), op.drift_b(), op.drift_b_tilde(),
        op.potential() - eps * W);
    return dirichlet_green(pe, domain);  // throws if not subcritical
  };
  GreenMatrix G1 = perturbed(eps1);
  GreenMatrix G2 = perturbed(eps2);
  return ((G2.values - G1.values).array() >= -1e-10 * G2.values.array()).all();
}

std::vector<EquivalencePoint> equivalence_interval(const DiscreteOperator& op,
                                                   const IndexList& domain,
                                                   const Vector& W,
                                                   const std::vector<double>& lambda_grid,
                                                   const IndexList& window) {
  GreenMatrix G = dirichlet_green(op, domain);
  IndexList win_local;
  for (Index x : window) {
    Index k = G.local(x);
    if (k < 0) throw std::invalid_argument("equivalence_interval: window off the domain");
    win_local.push_back(k);
  }
  std::vector<EquivalencePoint> out;
  for (double lam : lambda_grid) {
    EquivalencePoint pt;
    pt.lambda = lam;
    try {
      DiscreteOperator pe = DiscreteOperator::build(
          op.graph(), op.drift_b(), op.drift_b_tilde(), op.potential() - lam * W);
      GreenMatrix Gl = dirichlet_green(pe, domain);
      Matrix q = Gl.values.array() / G.values.array();
      if (!win_local.empty()) q = q(win_local, win_local).eval();
      pt.ratio = q.maxCoeff() / q.minCoeff();
      pt.verdict = "equivalent";
    } catch (const std::runtime_error&) {
      pt.ratio = 0.0;
      pt.verdict = "skipped: not subcritical at this lambda";
    }
    out.push_back(pt);
  }
  return out;
}

SchurReport schur_bound(const GreenMatrix& G, const Vector& W, const Vector& m,
                        const Vector& u, double E0, double delta, double lambda0) {
  SchurReport rep;
  Vector w = localize(G, W);
  Vector mm = localize(G, m);
  Vector uu = localize(G, u);
  if (w.minCoeff() < 0.0) throw std::invalid_argument("schur_bound: W must be >= 0");
  if (w.maxCoeff() == 0.0) {
    rep.certified = true;
    return rep;  // T = 0
  }
  if (uu.minCoeff() <= 0.0)
    throw std::invalid_argument("schur_bound: test function must be positive");

  Vector wm = (w.array() * mm.array()).matrix();
  Vector row = G.values * (uu.array() * wm.array()).matrix();
  Vector col = G.values.transpose() * (uu.array() * wm.array()).matrix();
  rep.row_margin = (uu / lambda0 - row).minCoeff();
  rep.col_margin = (uu / lambda0 - col).minCoeff();
  double slack = 1e-10 * uu.maxCoeff() / lambda0;  // numerical slack, never a waiver
  rep.certified = rep.row_margin >= -slack && rep.col_margin >= -slack;
  if (rep.certified) rep.bound = (E0 + delta) / lambda0;

  // true norm on L^2(W dm), restricted to supp W
  IndexList supp;
  for (Index k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) supp.push_back(k);
  Index s = static_cast<Index>(supp.size());
  Matrix T(s, s);
  for (Index i = 0; i < s; ++i)
    for (Index j = 0; j < s; ++j) {
      double di = std::sqrt(wm[supp[static_cast<size_t>(i)]]);
      double dj = std::sqrt(wm[supp[static_cast<size_t>(j)]]);
      T(i, j) = (E0 + delta) * di *
                G.values(supp[static_cast<size_t>(i)], supp[static_cast<size_t>(j)]) * dj;
    }
  Eigen::JacobiSVD<Matrix> svd(T);
  rep.true_norm = svd.singularValues()[0];
  return rep;
}

QuasimetricCheck quasimetric_3g_check(const GreenMatrix& G, TripleScanOptions* opts) {
  QuasimetricCheck chk;
  chk.constant = quasimetric_constant(G, opts);
  const Matrix& g = G.values;
  double worst = 0.0;
  scan_triples(G.dim(), opts, [&](Index x, Index y, Index z) {
    double lhs = g(x, z) * g(z, y) / g(x, y);
    double rhs = chk.constant * (g(x, z) + g(z, y));
    worst = std::max(worst, lhs / rhs);
  });
  chk.worst_ratio = worst;
  chk.ok = worst <= 1.0 + 1e-12;
  return chk;
}

PerturbationProfile classify_perturbation(const GreenMatrix& G, const Vector& V,
                                          const Vector& m, const Graph& host,
                                          const Exhaustion& exhaustion, Index anchor) {
  PerturbationProfile p;
  p.three_g = three_g_constant(G, V, m);
  p.g_bounded = std::isfinite(p.three_g);
  p.semismall_tail = semismall_profile(G, V, m, host, exhaustion, anchor);
  p.small_tail = small_profile(G, V, m, host, exhaustion);
  p.quasimetric = sym_gap(G.values) <= 1e-8 ? quasimetric_constant(G)
                                            : std::numeric_limits<double>::quiet_NaN();
  auto decaying = [](const std::vector<double>& seq) {
    if (seq.size() < 2 || seq.front() == 0.0) return seq.front() == 0.0;
    for (size_t k = 1; k < seq.size(); ++k)
      if (seq[k] > seq[k - 1] * (1.0 + 1e-9)) return false;
    return seq.back() <= 0.5 * seq.front();
  };
  p.semismall_trend = decaying(p.semismall_tail);
  p.small_trend = decaying(p.small_tail);
  return p;
}

}  // namespace critlab
