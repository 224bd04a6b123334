#include "critlab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace critlab {

HardyConstruction optimal_hardy_weight(const DiscreteOperator& op,
                                       const IndexList& domain,
                                       const Vector& G_phi, const Vector& u) {
  Index n = op.graph().size();
  Vector v = Vector::Zero(n);
  for (Index x : domain) {
    double prod = G_phi[x] * u[x];
    if (!(prod > 0.0))
      throw std::invalid_argument(
          "optimal_hardy_weight: witness sqrt(G_phi u) must be positive on the domain");
    v[x] = std::sqrt(prod);
  }
  Vector Pv = op.apply(v);
  HardyConstruction hc;
  hc.kind = HardyConstruction::Kind::optimal;
  hc.domain = domain;
  hc.witness = v;
  hc.weight = Vector::Zero(n);
  double resid = 0.0;
  double scale = 0.0;
  for (Index x : domain) scale = std::max(scale, std::abs(Pv[x]));
  for (Index x : domain) {
    hc.weight[x] = Pv[x] / v[x];
    if (hc.weight[x] < 0.0) hc.negative_nodes.push_back(x);
    resid = std::max(resid, std::abs(Pv[x] - hc.weight[x] * v[x]));
  }
  hc.identity_residual = scale > 0.0 ? resid / scale : resid;
  return hc;
}

std::pair<double, double> alpha_roots(double lambda) {
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("alpha_roots: lambda must lie in (0,1]");
  double s = std::sqrt(1.0 - lambda);
  return {(1.0 - s) / 2.0, (1.0 + s) / 2.0};
}

std::pair<Vector, Vector> supersolution_pair(const Vector& u, const Vector& G_phi,
                                             double lambda) {
  auto [am, ap] = alpha_roots(lambda);
  Index n = u.size();
  if (G_phi.size() != n)
    throw std::invalid_argument("supersolution_pair: size mismatch");
  Vector hm = Vector::Zero(n), hp = Vector::Zero(n);
  for (Index x = 0; x < n; ++x) {
    if (G_phi[x] == 0.0) continue;
    if (!(u[x] > 0.0) || !(G_phi[x] > 0.0))
      throw std::invalid_argument("supersolution_pair: u and G_phi must be positive");
    hm[x] = std::pow(u[x], 1.0 - am) * std::pow(G_phi[x], am);
    hp[x] = std::pow(u[x], 1.0 - ap) * std::pow(G_phi[x], ap);
  }
  return {hm, hp};
}

HardyConstruction critical_hardy_weight(const GreenMatrix& G, const Vector& mu,
                                        const Vector& m) {
  Vector g_mu_loc = green_potential(G, mu, m);  // rejects mu == 0
  Index n = mu.size();
  HardyConstruction hc;
  hc.kind = HardyConstruction::Kind::critical;
  hc.domain = G.domain;
  hc.weight = Vector::Zero(n);
  hc.witness = Vector::Zero(n);
  for (Index k = 0; k < G.dim(); ++k) {
    Index x = G.domain[static_cast<size_t>(k)];
    hc.witness[x] = g_mu_loc[k];
    hc.weight[x] = mu[x] / g_mu_loc[k];
  }
  hc.identity_residual = 0.0;  // (P - W_mu) G_mu = 0 is algebra: P G_mu = mu = W_mu G_mu
  return hc;
}

double invariance_residual(const GreenMatrix& G, const Vector& W_mu,
                           const Vector& G_mu, const Vector& m) {
  double worst = 0.0;
  Index d = G.dim();
  for (Index i = 0; i < d; ++i) {
    Index x = G.domain[static_cast<size_t>(i)];
    double acc = 0.0;
    for (Index j = 0; j < d; ++j) {
      Index y = G.domain[static_cast<size_t>(j)];
      acc += G.values(i, j) * W_mu[y] * G_mu[y] * m[y];
    }
    worst = std::max(worst, std::abs(acc - G_mu[x]) / G_mu[x]);
  }
  return worst;
}

VmuReport v_mu_comparison(const GreenMatrix& G, const Vector& mu, const Vector& m,
                          const Graph& host, const Exhaustion& exhaustion,
                          Index anchor) {
  Index a = G.local(anchor);
  if (a < 0) throw std::invalid_argument("v_mu_comparison: anchor off the domain");
  Vector g_mu = green_potential(G, mu, m);
  VmuReport rep;
  rep.v_mu = Vector::Zero(mu.size());
  for (Index k = 0; k < G.dim(); ++k) {
    Index x = G.domain[static_cast<size_t>(k)];
    rep.v_mu[x] = mu[x] / G.values(k, a);
  }
  for (Index j = 0; j < exhaustion.depth(); ++j) {
    VmuReport::Tail tail;
    tail.level = j;
    double glo = std::numeric_limits<double>::infinity(), ghi = 0.0;
    double wlo = std::numeric_limits<double>::infinity(), whi = 0.0;
    bool any_w = false;
    for (Index x : exhaustion.complement(host, j)) {
      Index k = G.local(x);
      if (k < 0) continue;
      tail.empty = false;
      double gr = g_mu[k] / G.values(k, a);
      glo = std::min(glo, gr);
      ghi = std::max(ghi, gr);
      if (mu[x] > 0.0) {
        double wr = rep.v_mu[x] / (mu[x] / g_mu[k]);  // V_mu / W_mu = G_mu / G(.,a)
        wlo = std::min(wlo, wr);
        whi = std::max(whi, wr);
        any_w = true;
      }
    }
    if (!tail.empty) {
      tail.g_ratio_min = glo;
      tail.g_ratio_max = ghi;
      if (any_w) {
        tail.w_ratio_min = wlo;
        tail.w_ratio_max = whi;
      }
    }
    rep.tails.push_back(tail);
  }
  // the complements are nested, so the verdict tracks the max of
  // G_mu/G(.,anchor) over DISJOINT annuli: a stable sequence means the
  // ratio is settling toward a two-sided bound, growth means eq_min_gr
  // style comparability fails along the tail
  std::vector<double> ring_max;
  {
    std::vector<char> seen(static_cast<size_t>(mu.size()), 0);
    std::vector<IndexList> comps;
    for (Index j = 0; j < exhaustion.depth(); ++j)
      comps.push_back(exhaustion.complement(host, j));
    for (size_t j = 0; j + 1 <= comps.size(); ++j) {
      // ring j: complement(j) minus complement(j+1)
      std::vector<char> in_next(static_cast<size_t>(mu.size()), 0);
      if (j + 1 < comps.size())
        for (Index x : comps[j + 1]) in_next[static_cast<size_t>(x)] = 1;
      double mx = 0.0;
      bool any = false;
      for (Index x : comps[j]) {
        if (in_next[static_cast<size_t>(x)]) continue;
        Index k = G.local(x);
        if (k < 0) continue;
        mx = std::max(mx, g_mu[k] / G.values(k, a));
        any = true;
      }
      if (any) ring_max.push_back(mx);
    }
  }
  if (ring_max.size() < 2) {
    rep.verdict = "inconclusive";
  } else {
    double last = ring_max.back(), prev = ring_max[ring_max.size() - 2];
    if (last <= 1.5 * prev)
      rep.verdict = "comparable (trend)";
    else if (last >= 3.0 * prev)
      rep.verdict = "not comparable";
    else
      rep.verdict = "inconclusive";
  }
  return rep;
}

std::vector<double> cutoff_tail_norms(const GreenMatrix& G, const Vector& mu,
                                      const Vector& m, const Graph& host,
                                      const Exhaustion& exhaustion, Index anchor) {
  if (exhaustion.depth() < 3)
    throw std::invalid_argument("cutoff_tail_norms: need at least 3 exhaustion levels");
  Index a = G.local(anchor);
  if (a < 0) throw std::invalid_argument("cutoff_tail_norms: anchor off the domain");
  std::vector<double> out;
  for (Index k = 1; k < exhaustion.depth(); ++k) {
    // sharp cutoff: mu_k = mu restricted to the complement of M_{k-1}
    Vector mu_k = Vector::Zero(mu.size());
    for (Index x : exhaustion.complement(host, k - 1)) mu_k[x] = mu[x];
    double t = 0.0;
    if (mu_k.maxCoeff() > 0.0) {
      Vector g_mu_k = G.values * [&] {
        Vector w(G.dim());
        for (Index i = 0; i < G.dim(); ++i) {
          Index x = G.domain[static_cast<size_t>(i)];
          w[i] = mu_k[x] * m[x];
        }
        return w;
      }();
      for (Index x : exhaustion.complement(host, k)) {
        Index i = G.local(x);
        if (i >= 0) t = std::max(t, g_mu_k[i] / G.values(i, a));
      }
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace critlab
