#include "critlab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace critlab {

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical_trend: return "critical-trend";
    case Criticality::supercritical: return "supercritical";
  }
  return "?";
}

std::string to_string(PositiveCriticality c) {
  switch (c) {
    case PositiveCriticality::positive_critical_trend: return "positive-critical-trend";
    case PositiveCriticality::null_critical_trend: return "null-critical-trend";
    case PositiveCriticality::na: return "n/a";
  }
  return "?";
}

namespace {

Vector localize(const GreenMatrix& G, const Vector& host_values) {
  Vector out(G.dim());
  for (Index k = 0; k < G.dim(); ++k) out[k] = host_values[G.domain[static_cast<size_t>(k)]];
  return out;
}

struct SupportKernel {
  IndexList support;  // local indices
  Matrix A;           // G(x,y) W(y) m(y) on the support
};

SupportKernel support_kernel(const GreenMatrix& G, const Vector& W, const Vector& m) {
  Vector w = localize(G, W);
  Vector mm = localize(G, m);
  if (w.minCoeff() < 0.0)
    throw std::invalid_argument("weighted Green operator: W must be nonnegative");
  SupportKernel sk;
  for (Index k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) sk.support.push_back(k);
  if (sk.support.empty())
    throw std::invalid_argument("weighted Green operator: W vanishes on the domain");
  Index s = static_cast<Index>(sk.support.size());
  sk.A.resize(s, s);
  for (Index i = 0; i < s; ++i)
    for (Index j = 0; j < s; ++j) {
      Index lj = sk.support[static_cast<size_t>(j)];
      sk.A(i, j) = G.values(sk.support[static_cast<size_t>(i)], lj) * w[lj] * mm[lj];
    }
  return sk;
}

double power_iteration_rho(const Matrix& A, double tol = 1e-10,
                           int max_iter = 100000) {
  Index n = A.rows();
  Vector v = Vector::Ones(n) / static_cast<double>(n);
  double rho = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = A * v;
    double nrm = w.lpNorm<1>();
    if (nrm == 0.0) return 0.0;
    w /= nrm;
    double rq = v.dot(A * v) / v.dot(v);
    if (it > 0 && std::abs(rq - rho) <= tol * std::abs(rq)) return rq;
    rho = rq;
    v = w;
  }
  throw std::runtime_error(
      "power iteration stagnated: Rayleigh quotient did not settle to 1e-10 "
      "(spectral gap too small)");
}

}  // namespace

double principal_eigenvalue_power(const GreenMatrix& G, const Vector& W,
                                  const Vector& m) {
  SupportKernel sk = support_kernel(G, W, m);
  double rho = power_iteration_rho(sk.A);
  if (rho <= 0.0) throw std::runtime_error("principal_eigenvalue: zero kernel");
  return 1.0 / rho;
}

double principal_eigenvalue(const DiscreteOperator& op, const IndexList& domain,
                            const Vector& W) {
  GreenMatrix G = dirichlet_green(op, domain);
  if (!op.symmetric()) return principal_eigenvalue_power(G, W, op.graph().measure());

  // symmetric route: inverse iteration on the pencil (K, diag(W m)).
  // Stops on the eigen-residual, not on Rayleigh stagnation: for tight
  // spectral gaps the quotient stalls many digits before the eigenpair.
  SupportKernel sk = support_kernel(G, W, op.graph().measure());
  Matrix K = op.weighted_interior(G.domain);
  Eigen::PartialPivLU<Matrix> lu(K);
  Vector b = Vector::Zero(G.dim());
  for (Index k : sk.support) b[k] = 1.0;
  b /= b.lpNorm<1>();
  Vector Wm = (localize(G, W).array() * localize(G, op.graph().measure()).array()).matrix();
  for (int it = 0; it < 200000; ++it) {
    Vector x = lu.solve((Wm.array() * b.array()).matrix());
    x /= x.lpNorm<1>();
    Vector Kx = K * x;
    Vector Bx = (Wm.array() * x.array()).matrix();
    double rq = x.dot(Kx) / x.dot(Bx);
    // symmetric pencil: |rq - lambda0| <= ||r||^2-level accuracy
    if ((Kx - rq * Bx).norm() <= 1e-9 * Kx.norm()) return rq;
    b = x;
  }
  throw std::runtime_error("inverse iteration stagnated on the symmetric pencil");
}

WeightedGreenOperator weighted_green_operator(const GreenMatrix& G, const Vector& W,
                                              const Vector& m) {
  SupportKernel sk = support_kernel(G, W, m);
  WeightedGreenOperator wg;
  wg.support = sk.support;
  wg.kernel = sk.A;
  Index s = sk.A.rows();
  wg.adjoint_kernel.resize(s, s);
  Vector w = localize(G, W), mm = localize(G, m);
  for (Index i = 0; i < s; ++i)
    for (Index j = 0; j < s; ++j) {
      Index li = sk.support[static_cast<size_t>(i)];
      Index lj = sk.support[static_cast<size_t>(j)];
      wg.adjoint_kernel(i, j) = G.values(lj, li) * w[lj] * mm[lj];
    }
  wg.support_connected = (sk.A.array() > 0.0).all();  // positive kernel => irreducible
  Eigen::EigenSolver<Matrix> es(sk.A);
  Eigen::VectorXcd evs = es.eigenvalues();
  Index top = 0;
  for (Index k = 1; k < evs.size(); ++k)
    if (std::abs(evs[k]) > std::abs(evs[top])) top = k;
  wg.perron_value = evs[top].real();
  double second = 0.0;
  for (Index k = 0; k < evs.size(); ++k)
    if (k != top) second = std::max(second, std::abs(evs[k]));
  wg.spectral_gap = (std::abs(evs[top]) - second) / std::abs(evs[top]);
  Vector pv = es.eigenvectors().col(top).real();
  if (pv.sum() < 0.0) pv = -pv;
  wg.perron_vector = pv;
  return wg;
}

std::vector<std::complex<double>> weighted_spectrum_p(const GreenMatrix& G,
                                                      const Vector& W, const Vector& m,
                                                      const Vector& phi,
                                                      const Vector& phi_tilde, double p) {
  SupportKernel sk = support_kernel(G, W, m);
  Vector w = localize(G, W);
  Vector ph = localize(G, phi), pt = localize(G, phi_tilde);
  Index s = static_cast<Index>(sk.support.size());
  Vector d(s);
  for (Index i = 0; i < s; ++i) {
    Index k = sk.support[static_cast<size_t>(i)];
    if (!(ph[k] > 0.0) || !(pt[k] > 0.0))
      throw std::invalid_argument("weighted_spectrum_p: phi weights must be positive");
    double expo = std::isinf(p) ? 0.0 : 1.0 / p;
    d[i] = std::pow(ph[k] * w[k] * pt[k], expo) / ph[k];
  }
  Matrix Ap = d.asDiagonal() * sk.A * d.cwiseInverse().asDiagonal();
  Eigen::EigenSolver<Matrix> es(Ap);
  std::vector<std::complex<double>> out(static_cast<size_t>(s));
  for (Index k = 0; k < s; ++k) out[static_cast<size_t>(k)] = es.eigenvalues()[k];
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    if (std::abs(std::abs(a) - std::abs(b)) > 1e-14 * (std::abs(a) + std::abs(b)))
      return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

EigenSystem spectrum(const DiscreteOperator& op, const IndexList& domain) {
  if (!op.symmetric())
    throw std::invalid_argument("spectrum: operator is not symmetric (b != b-tilde)");
  Matrix K = op.weighted_interior(domain);
  Vector m(static_cast<Index>(domain.size()));
  for (size_t k = 0; k < domain.size(); ++k) m[static_cast<Index>(k)] = op.graph().measure(domain[k]);
  Vector s = m.cwiseSqrt();
  Matrix S = s.cwiseInverse().asDiagonal() * K * s.cwiseInverse().asDiagonal();
  S = 0.5 * (S + S.transpose());  // scrub round-off asymmetry
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  EigenSystem sys;
  sys.domain = domain;
  sys.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  sys.vectors = s.cwiseInverse().asDiagonal() * es.eigenvectors();
  return sys;  // columns are m-orthonormal: (s^-1 Q)^T diag(m) (s^-1 Q) = I
}

double heat_trace(const std::vector<double>& eigenvalues, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_trace: t must be positive");
  double acc = 0.0;
  for (double lam : eigenvalues) acc += std::exp(-lam * t);
  return acc;
}

double torsion_bound_constant(double beta, double c_hat) {
  if (!(c_hat > 0.0)) throw std::invalid_argument("torsion bound: c_hat must be positive");
  if (beta < 0.0) throw std::invalid_argument("torsion bound: beta must be >= 0");
  double head = beta == 0.0 ? 1.0 : std::pow(beta, beta / (beta + 2.0));
  return head / (beta + 2.0) *
         std::pow(2.0 * std::tgamma((beta + 2.0) / 2.0) / c_hat, 2.0 / (beta + 2.0));
}

double eigenvalue_lower_bound(double T, double beta, double N, double c_hat, int j) {
  if (!(T > 0.0) || j < 1)
    throw std::invalid_argument("eigenvalue_lower_bound: need T > 0 and j >= 1");
  double jb = static_cast<double>(j);
  double b1 = torsion_bound_constant(beta, c_hat) * std::pow(T, -2.0 / (beta + 2.0)) *
              std::pow(jb, 2.0 / (beta + 2.0));
  double b2 = torsion_bound_constant(N, c_hat) * std::pow(T, -2.0 / (N + 2.0)) *
              std::pow(jb, 2.0 / (N + 2.0));
  return std::min(b1, b2);
}

TorsionAudit torsion_bound_audit(const DiscreteOperator& op, const IndexList& domain,
                                 double beta, double N) {
  TorsionAudit audit;
  audit.rigidity = torsion_function(op, domain).rigidity;
  EigenSystem sys = spectrum(op, domain);
  audit.eigenvalues = sys.values;

  // c_hat: sup over the t-grid and nodes of k(x,x,t) / min{t^{-N/2}, t^{-beta/2}}
  Index d = static_cast<Index>(domain.size());
  double c_hat = 0.0;
  for (int g = 0; g <= 60; ++g) {
    double t = std::pow(10.0, -3.0 + 6.0 * g / 60.0);
    double envelope = std::max(std::pow(t, N / 2.0), std::pow(t, beta / 2.0));
    for (Index x = 0; x < d; ++x) {
      double kxx = 0.0;
      for (size_t j = 0; j < sys.values.size(); ++j)
        kxx += std::exp(-sys.values[j] * t) * sys.vectors(x, static_cast<Index>(j)) *
               sys.vectors(x, static_cast<Index>(j));
      c_hat = std::max(c_hat, kxx * envelope);
    }
  }
  audit.c_hat = c_hat;
  for (size_t j = 1; j < sys.values.size(); ++j) {
    double bound = eigenvalue_lower_bound(audit.rigidity, beta, N, c_hat,
                                          static_cast<int>(j));
    audit.bounds.push_back(bound);
    if (sys.values[j] < bound) {
      audit.all_pass = false;
      ++audit.violations;
    }
  }
  return audit;
}

CriticalityProbe criticality_probe(const DiscreteOperator& op,
                                   const Exhaustion& exhaustion,
                                   const Vector& test_weight, double green_tol) {
  if (exhaustion.depth() < 3)
    throw std::invalid_argument("criticality_probe: need at least 3 levels");
  std::set<Index> first(exhaustion.levels[0].begin(), exhaustion.levels[0].end());
  for (Index x = 0; x < test_weight.size(); ++x)
    if (test_weight[x] != 0.0 && !first.count(x))
      throw std::invalid_argument(
          "criticality_probe: test weight must be supported in the first level");

  CriticalityProbe probe;
  const Graph& g = op.graph();
  const Vector& m = g.measure();
  GreenMatrix lim = minimal_green_exhaustion(
      op, exhaustion, green_tol, {}, [&](Index j, const GreenMatrix& Gj) {
        probe.lambda0_levels.push_back(principal_eigenvalue_power(Gj, test_weight, m));
        const IndexList& lvl = exhaustion.levels[static_cast<size_t>(j)];
        double r = 0.0;
        if (g.has_coords()) {
          for (Index x : lvl) r = std::max(r, g.coords()[static_cast<size_t>(x)].norm());
        } else {
          r = std::sqrt(static_cast<double>(lvl.size()));
        }
        probe.radii.push_back(r);
      });
  probe.green_blowup = lim.blowup_trend;
  probe.green_converged = lim.converged;
  probe.green_trace = lim.convergence_trace;

  const auto& l0 = probe.lambda0_levels;
  bool decreasing_fast = true;
  for (size_t j = 1; j < l0.size(); ++j) {
    double doublings = std::log2(probe.radii[j] / probe.radii[j - 1]);
    if (doublings <= 0) continue;
    if (l0[j] > l0[j - 1] * std::pow(0.8, doublings)) decreasing_fast = false;
  }
  double last_rel_change =
      std::abs(l0[l0.size() - 1] - l0[l0.size() - 2]) / l0[l0.size() - 1];
  if (l0.back() < 1e-3 && decreasing_fast)
    probe.verdict = "critical-trend";
  else if (l0.back() >= 1e-3 && last_rel_change < 0.2)
    probe.verdict = "subcritical";
  else
    probe.verdict = "inconclusive";
  return probe;
}

PositiveCriticalityReport positive_criticality_check(const Vector& phi,
                                                     const Vector& phi_star,
                                                     const Vector& W, const Vector& m,
                                                     const Graph& host,
                                                     const Exhaustion& exhaustion) {
  (void)host;
  PositiveCriticalityReport rep;
  for (Index j = 0; j < exhaustion.depth(); ++j) {
    double s = 0.0;
    for (Index x : exhaustion.levels[static_cast<size_t>(j)]) {
      if (!(phi[x] > 0.0) || !(phi_star[x] > 0.0))
        throw std::invalid_argument("positive_criticality_check: ground states must be positive");
      s += phi[x] * phi_star[x] * W[x] * m[x];
    }
    rep.partial_sums.push_back(s);
  }
  size_t J = rep.partial_sums.size();
  if (J < 3) return rep;
  double last_inc = rep.partial_sums[J - 1] - rep.partial_sums[J - 2];
  double prev_inc = rep.partial_sums[J - 2] - rep.partial_sums[J - 3];
  double total = rep.partial_sums[J - 1];
  // geometric decay of the increments reads as a convergent tail; flat or
  // growing increments as divergence
  bool converging = total > 0.0 && (last_inc <= 0.7 * prev_inc ||
                                    last_inc <= 1e-6 * total);
  bool growing = last_inc >= 0.9 * prev_inc && last_inc > 1e-6 * total;
  rep.verdict = converging ? PositiveCriticality::positive_critical_trend
                           : (growing ? PositiveCriticality::null_critical_trend
                                      : PositiveCriticality::na);
  return rep;
}

LiouvilleReport liouville_compare(const DiscreteOperator& P1,
                                  const DiscreteOperator& P2, const Vector& Phi,
                                  const Vector& Psi, const IndexList& K_region,
                                  const Vector& W, const Vector& f) {
  LiouvilleReport rep;
  const Graph& g1 = P1.graph();
  std::set<Index> K(K_region.begin(), K_region.end());
  auto add = [&](const std::string& name, bool ok, double margin) {
    rep.hypotheses.push_back({name, ok, margin});
  };

  // (0) same principal part (conductances and measure) outside K
  {
    bool ok = g1.size() == P2.graph().size();
    double worst = 0.0;
    if (ok) {
      std::map<std::pair<Index, Index>, double> a2;
      for (const Edge& e : P2.graph().edges())
        a2[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.a;
      for (const Edge& e : g1.edges()) {
        if (K.count(e.u) || K.count(e.v)) continue;
        auto it = a2.find({std::min(e.u, e.v), std::max(e.u, e.v)});
        double gap = it == a2.end() ? std::abs(e.a) : std::abs(e.a - it->second);
        worst = std::max(worst, gap);
      }
      for (Index x = 0; x < g1.size(); ++x)
        if (!K.count(x))
          worst = std::max(worst, std::abs(g1.measure(x) - P2.graph().measure(x)));
      ok = worst <= 1e-14;
    }
    add("shared principal part off K", ok, worst);
  }

  // (1) Phi > 0 and P1 Phi = 0 on the interior
  {
    bool pos = true;
    for (Index x : g1.interior()) pos = pos && Phi[x] > 0.0;
    Vector r = P1.apply(Phi);
    double worst = 0.0;
    for (Index x : g1.interior()) worst = std::max(worst, std::abs(r[x]));
    double scale = Phi.cwiseAbs().maxCoeff();
    add("Phi positive with P1 Phi = 0", pos && worst <= 1e-10 * scale, worst / scale);
  }

  // (2) Psi_+ != 0 and P2 Psi <= 0 on the interior
  {
    double psi_plus_max = std::max(0.0, Psi.maxCoeff());
    Vector r = P2.apply(Psi);
    double worst = 0.0;
    for (Index x : P2.graph().interior()) worst = std::max(worst, r[x]);
    add("Psi_+ nonzero and P2 Psi <= 0", psi_plus_max > 0.0 && worst <= 1e-10,
        worst);
  }

  // (3) Psi_+ <= C Phi
  {
    double C = 0.0;
    for (Index x : g1.interior())
      if (Psi[x] > 0.0) C = std::max(C, Psi[x] / Phi[x]);
    rep.comparability_C = C;
    add("Psi_+ <= C Phi", std::isfinite(C) && C > 0.0, C);
  }

  // (4) |V1 - V2| / 2 <= W off K
  {
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (Index x : g1.interior()) {
      if (K.count(x)) continue;
      double lhs = std::abs(P1.potential()[x] - P2.potential()[x]) / 2.0;
      double margin = W[x] - lhs;
      worst = std::max(worst, lhs > 0.0 ? lhs / std::max(W[x], 1e-300) : 0.0);
      if (margin < -1e-12) ok = false;
    }
    add("|V1 - V2|/2 <= W off K", ok, worst);  // margin reports the worst ratio
  }

  bool hypotheses_ok = true;
  for (const auto& h : rep.hypotheses) hypotheses_ok = hypotheses_ok && h.ok;

  // maximal-eps comparison: eps0 = min f / Psi over {Psi > 0}
  double eps0 = std::numeric_limits<double>::infinity();
  for (Index x = 0; x < Psi.size(); ++x)
    if (Psi[x] > 0.0) eps0 = std::min(eps0, f[x] / Psi[x]);
  rep.eps0 = eps0;
  Vector wv = f - eps0 * Psi;
  rep.residual = wv.cwiseAbs().maxCoeff() / f.cwiseAbs().maxCoeff();

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index x : g1.interior())
    if (Psi[x] > 0.0) {
      lo = std::min(lo, Psi[x] / Phi[x]);
      hi = std::max(hi, Psi[x] / Phi[x]);
    }
  rep.psi_phi_min = lo;
  rep.psi_phi_max = hi;

  if (!hypotheses_ok)
    rep.verdict = "hypotheses failed";
  else if (rep.residual <= 1e-10)
    rep.verdict = "critical";
  else
    rep.verdict = "inconclusive";
  return rep;
}

}  // namespace critlab
