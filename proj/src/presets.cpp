#include "critlab/presets.hpp"

#include "critlab/hardy.hpp"
#include "critlab/perturbation.hpp"
#include "critlab/radial.hpp"
#include "critlab/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>

namespace critlab {

bool PresetResult::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

json PresetResult::to_json() const {
  json j;
  j["name"] = name;
  j["passed"] = passed();
  j["assertions"] = json::array();
  for (const auto& a : assertions)
    j["assertions"].push_back({{"name", a.name},
                               {"passed", a.passed},
                               {"value", a.value},
                               {"threshold", a.threshold}});
  j["findings"] = json::array();
  for (const auto& f : findings)
    j["findings"].push_back({{"name", f.name}, {"verdict", f.verdict}, {"data", f.data}});
  j["operations"] = operations;
  return j;
}

namespace {

struct Ctx {
  PresetResult res;
  std::mt19937_64 rng;

  explicit Ctx(std::string name, unsigned long seed) : rng(seed) { res.name = std::move(name); }

  void op(const std::string& name) {
    if (std::find(res.operations.begin(), res.operations.end(), name) ==
        res.operations.end())
      res.operations.push_back(name);
  }
  // value must stay below threshold
  void check_le(const std::string& name, double value, double threshold) {
    res.assertions.push_back({name, value <= threshold, value, threshold});
  }
  void check_ge(const std::string& name, double value, double threshold) {
    res.assertions.push_back({name, value >= threshold, value, threshold});
  }
  void check(const std::string& name, bool ok, double value = 0, double threshold = 0) {
    res.assertions.push_back({name, ok, value, threshold});
  }
  void find(const std::string& name, const std::string& verdict, json data = {}) {
    res.findings.push_back({name, verdict, std::move(data)});
  }
};

Vector indicator(const Graph& g, const IndexList& nodes, double value = 1.0) {
  Vector v = Vector::Zero(g.size());
  for (Index x : nodes) v[x] = value;
  return v;
}

Vector host_column(const GreenMatrix& G, Index n_host, Index col_host) {
  Vector u = Vector::Zero(n_host);
  Index c = G.local(col_host);
  for (Index k = 0; k < G.dim(); ++k)
    u[G.domain[static_cast<size_t>(k)]] = G.values(k, c);
  return u;
}

Index center_node(const Graph& g) {
  Index best = g.interior().front();
  double best_r = std::numeric_limits<double>::infinity();
  for (Index x : g.interior()) {
    double r = g.coords()[static_cast<size_t>(x)].norm();
    if (r < best_r) {
      best_r = r;
      best = x;
    }
  }
  return best;
}

bool nonincreasing(const std::vector<double>& seq, double slack = 1e-9) {
  for (size_t k = 1; k < seq.size(); ++k)
    if (seq[k] > seq[k - 1] * (1.0 + slack)) return false;
  return true;
}

// ---------------------------------------------------------------- path1d

void preset_path1d(Ctx& c) {
  Graph host = path_graph(301);
  Vector pot = Vector::Constant(host.size(), 0.1);
  DiscreteOperator P = DiscreteOperator::build(host, {}, {}, pot);
  c.op("build_operator");
  Exhaustion ex = radial_exhaustion(host, {30, 60, 90, 120, 150});
  const Vector& m = host.measure();
  const IndexList& interior = host.interior();
  Index n = host.size();
  Index anchor = center_node(host);

  auto ell = check_ellipticity(P, ex);
  c.op("check_ellipticity");
  c.check("ellipticity: no violations", !ell.any_violation);
  c.check_le("ellipticity: conductance ratio == 1", std::abs(ell.rows[0].ratio - 1.0), 1e-15);

  GreenMatrix G = dirichlet_green(P, interior);
  c.op("dirichlet_green");
  c.check_ge("green positivity (min entry)", G.values.minCoeff(),
             std::numeric_limits<double>::min());

  // reproduction P G(.,y) = delta_y / m
  c.op("apply");
  double repro = 0.0;
  for (Index y : {interior.front(), anchor, interior.back()}) {
    Vector u = host_column(G, n, y);
    Vector Pu = P.apply(u);
    for (Index x : interior) {
      double want = x == y ? 1.0 / m[y] : 0.0;
      repro = std::max(repro, std::abs(Pu[x] - want));
    }
  }
  c.check_le("green reproduction residual", repro, 1e-10);

  c.op("adjoint");
  c.op("check_duality");
  c.check_le("green duality gap", duality_gap(P, interior), 1e-12);

  GreenMatrix Gex = minimal_green_exhaustion(P, ex);
  c.op("minimal_green_exhaustion");
  c.check("exhaustion converged at 1e-8", Gex.converged);
  c.check("exhaustion shows no blow-up", !Gex.blowup_trend);
  c.find("exhaustion trace", Gex.converged ? "converged" : "not converged",
         json{{"trace", Gex.convergence_trace}});

  // ---- perturbation machinery with V == 1
  Vector V = Vector::Ones(n);
  double C0 = three_g_constant(G, V, m);
  c.op("three_g_constant");
  c.check("3G constant finite", std::isfinite(C0) && C0 > 0.0, C0);

  iterated_kernels(G, V, m, 5);  // throws if |G^(i)| <= C0^i G fails
  c.op("iterated_kernels");
  c.check("iterated kernels obey C0^i bound (i <= 5)", true, 5);

  double eps = 1.0 / (4.0 * C0);
  NeumannResult nr = neumann_series(G, V, m, eps);
  c.op("neumann_series");
  c.check("neumann series converged", nr.converged, nr.spectral_radius);
  DiscreteOperator Pp = DiscreteOperator::build(host, {}, {}, pot - eps * V);
  GreenMatrix Gp = dirichlet_green(Pp, interior);
  double neumann_err =
      (nr.H - Gp.values).cwiseAbs().maxCoeff() / G.values.maxCoeff();
  c.check_le("neumann vs direct Green (rel sup)", neumann_err, 1e-9);
  c.op("resolvent_check");
  c.check_le("resolvent residual of neumann output",
             resolvent_residual(G, nr.H, V, m, eps), 1e-9);
  c.check_le("resolvent residual of direct Green",
             resolvent_residual(G, Gp.values, V, m, eps), 1e-12);

  c.op("sandwich_check");
  SandwichReport sw = sandwich_check(G, Gp.values, eps, C0);
  c.check("sandwich bounds hold at eps = 1/(4 C0)", sw.lower_ok && sw.upper_ok,
          sw.lower_margin);
  double eps_edge = 0.49 / C0;
  DiscreteOperator Pe = DiscreteOperator::build(host, {}, {}, pot - eps_edge * V);
  SandwichReport swe = sandwich_check(G, dirichlet_green(Pe, interior).values,
                                      eps_edge, C0);
  c.check("sandwich bounds hold just below 1/(2 C0)", swe.lower_ok && swe.upper_ok,
          swe.lower_factor);
  c.find("sandwich near the edge", "lower constant near zero but positive",
         json{{"lower_factor", swe.lower_factor}, {"lower_margin", swe.lower_margin}});

  double lam0 = principal_eigenvalue(P, interior, V);
  c.op("principal_eigenvalue");
  c.op("monotonicity_in_eps");
  c.check("green monotone in eps",
          monotone_in_eps(P, interior, V, 0.1 * lam0, 0.2 * lam0));

  // Schur bound with the exact ground state as test function
  EigenSystem sys = spectrum(P, interior);
  c.op("spectrum");
  Vector u0 = sys.vectors.col(0);
  if (u0.sum() < 0) u0 = -u0;
  Vector u_host = Vector::Zero(n);
  for (size_t k = 0; k < interior.size(); ++k) u_host[interior[k]] = u0[static_cast<Index>(k)];
  SchurReport schur = schur_bound(G, V, m, u_host, 0.4 * lam0, 0.1 * lam0, lam0);
  c.op("schur_bound");
  c.check("schur test certified", schur.certified, schur.row_margin);
  c.check_ge("schur bound >= true norm", schur.bound - schur.true_norm, -1e-9);
  c.check_le("schur bound < 1", schur.bound, 1.0);

  // quasimetric diagnostics on a mid-level domain (exhaustive triples)
  GreenMatrix Gmid = dirichlet_green(P, ex.levels[1]);
  c.op("quasimetric_constant");
  c.op("quasimetric_3g_check");
  QuasimetricCheck qc = quasimetric_3g_check(Gmid);
  c.check("quasimetric 3G identity consistent", qc.ok, qc.worst_ratio);
  c.find("quasimetric constant", "finite", json{{"C", qc.constant}});

  c.op("semismall_profile");
  PerturbationProfile prof = classify_perturbation(G, V, m, host, ex, anchor);
  c.check("semismall tail decreasing (V == 1, c = 0.1)",
          nonincreasing(prof.semismall_tail) && prof.semismall_trend,
          prof.semismall_tail.back());
  c.find("perturbation profile",
         prof.small_trend ? "small (trend)" : "not small at this depth",
         json{{"C0", prof.three_g},
              {"semismall_tail", prof.semismall_tail},
              {"small_tail", prof.small_tail},
              {"quasimetric", prof.quasimetric}});

  // ---- equivalence ratios across the last three levels (fixed window M_1)
  c.op("equivalence_interval");
  std::vector<double> grid = {0.0, 0.3 * lam0, 0.6 * lam0, 0.9 * lam0};
  CsvTable eq_table{{"level", "lambda", "ratio"}, {}};
  std::vector<double> ratios_09;
  for (Index j = ex.depth() - 3; j < ex.depth(); ++j) {
    auto pts = equivalence_interval(P, ex.levels[static_cast<size_t>(j)], V, grid,
                                    ex.levels[0]);
    for (const auto& pt : pts)
      eq_table.rows.push_back({static_cast<double>(j), pt.lambda, pt.ratio});
    c.check_le("equivalence ratio at lambda = 0 is exactly 1 (level " +
                   std::to_string(j) + ")",
               std::abs(pts[0].ratio - 1.0), 1e-13);
    ratios_09.push_back(pts.back().ratio);
  }
  c.res.tables["equivalence"] = eq_table;
  c.find("equivalence ratios at 0.9 lambda0", "bounded across levels",
         json{{"ratios", ratios_09}});

  // ---- optimal Hardy construction
  Vector phi = indicator(host, ex.levels[0]);
  Vector G_phi = Vector::Zero(n);
  Vector gp = green_potential(G, phi, m);
  c.op("green_potential");
  for (Index k = 0; k < G.dim(); ++k) G_phi[G.domain[static_cast<size_t>(k)]] = gp[k];
  Vector u_sol = P.harmonic_extension(Vector::Ones(2));
  HardyConstruction hc = optimal_hardy_weight(P, interior, G_phi, u_sol);
  c.op("optimal_hardy_weight");
  c.check_le("optimal hardy identity (P - W)v = 0", hc.identity_residual, 1e-10);
  c.find("optimal hardy weight sign",
         hc.negative_nodes.empty() ? "nonnegative everywhere"
                                   : "negative at isolated nodes (reported, not clipped)",
         json{{"negative_nodes", hc.negative_nodes.size()}});

  c.op("alpha_roots");
  auto [am, ap] = alpha_roots(0.75);
  c.check_le("alpha roots of lambda = 3/4", std::abs(am - 0.25) + std::abs(ap - 0.75),
             1e-15);
  c.op("supersolution_pair");
  auto [hm, hp] = supersolution_pair(u_sol, G_phi, 0.75);
  // h-bigness mechanism: h_+ / h_- = (G_phi/u)^(a_+ - a_-) decays outward
  double near = hp[anchor] / hm[anchor];
  Index far = interior.back();
  double far_ratio = hp[far] / hm[far];
  c.check_le("h_+ / h_- decays toward the boundary", far_ratio, near);
  c.find("h-big mechanism", "decay observed",
         json{{"near", near}, {"far", far_ratio}});
}

// ---------------------------------------------------------------- line1d

void preset_line1d(Ctx& c) {
  Graph host = path_graph(251);
  DiscreteOperator P =
      DiscreteOperator::build(host, {}, {}, Vector::Zero(host.size()));
  c.op("build_operator");
  Exhaustion ex = radial_exhaustion(host, {16, 31, 62, 125});
  Index anchor = center_node(host);

  Vector W = Vector::Zero(host.size());
  for (Index x : host.interior())
    if (host.coords()[static_cast<size_t>(x)].norm() <= 2.0) W[x] = 4.0;

  CriticalityProbe probe = criticality_probe(P, ex, W);
  c.op("criticality_probe");
  c.op("minimal_green_exhaustion");
  c.op("dirichlet_green");
  c.op("principal_eigenvalue");
  c.check("verdict critical-trend", probe.verdict == "critical-trend",
          probe.lambda0_levels.back());
  bool strictly_dec = true;
  for (size_t k = 1; k < probe.lambda0_levels.size(); ++k)
    strictly_dec = strictly_dec &&
                   probe.lambda0_levels[k] < probe.lambda0_levels[k - 1];
  c.check("lambda0 strictly decreasing along exhaustion", strictly_dec);
  c.check_le("final lambda0 below 1e-3", probe.lambda0_levels.back(), 1e-3);
  c.check("green exhaustion blow-up trend", probe.green_blowup);

  CsvTable t{{"level", "radius", "lambda0"}, {}};
  for (size_t k = 0; k < probe.lambda0_levels.size(); ++k)
    t.rows.push_back({static_cast<double>(k), probe.radii[k], probe.lambda0_levels[k]});
  c.res.tables["criticality"] = t;

  c.op("positive_criticality_check");
  auto pc = positive_criticality_check(Vector::Ones(host.size()),
                                       Vector::Ones(host.size()),
                                       Vector::Ones(host.size()), host.measure(),
                                       host, ex);
  c.check("constant ground state with W == 1 diverges",
          pc.verdict == PositiveCriticality::null_critical_trend,
          pc.partial_sums.back());
  (void)anchor;
}

// ---------------------------------------------------------------- grid2d

void preset_grid2d(Ctx& c) {
  Graph box = box_graph_2d(15, 15);
  DiscreteOperator P = DiscreteOperator::build(box, {}, {}, Vector::Zero(box.size()));
  c.op("build_operator");
  const IndexList& interior = box.interior();

  EigenSystem sys = spectrum(P, interior);
  c.op("spectrum");
  double closed = 4.0 - 2.0 * std::cos(M_PI / 16.0) - 2.0 * std::cos(M_PI / 16.0);
  c.check_le("grid bottom eigenvalue matches closed form",
             std::abs(sys.values.front() - closed), 1e-10);

  TorsionAudit audit = torsion_bound_audit(P, interior, 2.0, 2.0);
  c.op("torsion_bound_audit");
  c.op("torsion_function");
  c.op("eigenvalue_lower_bound");
  c.check("torsion eigenvalue audit passes (beta = N = 2)", audit.all_pass,
          audit.violations);
  c.find("torsion audit", "computed",
         json{{"T", audit.rigidity}, {"c_hat", audit.c_hat}});

  Exhaustion ex = radial_exhaustion(box, {2.5, 4.0, 5.5, 99});
  Vector Wc = Vector::Zero(box.size());
  Wc[center_node(box)] = 1.0;
  CriticalityProbe probe = criticality_probe(P, ex, Wc, 0.05);
  c.op("criticality_probe");
  c.check("lambda0 decreasing along exhaustion",
          nonincreasing(probe.lambda0_levels));
  c.find("2d recurrence probe", probe.verdict,
         json{{"lambda0", probe.lambda0_levels}});

  // nonsymmetric drift operator on a lattice disk: duality and adjoint
  Graph disk = disk_graph(6.5, -0.7);
  DiscreteOperator D = DiscreteOperator::build(disk, radial_upwind_drift(disk, 0.8),
                                               {}, Vector::Zero(disk.size()));
  c.check("radial drift operator is nonsymmetric", !D.symmetric());
  c.op("check_duality");
  c.op("adjoint");
  c.check_le("drift green duality gap", duality_gap(D, disk.interior()), 1e-12);
  Matrix before = D.matrix();
  Matrix after = D.adjoint().adjoint().matrix();
  c.check_le("adjoint involution", (before - after).cwiseAbs().maxCoeff(), 1e-14);

  auto ell = check_ellipticity(D);
  c.op("check_ellipticity");
  c.check("disk conductances positive", !ell.any_violation, ell.rows[0].ratio);
  c.find("disk ellipticity", "ratio from radial measure",
         json{{"ratio", ell.rows[0].ratio}});
}

// ---------------------------------------------------------------- grid3d

void preset_grid3d(Ctx& c) {
  Graph host = box_graph_3d(13, 13, 13);
  DiscreteOperator P = DiscreteOperator::build(host, {}, {}, Vector::Zero(host.size()));
  c.op("build_operator");
  // tiny first level: the convergence window must sit far from every wall
  Exhaustion ex = radial_exhaustion(host, {1.2, 2.4, 3.6, 4.8, 99});
  Vector Wc = Vector::Zero(host.size());
  Wc[center_node(host)] = 1.0;

  CriticalityProbe probe = criticality_probe(P, ex, Wc, 0.3);
  c.op("criticality_probe");
  c.op("dirichlet_green");
  c.op("minimal_green_exhaustion");
  c.op("principal_eigenvalue");
  c.find("exhaustion trace", probe.green_converged ? "converged" : "not converged",
         json{{"trace", probe.green_trace}});
  c.check("verdict subcritical (transient lattice)",
          probe.verdict == "subcritical", probe.lambda0_levels.back());
  c.check_ge("lambda0 stabilizes above threshold", probe.lambda0_levels.back(), 1e-3);
  c.check("exhaustion green converged (tol 0.3)", probe.green_converged);
  c.check("no blow-up trend", !probe.green_blowup);

  CsvTable t{{"level", "radius", "lambda0"}, {}};
  for (size_t k = 0; k < probe.lambda0_levels.size(); ++k)
    t.rows.push_back({static_cast<double>(k), probe.radii[k], probe.lambda0_levels[k]});
  c.res.tables["criticality"] = t;
}

// ------------------------------------------------------------- hyperbolic

void preset_hyperbolic(Ctx& c, double N) {
  using namespace radial;
  c.op("hyperbolic_green");
  c.op("hyperbolic_hardy");
  c.op("hyperbolic_asymptotic_coeffs");
  c.op("fit_expansion");
  c.op("radial_residual");
  c.op("hbig_probe");
  c.op("alpha_roots");

  auto [leading, second] = hyperbolic_asymptotic_coeffs(N);

  if (N == 2.0) {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      double exact = std::log(1.0 / std::tanh(r / 2.0));
      worst = std::max(worst, std::abs(hyperbolic_green(N, r) - exact) / exact);
    }
    c.check_le("green matches log coth(r/2)", worst, 1e-10);
  }
  if (N == 3.0) {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      double exact = 1.0 / std::tanh(r) - 1.0;
      worst = std::max(worst, std::abs(hyperbolic_green(N, r) - exact) / exact);
    }
    c.check_le("green matches coth(r) - 1", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (double r : {4.0, 6.0, 8.0}) {
      double q = hyperbolic_green(N, r), s = hyperbolic_green_series(N, r);
      worst = std::max(worst, std::abs(q - s) / s);
    }
    c.check_le("quadrature agrees with series evaluation", worst, 1e-9);
  }

  FitResult fit = fit_expansion(N);
  c.check_le("hardy tail coefficient fit within 1%", fit.relative_deviation, 0.01);
  c.find("asymptotic coefficients", "fit",
         json{{"leading", leading}, {"second", second}, {"fitted", fit.coefficient}});

  {
    bool positive = true, monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (double r : linspace(6.0, 20.0, 29)) {
      double e = hardy_excess(N, r);
      positive = positive && e > 0.0;
      monotone = monotone && e < prev;
      prev = e;
    }
    c.check("hardy weight approaches (N-1)^2/4 from above", positive && monotone);
  }

  // exact radial solutions of (-Laplace - lambda W) v = 0 at lambda = 3/4
  RadialModel model{RadialModel::Kind::hyperbolic, N, 0.0, 0.0};
  auto W = [N](double r) { return hardy_excess(N, r) + hyperbolic_asymptotic_coeffs(N).first; };
  auto grid = linspace(5.0, 12.0, 25);
  CsvTable table{{"r", "green", "hardy", "residual_plus"}, {}};
  for (double alpha : {alpha_roots(0.75).first, alpha_roots(0.75).second}) {
    auto v = [N, alpha](double r) { return std::pow(hyperbolic_green_series(N, r), alpha); };
    ResidualReport rr = radial_residual(model, v, 0.75, W, grid);
    c.check_le("residual of green^alpha (alpha = " + std::to_string(alpha) + ")",
               rr.sup_relative, 1e-6);
    if (alpha > 0.5)
      for (double r : grid)
        table.rows.push_back({r, hyperbolic_green_series(N, r), W(r), rr.sup_relative});
  }
  c.res.tables["radial"] = table;

  DecayReport dec = hbig_probe([](double) { return 1.0; },
                               [N](double r) { return hyperbolic_green_series(N, r); },
                               0.75, linspace(4.0, 16.0, 25));
  c.check("h-big mechanism confirmed (green/u -> 0)",
          dec.verdict == "h-big mechanism confirmed", dec.last);

  for (double eps : {0.1, 0.5}) {
    DecayReport sp = small_perturbation_decay(N, eps, linspace(6.0, 16.0, 21));
    c.check("short-range tail ratio grows (eps = " + std::to_string(eps) + ")",
            sp.verdict == "ratio grows without bound (short-range tail)",
            sp.last / sp.first);
  }
}

// ----------------------------------------------------------------- planar

void preset_planar(Ctx& c, double b) {
  using namespace radial;
  c.op("planar_example_report");
  c.op("radial_residual");
  double lambda = -1.0;
  auto grid = linspace(1.05, 40.0, 200);

  PlanarReport rep = planar_example_report(lambda, b, grid);
  c.check("potential gap exceeds W at every grid point", rep.inequality_everywhere);
  if (b == 0.0) {
    double worst = 0.0;
    for (const auto& row : rep.rows) worst = std::max(worst, std::abs(row.ratio - 2.0));
    c.check_le("factor-2 margin exact at every grid point", worst, 1e-12);
    c.find("liouville hypothesis (potential-vs-W)",
           "violated: |V1-V2|/2 = 2 W at every grid point",
           json{{"ratio", 2.0}, {"points", rep.rows.size()}});

    RadialModel model{RadialModel::Kind::planar_inverse_square, 2, lambda, 0.0};
    auto v = [](double r) { return 1.0 / r; };
    auto W = [](double r) { return 1.0 / (r * r); };
    ResidualReport rr = radial_residual(model, v, lambda, W, linspace(1.2, 30.0, 40));
    c.check_le("residual of r^{-sqrt(-lambda)}", rr.sup_relative, 1e-6);

    c.op("hbig_probe");
    DecayReport dec =
        hbig_probe([](double) { return 1.0; }, v, 0.0, linspace(1.05, 150.0, 300));
    c.check("G2/G1 decays to zero", dec.monotone && dec.to_zero, dec.last);
  } else {
    c.check_le("closed form of W matches to 1e-10", rep.closed_form_max_err, 1e-10);

    double kappa = (-b - std::sqrt(b * b - 4.0 * lambda)) / 2.0;
    RadialModel model{RadialModel::Kind::planar_drift, 2, lambda, b};
    auto v = [kappa](double r) { return std::pow(r, kappa); };
    auto W = [](double r) { return 1.0 / (r * r); };
    ResidualReport rr = radial_residual(model, v, lambda, W, linspace(1.2, 30.0, 40));
    c.check_le("residual of r^{(-b-sqrt(b^2-4 lambda))/2}", rr.sup_relative, 1e-6);

    // continuity of the printed W as b -> 0-
    PlanarReport rep0 = planar_example_report(lambda, 0.0, grid);
    PlanarReport repb = planar_example_report(lambda, -1e-7, grid);
    double worst = 0.0;
    for (size_t k = 0; k < grid.size(); ++k)
      worst = std::max(worst, std::abs(repb.rows[k].W - rep0.rows[k].W) /
                                  rep0.rows[k].W);
    c.check_le("b -> 0- limit recovers the inverse-square W", worst, 1e-6);
  }
  CsvTable t{{"r", "W", "half_dV", "ratio"}, {}};
  for (const auto& row : rep.rows)
    t.rows.push_back({row.r, row.W, row.half_dV, row.ratio});
  c.res.tables["planar"] = t;
}

// ------------------------------------------------------------- wmu-family

void preset_wmu(Ctx& c) {
  Graph host = path_graph(41);
  Vector pot = Vector::Constant(host.size(), 0.1);
  DiscreteOperator P = DiscreteOperator::build(host, {}, {}, pot);
  c.op("build_operator");
  Exhaustion ex = radial_exhaustion(host, {5, 10, 15, 20});
  const Vector& m = host.measure();
  const IndexList& interior = host.interior();
  Index n = host.size();
  Index anchor = center_node(host);
  GreenMatrix G = dirichlet_green(P, interior);
  c.op("dirichlet_green");
  c.op("green_potential");

  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<std::pair<std::string, Vector>> mus;
  mus.push_back({"delta", indicator(host, {anchor}, 1.0 / m[anchor])});
  mus.push_back({"compact", indicator(host, ex.levels[0], 1.0)});
  mus.push_back({"uniform", indicator(host, interior, 1.0)});
  for (int k = 0; k < 3; ++k) {
    Vector mu = Vector::Zero(n);
    for (Index x : interior) mu[x] = unif(c.rng);
    mus.push_back({"random-" + std::to_string(k), mu});
  }

  for (const auto& [label, mu] : mus) {
    HardyConstruction hc = critical_hardy_weight(G, mu, m);
    c.op("critical_hardy_weight");

    c.op("invariance_check");
    c.check_le("invariance residual (" + label + ")",
               invariance_residual(G, hc.weight, hc.witness, m), 1e-10);

    c.op("apply");
    Vector r = P.apply(hc.witness);
    double worst = 0.0, scale = mu.maxCoeff();
    for (Index x : interior)
      worst = std::max(worst, std::abs(r[x] - hc.weight[x] * hc.witness[x]));
    c.check_le("(P - W_mu) G_mu = 0 (" + label + ")", worst / scale, 1e-12);

    c.op("principal_eigenvalue");
    std::vector<double> lam;
    for (const auto& lvl : ex.levels)
      lam.push_back(principal_eigenvalue(P, lvl, hc.weight));
    bool ge1 = true;
    for (double l : lam) ge1 = ge1 && l >= 1.0 - 1e-8;
    c.check("lambda0(P, W_mu, M_j) >= 1 (" + label + ")", ge1, lam.back());
    c.check("lambda0 nonincreasing along exhaustion (" + label + ")",
            nonincreasing(lam));
    c.check_le("lambda0 on the host equals 1 (" + label + ")",
               std::abs(lam.back() - 1.0), 1e-8);

    c.op("weighted_green_operator");
    WeightedGreenOperator wg = weighted_green_operator(G, hc.weight, m);
    // Perron eigenvector is G_mu up to scale
    double dev = 0.0;
    {
      Index kmax = 0;
      wg.perron_vector.cwiseAbs().maxCoeff(&kmax);
      Index host_kmax = G.domain[static_cast<size_t>(wg.support[static_cast<size_t>(kmax)])];
      double scale_p = hc.witness[host_kmax] / wg.perron_vector[kmax];
      for (size_t q = 0; q < wg.support.size(); ++q) {
        Index hx = G.domain[static_cast<size_t>(wg.support[q])];
        dev = std::max(dev, std::abs(wg.perron_vector[static_cast<Index>(q)] * scale_p -
                                     hc.witness[hx]) /
                                hc.witness[hx]);
      }
    }
    c.check_le("perron eigenvector equals G_mu up to scale (" + label + ")", dev, 1e-8);
    c.check_le("perron value equals 1/lambda0 (" + label + ")",
               std::abs(wg.perron_value - 1.0 / lam.back()), 1e-8);

    if (label != "delta") {
      double l_pencil = principal_eigenvalue(P, interior, hc.weight);
      double l_power = principal_eigenvalue_power(G, hc.weight, m);
      c.check_le("pencil and power routes agree (" + label + ")",
                 std::abs(l_pencil - l_power) / l_power, 1e-8);

      // spectrum invariant under the phi_p similarity, p in {1, 2, inf}
      auto s1 = weighted_spectrum_p(G, hc.weight, m, hc.witness, hc.witness, 1.0);
      auto s2 = weighted_spectrum_p(G, hc.weight, m, hc.witness, hc.witness, 2.0);
      auto si = weighted_spectrum_p(G, hc.weight, m, hc.witness, hc.witness,
                                    std::numeric_limits<double>::infinity());
      double sdev = 0.0;
      for (size_t q = 0; q < s1.size(); ++q) {
        sdev = std::max(sdev, std::abs(s1[q] - s2[q]));
        sdev = std::max(sdev, std::abs(s1[q] - si[q]));
      }
      double sscale = std::abs(s1.back());
      c.check_le("phi_p similarity leaves the spectrum invariant (" + label + ")",
                 sdev / sscale, 1e-10);
    }

    c.op("semismall_profile");
    auto tail = semismall_profile(G, hc.weight, m, host, ex, anchor);
    c.find("semismall tail of W_mu (" + label + ")",
           nonincreasing(tail, 1e-6) ? "decreasing" : "not decreasing",
           json{{"s_n", tail}});

    c.op("cutoff_tail_norms");
    auto tails = cutoff_tail_norms(G, mu, m, host, ex, anchor);
    c.find("cutoff tails t_k (" + label + ")",
           nonincreasing(tails, 1e-6) ? "Lemma-style decay (trend)" : "not decaying",
           json{{"t_k", tails}});

    c.op("v_mu_comparison");
    VmuReport vr = v_mu_comparison(G, mu, m, host, ex, anchor);
    c.find("V_mu vs W_mu (" + label + ")", vr.verdict, {});
    if (label == "delta") {
      // G_mu = G(.,anchor): tail ratios identically 1
      double worst_ratio = 0.0;
      for (const auto& t : vr.tails)
        if (!t.empty)
          worst_ratio = std::max({worst_ratio, std::abs(t.g_ratio_max - 1.0),
                                  std::abs(t.g_ratio_min - 1.0)});
      c.check_le("delta mass: G_mu / G(.,y0) == 1", worst_ratio, 1e-12);
    }
    if (label == "compact") {
      c.check("compactly supported mu is comparable",
              vr.verdict == "comparable (trend)");
      auto tk = cutoff_tail_norms(G, mu, m, host, ex, anchor);
      c.check_le("compact mu: cutoff tails exactly zero beyond the support",
                 tk.back(), 0.0);
    }

    c.op("positive_criticality_check");
    auto pc = positive_criticality_check(hc.witness, hc.witness, hc.weight, m, host, ex);
    if (label == "uniform")
      c.check("W_mu family positive-critical (trend)",
              pc.verdict == PositiveCriticality::positive_critical_trend,
              pc.partial_sums.back());
  }

  // adversarial heavy-tailed mu: comparison must fail
  Vector heavy = Vector::Zero(n);
  for (Index x : interior)
    heavy[x] = std::exp(host.coords()[static_cast<size_t>(x)].norm());
  HardyConstruction hch = critical_hardy_weight(G, heavy, m);
  c.check_le("heavy-tail mu still satisfies invariance",
             invariance_residual(G, hch.weight, hch.witness, m), 1e-10);
  VmuReport vrh = v_mu_comparison(G, heavy, m, host, ex, anchor);
  c.check("heavy-tail mu is not comparable", vrh.verdict == "not comparable");
  auto tails_h = cutoff_tail_norms(G, heavy, m, host, ex, anchor);
  c.find("heavy-tail cutoff tails", "non-vanishing", json{{"t_k", tails_h}});
}

// ---------------------------------------------------------- torsion-audit

void preset_torsion(Ctx& c) {
  // path of 20 interior nodes
  Graph path = path_graph(20);
  DiscreteOperator Pp = DiscreteOperator::build(path, {}, {}, Vector::Zero(path.size()));
  c.op("build_operator");
  c.op("torsion_function");
  Torsion tp = torsion_function(Pp, path.interior());
  c.check_le("path torsional rigidity matches closed form 770",
             std::abs(tp.rigidity - 770.0), 1e-8);

  c.op("torsion_bound_audit");
  c.op("eigenvalue_lower_bound");
  c.op("spectrum");
  TorsionAudit ap = torsion_bound_audit(Pp, path.interior(), 1.0, 1.0);
  c.check("path audit passes (beta = N = 1)", ap.all_pass, ap.violations);

  c.op("heat_trace");
  EigenSystem sp = spectrum(Pp, path.interior());
  CsvTable tpath{{"j", "lambda_j", "bound_j"}, {}};
  for (size_t j = 1; j < sp.values.size(); ++j)
    tpath.rows.push_back({static_cast<double>(j), sp.values[j], ap.bounds[j - 1]});
  c.res.tables["path_spectrum"] = tpath;
  json traces;
  for (double t : {0.1, 1.0, 10.0})
    traces[format_double(t)] = heat_trace(sp.values, t);
  c.find("path heat traces", "computed", traces);

  // 15 x 15 grid
  Graph grid = box_graph_2d(15, 15);
  DiscreteOperator Pg = DiscreteOperator::build(grid, {}, {}, Vector::Zero(grid.size()));
  TorsionAudit ag = torsion_bound_audit(Pg, grid.interior(), 2.0, 2.0);
  c.check("grid audit passes (beta = N = 2)", ag.all_pass, ag.violations);
  c.find("grid torsion", "computed", json{{"T", ag.rigidity}, {"c_hat", ag.c_hat}});

  EigenSystem sg = spectrum(Pg, grid.interior());
  CsvTable tgrid{{"j", "lambda_j", "bound_j"}, {}};
  for (size_t j = 1; j < sg.values.size(); ++j)
    tgrid.rows.push_back({static_cast<double>(j), sg.values[j], ag.bounds[j - 1]});
  c.res.tables["grid_spectrum"] = tgrid;

  // homogeneity of the bound in T: degree -2/(beta+2)
  double b1 = eigenvalue_lower_bound(1.0, 2.0, 2.0, 1.0, 3);
  double b2 = eigenvalue_lower_bound(16.0, 2.0, 2.0, 1.0, 3);
  c.check_le("bound homogeneous of degree -1/2 in T (beta = 2)",
             std::abs(b2 - b1 / 4.0), 1e-12);
}

// --------------------------------------------------------- liouville-self

void preset_liouville_self(Ctx& c) {
  Graph host = path_graph(31);
  DiscreteOperator P = DiscreteOperator::build(host, {}, {}, Vector::Zero(host.size()));
  c.op("build_operator");
  c.op("liouville_compare");
  Vector Phi = Vector::Ones(host.size());  // P 1 = 0 for the pure Laplacian
  Vector W0 = Vector::Zero(host.size());
  LiouvilleReport rep = liouville_compare(P, P, Phi, Phi, {center_node(host)}, W0, Phi);
  c.check("self-comparison verdict critical", rep.verdict == "critical");
  c.check_le("eps0 equals 1 exactly", std::abs(rep.eps0 - 1.0), 0.0);
  c.check_le("residual is exactly 0", rep.residual, 0.0);
  bool hyp = true;
  for (const auto& h : rep.hypotheses) hyp = hyp && h.ok;
  c.check("all hypotheses verified", hyp);
  c.check_le("Psi/Phi ratio range collapses to 1",
             std::abs(rep.psi_phi_min - 1.0) + std::abs(rep.psi_phi_max - 1.0), 0.0);
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "path1d-subcritical", "line1d-critical-trend", "grid2d", "grid3d-transient",
      "hyperbolic-N2",      "hyperbolic-N3",         "hyperbolic-N4",
      "hyperbolic-N5",      "planar-exa",            "planar-exb",
      "wmu-family",         "torsion-audit",         "liouville-self"};
  return names;
}

const std::vector<std::string>& all_operation_names() {
  static const std::vector<std::string> ops = {
      // operator_core
      "build_operator", "apply", "adjoint", "check_ellipticity",
      // green
      "dirichlet_green", "minimal_green_exhaustion", "green_potential",
      "torsion_function", "check_duality",
      // perturbation
      "three_g_constant", "semismall_profile", "quasimetric_constant",
      "iterated_kernels", "neumann_series", "resolvent_check", "sandwich_check",
      "monotonicity_in_eps", "equivalence_interval", "schur_bound",
      "quasimetric_3g_check",
      // hardy
      "optimal_hardy_weight", "alpha_roots", "supersolution_pair",
      "critical_hardy_weight", "invariance_check", "v_mu_comparison",
      "cutoff_tail_norms",
      // spectral
      "principal_eigenvalue", "weighted_green_operator", "spectrum", "heat_trace",
      "eigenvalue_lower_bound", "torsion_bound_audit", "criticality_probe",
      "positive_criticality_check", "liouville_compare",
      // radial
      "hyperbolic_green", "hyperbolic_hardy", "hyperbolic_asymptotic_coeffs",
      "fit_expansion", "radial_residual", "planar_example_report", "hbig_probe"};
  return ops;
}

PresetResult run_preset(const std::string& name, const RunOptions& opts) {
  Ctx c(name, opts.seed);
  auto t0 = std::chrono::steady_clock::now();
  if (name == "path1d-subcritical")
    preset_path1d(c);
  else if (name == "line1d-critical-trend")
    preset_line1d(c);
  else if (name == "grid2d")
    preset_grid2d(c);
  else if (name == "grid3d-transient")
    preset_grid3d(c);
  else if (name == "hyperbolic-N2")
    preset_hyperbolic(c, 2);
  else if (name == "hyperbolic-N3")
    preset_hyperbolic(c, 3);
  else if (name == "hyperbolic-N4")
    preset_hyperbolic(c, 4);
  else if (name == "hyperbolic-N5")
    preset_hyperbolic(c, 5);
  else if (name == "planar-exa")
    preset_planar(c, 0.0);
  else if (name == "planar-exb")
    preset_planar(c, -1.0);
  else if (name == "wmu-family")
    preset_wmu(c);
  else if (name == "torsion-audit")
    preset_torsion(c);
  else if (name == "liouville-self")
    preset_liouville_self(c);
  else
    throw ConfigError("unknown preset '" + name + "'");
  auto t1 = std::chrono::steady_clock::now();
  c.res.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return c.res;
}

}  // namespace critlab
