// crit-lab: batch driver for the criticality workbench.
//
//   crit-lab run <config.json>            execute the configured task list
//   crit-lab preset <name> [--out DIR]    run a built-in scenario
//   crit-lab list-presets
//
// Exit codes: 0 all assertions passed, 1 assertion failure, 2 config error.

#include "critlab/hardy.hpp"
#include "critlab/io.hpp"
#include "critlab/perturbation.hpp"
#include "critlab/presets.hpp"
#include "critlab/radial.hpp"
#include "critlab/spectral.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace critlab {
namespace {

struct TaskBundle {
  std::vector<PresetResult> tasks;
  bool all_passed() const {
    for (const auto& t : tasks)
      if (!t.passed()) return false;
    return true;
  }
};

struct RunContext {
  DiscreteOperator op;
  std::optional<Exhaustion> exhaustion;
  Vector V;   // perturbation potential
  Vector mu;  // Hardy measure density
  json config;
  unsigned long seed = 1;
  std::filesystem::path out;
};

Vector config_node_function(const json& cfg, const char* key, const Graph& g,
                            double fallback) {
  if (!cfg.contains(key)) return Vector::Constant(g.size(), fallback);
  const json& j = cfg.at(key);
  if (j.is_number()) return Vector::Constant(g.size(), j.get<double>());
  Vector v(g.size());
  if (static_cast<Index>(j.size()) != g.size())
    throw ConfigError(std::string(key) + ": array length != node count");
  for (Index k = 0; k < g.size(); ++k) v[k] = j[static_cast<size_t>(k)].get<double>();
  return v;
}

void emit_tables(const PresetResult& r, const std::filesystem::path& dir) {
  for (const auto& [name, table] : r.tables)
    write_csv(dir / (r.name + "_" + name + ".csv"), table.header, table.rows);
}

// ---- tasks -------------------------------------------------------------

PresetResult task_green(const RunContext& rc) {
  PresetResult r;
  r.name = "green";
  auto check = [&](const std::string& n, bool ok, double v = 0, double t = 0) {
    r.assertions.push_back({n, ok, v, t});
  };
  const Graph& g = rc.op.graph();
  GreenMatrix G = dirichlet_green(rc.op, g.interior());
  r.operations = {"build_operator", "dirichlet_green", "apply", "check_duality"};
  check("green positivity", G.values.minCoeff() > 0.0, G.values.minCoeff());

  double repro = 0.0;
  Index probe_col = g.interior()[g.interior().size() / 2];
  Vector u = Vector::Zero(g.size());
  for (Index k = 0; k < G.dim(); ++k)
    u[G.domain[static_cast<size_t>(k)]] = G.values(k, G.local(probe_col));
  Vector Pu = rc.op.apply(u);
  for (Index x : g.interior()) {
    double want = x == probe_col ? 1.0 / g.measure(x) : 0.0;
    repro = std::max(repro, std::abs(Pu[x] - want));
  }
  check("green reproduction residual <= 1e-10", repro <= 1e-10, repro, 1e-10);
  double dual = duality_gap(rc.op, g.interior());
  check("duality gap <= 1e-12", dual <= 1e-12, dual, 1e-12);

  if (rc.exhaustion) {
    double tol = rc.config.value("tolerances", json::object()).value("exhaustion", 1e-8);
    GreenMatrix Gex = minimal_green_exhaustion(rc.op, *rc.exhaustion, tol);
    r.operations.push_back("minimal_green_exhaustion");
    r.findings.push_back({"exhaustion",
                          Gex.converged ? "converged"
                                        : (Gex.blowup_trend ? "critical/limit-blowup trend"
                                                            : "not converged"),
                          json{{"trace", Gex.convergence_trace}, {"tol", tol}}});
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < Gex.convergence_trace.size(); ++k)
      rows.push_back({static_cast<double>(k + 1), Gex.convergence_trace[k]});
    r.tables["trace"] = {{"level", "sup_rel_change"}, rows};
  }

  Torsion t = torsion_function(rc.op, g.interior());
  r.operations.push_back("torsion_function");
  r.findings.push_back({"torsion", "computed", json{{"T", t.rigidity}}});

  write_green_csv(rc.out / "green.csv", G);
  write_green_binary(rc.out / "green.bin", G, 1e-12);
  return r;
}

PresetResult task_perturb(const RunContext& rc) {
  PresetResult r;
  r.name = "perturb";
  auto check = [&](const std::string& n, bool ok, double v = 0, double t = 0) {
    r.assertions.push_back({n, ok, v, t});
  };
  const Graph& g = rc.op.graph();
  const Vector& m = g.measure();
  GreenMatrix G = dirichlet_green(rc.op, g.interior());
  double C0 = three_g_constant(G, rc.V, m);
  r.operations = {"three_g_constant", "iterated_kernels", "neumann_series",
                  "resolvent_check", "sandwich_check"};
  r.findings.push_back({"3G constant", "finite", json{{"C0", C0}}});

  iterated_kernels(G, rc.V, m, 5);
  check("iterated kernel bound holds (i <= 5)", true);

  double eps = 1.0 / (4.0 * C0);
  NeumannResult nr = neumann_series(G, rc.V, m, eps);
  check("neumann converged at eps = 1/(4 C0)", nr.converged, nr.spectral_radius);
  DiscreteOperator pp = DiscreteOperator::build(g, rc.op.drift_b(), rc.op.drift_b_tilde(),
                                                rc.op.potential() - eps * rc.V);
  GreenMatrix Gp = dirichlet_green(pp, g.interior());
  double err = (nr.H - Gp.values).cwiseAbs().maxCoeff() / G.values.maxCoeff();
  check("neumann vs direct <= 1e-9", err <= 1e-9, err, 1e-9);
  double res = resolvent_residual(G, nr.H, rc.V, m, eps);
  check("resolvent residual <= 1e-9", res <= 1e-9, res, 1e-9);
  if (rc.V.minCoeff() >= 0.0) {
    SandwichReport sw = sandwich_check(G, Gp.values, eps, C0);
    check("sandwich bounds hold", sw.lower_ok && sw.upper_ok, sw.lower_margin);
  }

  if (rc.op.symmetric() && G.dim() <= 400) {
    QuasimetricCheck qc = quasimetric_3g_check(G);
    r.operations.push_back("quasimetric_constant");
    r.operations.push_back("quasimetric_3g_check");
    check("quasimetric 3G identity", qc.ok, qc.worst_ratio);
    r.findings.push_back({"quasimetric constant", "finite", json{{"C", qc.constant}}});
  }

  if (rc.exhaustion && rc.V.minCoeff() >= 0.0 && rc.V.maxCoeff() > 0.0) {
    Index anchor = g.interior()[g.interior().size() / 2];
    auto prof = classify_perturbation(G, rc.V, m, g, *rc.exhaustion, anchor);
    r.operations.push_back("semismall_profile");
    r.findings.push_back(
        {"perturbation profile",
         prof.semismall_trend ? "semismall (trend)" : "tails not vanishing",
         json{{"semismall_tail", prof.semismall_tail}, {"small_tail", prof.small_tail}}});

    double lam0 = principal_eigenvalue(rc.op, g.interior(), rc.V);
    r.operations.push_back("principal_eigenvalue");
    r.operations.push_back("equivalence_interval");
    r.operations.push_back("monotonicity_in_eps");
    check("green monotone in eps",
          monotone_in_eps(rc.op, g.interior(), rc.V, 0.1 * lam0, 0.2 * lam0));
    std::vector<double> grid = {0.0, 0.3 * lam0, 0.6 * lam0, 0.9 * lam0};
    auto pts = equivalence_interval(rc.op, g.interior(), rc.V, grid,
                                    rc.exhaustion->levels[0]);
    check("equivalence ratio at lambda = 0 is 1", std::abs(pts[0].ratio - 1.0) <= 1e-13,
          pts[0].ratio);
    std::vector<std::vector<double>> rows;
    for (const auto& pt : pts) rows.push_back({pt.lambda, pt.ratio});
    r.tables["lambda_sweep"] = {{"lambda", "ratio"}, rows};

    // Schur certificate with the principal eigenvector as test function
    if (rc.op.symmetric() && rc.V.minCoeff() > 0.0) {
      EigenSystem sys = spectrum(rc.op, g.interior());
      Vector u0 = sys.vectors.col(0);
      if (u0.sum() < 0) u0 = -u0;
      Vector uh = Vector::Zero(g.size());
      for (size_t k = 0; k < g.interior().size(); ++k)
        uh[g.interior()[k]] = u0[static_cast<Index>(k)];
      SchurReport sb = schur_bound(G, rc.V, m, uh, 0.4 * lam0, 0.1 * lam0, lam0);
      r.operations.push_back("schur_bound");
      check("schur certificate", sb.certified, sb.bound);
    }
  }
  return r;
}

PresetResult task_hardy(const RunContext& rc) {
  PresetResult r;
  r.name = "hardy";
  auto check = [&](const std::string& n, bool ok, double v = 0, double t = 0) {
    r.assertions.push_back({n, ok, v, t});
  };
  const Graph& g = rc.op.graph();
  const Vector& m = g.measure();
  GreenMatrix G = dirichlet_green(rc.op, g.interior());
  HardyConstruction hc = critical_hardy_weight(G, rc.mu, m);
  r.operations = {"critical_hardy_weight", "invariance_check", "green_potential"};
  double inv = invariance_residual(G, hc.weight, hc.witness, m);
  check("invariance residual <= 1e-10", inv <= 1e-10, inv, 1e-10);
  Vector pr = rc.op.apply(hc.witness);
  double worst = 0.0;
  for (Index x : g.interior())
    worst = std::max(worst, std::abs(pr[x] - hc.weight[x] * hc.witness[x]));
  worst /= rc.mu.maxCoeff();
  check("(P - W_mu) G_mu = 0 to 1e-12", worst <= 1e-12, worst, 1e-12);

  if (rc.exhaustion) {
    Index anchor = g.interior()[g.interior().size() / 2];
    std::vector<double> lam;
    for (const auto& lvl : rc.exhaustion->levels)
      lam.push_back(principal_eigenvalue(rc.op, lvl, hc.weight));
    r.operations.push_back("principal_eigenvalue");
    bool ge1 = true, noninc = true;
    for (size_t k = 0; k < lam.size(); ++k) {
      ge1 = ge1 && lam[k] >= 1.0 - 1e-8;
      if (k) noninc = noninc && lam[k] <= lam[k - 1] * (1 + 1e-9);
    }
    check("lambda0(P, W_mu, M_j) >= 1", ge1, lam.back());
    check("lambda0 nonincreasing", noninc);

    auto tails = cutoff_tail_norms(G, rc.mu, m, g, *rc.exhaustion, anchor);
    r.operations.push_back("cutoff_tail_norms");
    r.operations.push_back("v_mu_comparison");
    VmuReport vr = v_mu_comparison(G, rc.mu, m, g, *rc.exhaustion, anchor);
    r.findings.push_back({"V_mu comparison", vr.verdict, {}});
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < tails.size(); ++k)
      rows.push_back({static_cast<double>(k + 1), tails[k]});
    r.tables["cutoff_tails"] = {{"k", "t_k"}, rows};
  }

  // optimal construction driven from a Green potential and a positive solution
  Vector phi = Vector::Zero(g.size());
  Index anchor = g.interior()[g.interior().size() / 2];
  phi[anchor] = 1.0;
  Vector gp = green_potential(G, phi, m);
  Vector G_phi = Vector::Zero(g.size());
  for (Index k = 0; k < G.dim(); ++k) G_phi[G.domain[static_cast<size_t>(k)]] = gp[k];
  Vector u = rc.op.harmonic_extension(Vector::Ones(static_cast<Index>(g.boundary().size())));
  HardyConstruction oh = optimal_hardy_weight(rc.op, g.interior(), G_phi, u);
  r.operations.push_back("optimal_hardy_weight");
  r.operations.push_back("alpha_roots");
  r.operations.push_back("supersolution_pair");
  check("(P - W) sqrt(G_phi u) = 0 to 1e-10", oh.identity_residual <= 1e-10,
        oh.identity_residual, 1e-10);
  auto roots = alpha_roots(0.75);
  check("alpha_- + alpha_+ = 1", std::abs(roots.first + roots.second - 1.0) <= 1e-15);
  supersolution_pair(u, G_phi, 0.75);
  r.findings.push_back({"optimal hardy sign",
                        oh.negative_nodes.empty() ? "nonnegative" : "negative at isolated nodes",
                        json{{"negative_nodes", oh.negative_nodes.size()}}});
  return r;
}

PresetResult task_spectral(const RunContext& rc) {
  PresetResult r;
  r.name = "spectral";
  auto check = [&](const std::string& n, bool ok, double v = 0, double t = 0) {
    r.assertions.push_back({n, ok, v, t});
  };
  const Graph& g = rc.op.graph();
  const Vector& m = g.measure();
  GreenMatrix G = dirichlet_green(rc.op, g.interior());
  Vector W = rc.V.cwiseAbs();
  if (W.maxCoeff() == 0.0) W = Vector::Ones(g.size());

  double l_power = principal_eigenvalue_power(G, W, m);
  r.operations = {"principal_eigenvalue", "weighted_green_operator"};
  if (rc.op.symmetric() && W.minCoeff() > 0.0) {
    double l_pencil = principal_eigenvalue(rc.op, g.interior(), W);
    check("pencil and power lambda0 agree to 1e-8",
          std::abs(l_pencil - l_power) / l_power <= 1e-8,
          std::abs(l_pencil - l_power) / l_power, 1e-8);
  }
  WeightedGreenOperator wg = weighted_green_operator(G, W, m);
  check("perron value equals 1/lambda0",
        std::abs(wg.perron_value - 1.0 / l_power) / wg.perron_value <= 1e-8);
  r.findings.push_back({"perron", "computed",
                        json{{"rho", wg.perron_value}, {"gap", wg.spectral_gap}}});

  if (rc.op.symmetric()) {
    EigenSystem sys = spectrum(rc.op, g.interior());
    r.operations.push_back("spectrum");
    r.operations.push_back("heat_trace");
    json traces;
    for (double t : {0.1, 1.0, 10.0}) traces[format_double(t)] = heat_trace(sys.values, t);
    r.findings.push_back({"heat traces", "computed", traces});
    std::vector<std::vector<double>> rows;
    for (size_t j = 0; j < sys.values.size(); ++j)
      rows.push_back({static_cast<double>(j), sys.values[j]});
    r.tables["spectrum"] = {{"j", "lambda_j"}, rows};

    if (rc.config.contains("torsion_audit")) {
      const json& ta = rc.config.at("torsion_audit");
      TorsionAudit audit = torsion_bound_audit(rc.op, g.interior(),
                                               ta.value("beta", 2.0), ta.value("N", 2.0));
      r.operations.push_back("torsion_bound_audit");
      r.operations.push_back("eigenvalue_lower_bound");
      check("torsion eigenvalue audit", audit.all_pass, audit.violations);
    }
  }

  if (rc.exhaustion && rc.exhaustion->depth() >= 3) {
    Vector probe_w = Vector::Zero(g.size());
    probe_w[rc.exhaustion->levels[0][rc.exhaustion->levels[0].size() / 2]] = 1.0;
    CriticalityProbe probe = criticality_probe(
        rc.op, *rc.exhaustion, probe_w,
        rc.config.value("tolerances", json::object()).value("exhaustion", 1e-8));
    r.operations.push_back("criticality_probe");
    r.findings.push_back({"criticality probe", probe.verdict,
                          json{{"lambda0_levels", probe.lambda0_levels},
                               {"green_blowup", probe.green_blowup},
                               {"green_converged", probe.green_converged}}});
    r.operations.push_back("positive_criticality_check");
    GreenMatrix Gfull = dirichlet_green(rc.op, g.interior());
    HardyConstruction hc = critical_hardy_weight(Gfull, rc.mu, m);
    auto pc = positive_criticality_check(hc.witness, hc.witness, hc.weight, m, g,
                                         *rc.exhaustion);
    r.findings.push_back({"positive criticality of W_mu", to_string(pc.verdict),
                          json{{"partial_sums", pc.partial_sums}}});
  }
  return r;
}

PresetResult task_radial(const RunContext& rc) {
  using namespace radial;
  PresetResult r;
  r.name = "radial";
  auto check = [&](const std::string& n, bool ok, double v = 0, double t = 0) {
    r.assertions.push_back({n, ok, v, t});
  };
  json cfg = rc.config.value("radial", json{{"N", 3.0}, {"lambda", 0.75}});
  double N = cfg.value("N", 3.0);
  double lambda = cfg.value("lambda", 0.75);
  r.operations = {"hyperbolic_green", "hyperbolic_hardy", "hyperbolic_asymptotic_coeffs",
                  "fit_expansion", "radial_residual", "hbig_probe", "alpha_roots"};

  FitResult fit = fit_expansion(N);
  check("asymptotic coefficient fit within 1%", fit.relative_deviation <= 0.01,
        fit.coefficient, hyperbolic_asymptotic_coeffs(N).second);

  RadialModel model{RadialModel::Kind::hyperbolic, N, 0, 0};
  auto W = [N](double rr) {
    return hardy_excess(N, rr) + hyperbolic_asymptotic_coeffs(N).first;
  };
  auto grid = linspace(5.0, 12.0, 25);
  auto [am, ap] = alpha_roots(lambda);
  std::vector<std::vector<double>> rows;
  for (double alpha : {am, ap}) {
    auto v = [N, alpha](double rr) {
      return std::pow(hyperbolic_green_series(N, rr), alpha);
    };
    ResidualReport rr = radial_residual(model, v, lambda, W, grid);
    check("radial residual <= 1e-6 (alpha = " + format_double(alpha) + ")",
          rr.sup_relative <= 1e-6, rr.sup_relative, 1e-6);
  }
  for (double rr : grid)
    rows.push_back({rr, hyperbolic_green(N, rr), hyperbolic_hardy(N, rr)});
  r.tables["profile"] = {{"r", "green", "hardy"}, rows};

  DecayReport dec = hbig_probe([](double) { return 1.0; },
                               [N](double rr) { return hyperbolic_green_series(N, rr); },
                               lambda, linspace(4.0, 16.0, 25));
  r.findings.push_back({"h-big probe", dec.verdict, json{{"last", dec.last}}});
  return r;
}

PresetResult task_liouville(const RunContext& rc) {
  PresetResult r;
  r.name = "liouville";
  auto check = [&](const std::string& n, bool ok, double v = 0, double t = 0) {
    r.assertions.push_back({n, ok, v, t});
  };
  const Graph& g = rc.op.graph();
  Vector Phi =
      rc.op.harmonic_extension(Vector::Ones(static_cast<Index>(g.boundary().size())));
  Vector W0 = Vector::Zero(g.size());
  Index mid = g.interior()[g.interior().size() / 2];
  LiouvilleReport rep = liouville_compare(rc.op, rc.op, Phi, Phi, {mid}, W0, Phi);
  r.operations = {"liouville_compare"};
  check("self-comparison critical", rep.verdict == "critical");
  check("eps0 = 1", rep.eps0 == 1.0, rep.eps0, 1.0);
  check("residual = 0", rep.residual == 0.0, rep.residual, 0.0);
  json hyp = json::array();
  for (const auto& h : rep.hypotheses)
    hyp.push_back({{"name", h.name}, {"ok", h.ok}, {"margin", h.margin}});
  r.findings.push_back({"hypotheses", "verified", hyp});
  return r;
}

TaskBundle run_config(const RunContext& rc, const std::vector<std::string>& tasks) {
  TaskBundle bundle;
  std::vector<std::string> expanded;
  for (const auto& t : tasks) {
    if (t == "verify-all") {
      for (const char* s : {"green", "perturb", "hardy", "spectral", "liouville"})
        expanded.push_back(s);
      if (rc.config.contains("radial")) expanded.push_back("radial");
    } else {
      expanded.push_back(t);
    }
  }
  for (const auto& t : expanded) {
    PresetResult res;
    try {
      if (t == "green")
        res = task_green(rc);
      else if (t == "perturb")
        res = task_perturb(rc);
      else if (t == "hardy")
        res = task_hardy(rc);
      else if (t == "spectral")
        res = task_spectral(rc);
      else if (t == "radial")
        res = task_radial(rc);
      else if (t == "liouville")
        res = task_liouville(rc);
      else
        throw ConfigError("unknown task '" + t + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      // task failures isolate; the bundle still fails overall
      res.name = t;
      res.assertions.push_back({"task completed", false, 0, 0});
      res.findings.push_back({"error", e.what(), {}});
    }
    emit_tables(res, rc.out);
    bundle.tasks.push_back(std::move(res));
  }
  return bundle;
}

void write_summary(const std::filesystem::path& out, const json& summary,
                   const std::vector<PresetResult>& results) {
  std::ofstream js(out / "summary.json");
  js << summary.dump(2) << "\n";
  std::ofstream txt(out / "summary.txt");
  for (const auto& r : results) {
    txt << "== " << r.name << (r.passed() ? "  [ok]" : "  [FAILED]") << "\n";
    for (const auto& a : r.assertions)
      txt << "  " << (a.passed ? "pass  " : "FAIL  ") << a.name
          << "  (value " << format_double(a.value) << ")\n";
    for (const auto& f : r.findings)
      txt << "  note  " << f.name << ": " << f.verdict << "\n";
  }
}

int cmd_run(const std::string& config_path) {
  json cfg;
  {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config " + config_path);
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  if (!cfg.contains("tasks") || cfg.at("tasks").empty())
    throw ConfigError("config error: empty task list");
  for (const auto& [key, tol] : cfg.value("tolerances", json::object()).items())
    if (!(tol.get<double>() > 0.0))
      throw ConfigError("config error: tolerance '" + key + "' must be positive");

  RunContext rc{operator_from_json(cfg.contains("operator")
                                       ? cfg.at("operator")
                                       : throw ConfigError("config error: missing operator")),
                {},
                {},
                {},
                cfg,
                cfg.value("seed", 1ul),
                cfg.value("output", std::string("crit-lab-out"))};
  if (cfg.contains("exhaustion"))
    rc.exhaustion = exhaustion_from_json(rc.op.graph(), cfg.at("exhaustion"));
  rc.V = config_node_function(cfg, "V", rc.op.graph(), 1.0);
  rc.mu = config_node_function(cfg, "mu", rc.op.graph(), 1.0);
  std::filesystem::create_directories(rc.out);

  std::vector<std::string> tasks;
  for (const auto& t : cfg.at("tasks")) tasks.push_back(t.get<std::string>());
  TaskBundle bundle = run_config(rc, tasks);

  json summary;
  summary["config_seed"] = rc.seed;
  summary["passed"] = bundle.all_passed();
  summary["tasks"] = json::array();
  for (const auto& t : bundle.tasks) summary["tasks"].push_back(t.to_json());
  write_summary(rc.out, summary, bundle.tasks);

  for (const auto& t : bundle.tasks) {
    std::cout << (t.passed() ? "[ok]     " : "[FAILED] ") << t.name << "\n";
    for (const auto& a : t.assertions)
      if (!a.passed) std::cout << "    FAIL " << a.name << "\n";
  }
  std::cout << (bundle.all_passed() ? "all assertions passed" : "assertion failures")
            << "; reports in " << rc.out.string() << "\n";
  return bundle.all_passed() ? 0 : 1;
}

int cmd_preset(const std::string& name, const std::string& out_dir,
               unsigned long seed) {
  PresetResult res = run_preset(name, {seed});
  std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);
  emit_tables(res, out);
  json summary;
  summary["passed"] = res.passed();
  summary["presets"] = json::array({res.to_json()});
  write_summary(out, summary, {res});
  std::cout << (res.passed() ? "[ok]     " : "[FAILED] ") << res.name << "  ("
            << res.assertions.size() << " assertions, "
            << static_cast<int>(res.elapsed_ms) << " ms)\n";
  for (const auto& a : res.assertions)
    if (!a.passed)
      std::cout << "    FAIL " << a.name << "  value " << format_double(a.value)
                << "\n";
  std::cout << "reports in " << out.string() << "\n";
  return res.passed() ? 0 : 1;
}

}  // namespace
}  // namespace critlab

int main(int argc, char** argv) {
  CLI::App app{"criticality workbench batch driver"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir = "crit-lab-out";
  unsigned long seed = 1;

  auto* run = app.add_subcommand("run", "execute a config file");
  run->add_option("config", config_path, "JSON config")->required();

  auto* preset = app.add_subcommand("preset", "run a built-in scenario");
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--out", out_dir, "output directory");
  preset->add_option("--seed", seed, "seed for randomized pieces");

  auto* list = app.add_subcommand("list-presets", "list built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& n : critlab::preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (run->parsed()) return critlab::cmd_run(config_path);
    if (preset->parsed()) return critlab::cmd_preset(preset_name, out_dir, seed);
  } catch (const critlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
