#include "critlab/radial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace critlab::radial {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// adaptive Simpson with Richardson correction
double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = simpson(a, b, fa, fm, fb);
  double tol = std::abs(whole) * rel_tol;
  if (tol == 0.0) tol = rel_tol;
  return adapt(f, a, b, fa, fm, fb, whole, tol, 48);
}

double binom_row(double N, int k) {
  // binom(N-2+k, k) for real N
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= (N - 2.0 + i) / i;
  return v;
}

void check_hyperbolic_args(double N, double r) {
  if (!(N >= 2.0)) throw std::invalid_argument("hyperbolic model: need N >= 2");
  if (!(r > 0.0)) throw std::invalid_argument("hyperbolic model: need r > 0");
}

}  // namespace

double RadialModel::apply(double r, double v, double dv, double ddv) const {
  (void)v;  // the radial parts carry no zeroth-order term; potentials enter as lambda W
  switch (kind) {
    case Kind::hyperbolic:
      return -ddv - (N - 1.0) / std::tanh(r) * dv;
    case Kind::planar_inverse_square:
      return -ddv - dv / r;
    case Kind::planar_drift:
      return -ddv - dv / r - (r > 1.0 ? b / r * dv : 0.0);
  }
  return 0.0;
}

double hyperbolic_green(double N, double r) {
  check_hyperbolic_args(N, r);
  double upper = std::exp(-r);
  double scale = std::pow(2.0, N - 1.0);
  auto f = [N](double t) {
    return std::pow(t, N - 2.0) * std::pow(1.0 - t * t, -(N - 1.0));
  };
  return scale * integrate(f, 0.0, upper, 1e-12);
}

double hyperbolic_green_series(double N, double r) {
  check_hyperbolic_args(N, r);
  // G~ = 2^{N-1} Σ_k binom(N-2+k,k) e^{-(N-1+2k) r} / (N-1+2k)
  double q = std::exp(-2.0 * r);
  double e = std::exp(-(N - 1.0) * r);
  double acc = 0.0, qk = 1.0;
  for (int k = 0; k < 500; ++k) {
    double term = binom_row(N, k) * qk / (N - 1.0 + 2.0 * k);
    acc += term;
    if (term < 1e-18 * acc) break;
    qk *= q;
  }
  return std::pow(2.0, N - 1.0) * e * acc;
}

double hyperbolic_hardy(double N, double r) {
  check_hyperbolic_args(N, r);
  double g = hyperbolic_green(N, r);
  double s = std::pow(std::sinh(r), -(N - 1.0));
  return 0.25 * s * s / (g * g);
}

double hardy_excess(double N, double r) {
  check_hyperbolic_args(N, r);
  // W - ((N-1)/2)^2 = (1/4)(f - (N-1))(f + (N-1)),  f = sinh^{-(N-1)}/G~.
  // The difference D = sinh^{-(N-1)} - (N-1) G~ is summed term by term:
  //   D = 2^{N-1} Σ_{k>=1} binom(N-2+k,k) (2k / (N-1+2k)) e^{-(N-1+2k) r}.
  double q = std::exp(-2.0 * r);
  double accD = 0.0, accG = 1.0 / (N - 1.0), qk = q;
  for (int k = 1; k < 500; ++k) {
    double c = binom_row(N, k);
    accD += c * (2.0 * k / (N - 1.0 + 2.0 * k)) * qk;
    accG += c * qk / (N - 1.0 + 2.0 * k);
    if (c * qk < 1e-18 * (accD + accG)) break;
    qk *= q;
  }
  // common factors 2^{N-1} e^{-(N-1)r} cancel in D/G~
  double f_minus = accD / accG;                       // f - (N-1)
  double f_plus = f_minus + 2.0 * (N - 1.0);          // f + (N-1)
  return 0.25 * f_minus * f_plus;
}

std::pair<double, double> hyperbolic_asymptotic_coeffs(double N) {
  if (!(N >= 2.0)) throw std::invalid_argument("hyperbolic model: need N >= 2");
  double nm = N - 1.0;
  return {nm * nm / 4.0, nm * nm * nm / (N + 1.0)};
}

FitResult fit_expansion(double N, double r_lo, double r_hi, int samples) {
  if (!(r_hi > r_lo) || samples < 2)
    throw std::invalid_argument("fit_expansion: degenerate range");
  if (r_lo < 4.0)
    throw std::invalid_argument("fit_expansion: range below the asymptotic regime");
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    double r = r_lo + (r_hi - r_lo) * i / (samples - 1);
    acc += std::exp(2.0 * r) * hardy_excess(N, r);
  }
  FitResult fit;
  fit.coefficient = acc / samples;  // least-squares constant = mean
  double target = hyperbolic_asymptotic_coeffs(N).second;
  fit.relative_deviation = std::abs(fit.coefficient - target) / target;
  return fit;
}

namespace {

struct Stencil {
  double v, dv, ddv;
};

Stencil five_point(const Profile& f, double r, double h) {
  double f0 = f(r), f1 = f(r + h), f_1 = f(r - h), f2 = f(r + 2 * h), f_2 = f(r - 2 * h);
  Stencil s;
  s.v = f0;
  s.dv = (-f2 + 8.0 * f1 - 8.0 * f_1 + f_2) / (12.0 * h);
  s.ddv = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * f_1 - f_2) / (12.0 * h * h);
  return s;
}

ResidualReport residual_pass(const RadialModel& model, const Profile& v, double lambda,
                             const Profile& W, const std::vector<double>& grid,
                             double h) {
  ResidualReport rep;
  rep.step = h;
  rep.min_signed = std::numeric_limits<double>::infinity();
  for (double r : grid) {
    if (r - 2 * h <= 0.0)
      throw std::invalid_argument("radial_residual: grid point too close to r = 0");
    Stencil s = five_point(v, r, h);
    if (!(s.v > 0.0))
      throw std::invalid_argument("radial_residual: profile must be positive on the grid");
    double res = (model.apply(r, s.v, s.dv, s.ddv) - lambda * W(r) * s.v) / s.v;
    rep.sup_relative = std::max(rep.sup_relative, std::abs(res));
    rep.min_signed = std::min(rep.min_signed, res);
  }
  return rep;
}

}  // namespace

ResidualReport radial_residual(const RadialModel& model, const Profile& v,
                               double lambda, const Profile& W,
                               const std::vector<double>& grid, double h,
                               double tolerance) {
  ResidualReport rep = residual_pass(model, v, lambda, W, grid, h);
  ResidualReport half = residual_pass(model, v, lambda, W, grid, 0.5 * h);
  rep.step_ok = std::abs(rep.sup_relative - half.sup_relative) <= 10.0 * tolerance;
  if (!rep.step_ok)
    throw std::invalid_argument(
        "radial_residual: step-halving disagreement exceeds 10x tolerance; "
        "grid too coarse for the profile curvature");
  return rep;
}

PlanarReport planar_example_report(double lambda, double b,
                                   const std::vector<double>& grid) {
  if (!(lambda < 0.0)) throw std::invalid_argument("planar example: need lambda < 0");
  if (b > 0.0) throw std::invalid_argument("planar example: need b <= 0");
  double s = std::sqrt(b * b - 4.0 * lambda);
  double kappa = (-b - s) / 2.0;  // G2 = r^kappa, G1 = 1
  PlanarReport rep;
  rep.inequality_everywhere = true;
  for (double r : grid) {
    PlanarReport::Row row;
    row.r = r;
    // (1/4) (d/dr log(G1/G2))^2 = kappa^2 / (4 r^2)
    row.W = kappa * kappa / (4.0 * r * r);
    row.half_dV = std::abs(lambda) / (2.0 * r * r);
    row.ratio = row.half_dV / row.W;
    rep.inequality_everywhere = rep.inequality_everywhere && row.half_dV > row.W;
    if (b < 0.0) {
      double closed = std::abs(lambda) / (4.0 * r * r) -
                      b * b / (8.0 * r * r) *
                          (std::sqrt(1.0 + 4.0 * std::abs(lambda) / (b * b)) - 1.0);
      rep.closed_form_max_err = std::max(rep.closed_form_max_err, std::abs(row.W - closed));
    }
    rep.rows.push_back(row);
  }
  return rep;
}

DecayReport hbig_probe(const Profile& u, const Profile& G_profile, double lambda,
                       const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("hbig_probe: need a grid");
  DecayReport rep;
  std::vector<double> ratio;
  for (double r : grid) ratio.push_back(G_profile(r) / u(r));
  rep.first = ratio.front();
  rep.last = ratio.back();
  rep.monotone = true;
  for (size_t k = 1; k < ratio.size(); ++k)
    rep.monotone = rep.monotone && ratio[k] <= ratio[k - 1] * (1.0 + 1e-12);
  rep.to_zero = rep.last < 1e-2 * rep.first;
  bool powers_ok = true;
  if (lambda > 0.0 && lambda <= 1.0) {
    double am = (1.0 - std::sqrt(1.0 - lambda)) / 2.0;
    double ap = (1.0 + std::sqrt(1.0 - lambda)) / 2.0;
    powers_ok = std::pow(rep.last / rep.first, am) < 1.0 &&
                std::pow(rep.last / rep.first, ap) < 1.0;
  }
  rep.verdict = rep.monotone && rep.to_zero && powers_ok
                    ? "h-big mechanism confirmed"
                    : "decay not observed";
  return rep;
}

DecayReport small_perturbation_decay(double N, double eps,
                                     const std::vector<double>& grid) {
  DecayReport rep;
  std::vector<double> ratio;
  for (double r : grid)
    ratio.push_back(std::exp(-(2.0 - eps) * r) / hardy_excess(N, r));
  rep.first = ratio.front();
  rep.last = ratio.back();
  rep.monotone = true;
  for (size_t k = 1; k < ratio.size(); ++k)
    rep.monotone = rep.monotone && ratio[k] >= ratio[k - 1];
  rep.to_zero = false;
  // the excess is an e^{-2r} tail, so the ratio must track e^{eps r}
  double expected = std::exp(eps * (grid.back() - grid.front()));
  bool tracks = std::abs(rep.last / rep.first / expected - 1.0) < 0.01;
  rep.verdict = rep.monotone && tracks
                    ? "ratio grows without bound (short-range tail)"
                    : "growth not observed";
  return rep;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

}  // namespace critlab::radial
