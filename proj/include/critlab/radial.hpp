#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace critlab::radial {

using Profile = std::function<double(double)>;

/// Continuum radial models: the Laplace-Beltrami radial part on H^N,
///   f -> -f'' - (N-1) coth(r) f',
/// and the planar R^2 examples
///   f -> -f'' - f'/r                      (inverse-square potential case)
///   f -> -f'' - f'/r - (b/r) f' on r > 1  (drift case, b < 0).
struct RadialModel {
  enum class Kind { hyperbolic, planar_inverse_square, planar_drift };
  Kind kind = Kind::hyperbolic;
  double N = 3;       // hyperbolic dimension
  double lambda = 0;  // planar potential strength (< 0)
  double b = 0;       // planar drift constant (< 0), active on r > 1

  /// (N-1)^2/4, the bottom of the L^2 spectrum of -Laplace on H^N.
  double spectral_shift() const { return (N - 1) * (N - 1) / 4.0; }

  /// Applies the second-order radial part to (v, v', v'') at r.
  double apply(double r, double v, double dv, double ddv) const;
};

/// G~(r) = ∫_r^∞ sinh(s)^{-(N-1)} ds by adaptive quadrature after the
/// substitution t = e^{-s} (integrand 2^{N-1} t^{N-2} (1-t^2)^{-(N-1)}
/// over [0, e^{-r}]). Relative error <= 1e-10. Requires N >= 2, r > 0.
double hyperbolic_green(double N, double r);

/// Same integral from its geometric series; exact to round-off for
/// moderate and large r (ratio e^{-2r}).
double hyperbolic_green_series(double N, double r);

/// W(r) = (1/4) sinh(r)^{-2(N-1)} / G~(r)^2.
double hyperbolic_hardy(double N, double r);

/// W(r) - (N-1)^2/4 without cancellation: the difference
/// sinh^{-(N-1)} - (N-1) G~ is summed term by term from the two series
/// (all remaining terms positive). Accurate for r >= ~4.
double hardy_excess(double N, double r);

/// (leading, second) = ((N-1)^2/4, (N-1)^3/(N+1)).
std::pair<double, double> hyperbolic_asymptotic_coeffs(double N);

struct FitResult {
  double coefficient = 0;         // least-squares constant fit of e^{2r}(W - leading)
  double relative_deviation = 0;  // against (N-1)^3/(N+1)
};

FitResult fit_expansion(double N, double r_lo = 8.0, double r_hi = 15.0,
                        int samples = 29);

struct ResidualReport {
  double sup_relative = 0;  // sup |(P - lambda W) v| / |v| over the grid
  double min_signed = 0;    // min (P - lambda W) v / v (supersolution check)
  double step = 0;          // finite-difference step used
  bool step_ok = true;      // halved-step agreement within 10x tolerance
};

/// 5-point central finite differences (default h = 1e-3) applied to the
/// model's radial operator; relative sup residual of (P - lambda W) v.
/// Throws std::invalid_argument when the step-halving check explodes.
ResidualReport radial_residual(const RadialModel& model, const Profile& v,
                               double lambda, const Profile& W,
                               const std::vector<double>& grid, double h = 1e-3,
                               double tolerance = 1e-6);

struct PlanarReport {
  struct Row {
    double r = 0;
    double W = 0;           // (1/4) (d/dr log(G1/G2))^2
    double half_dV = 0;     // |V1 - V2| / 2
    double ratio = 0;       // half_dV / W
  };
  std::vector<Row> rows;
  bool inequality_everywhere = false;  // half_dV > W at every grid point
  double closed_form_max_err = 0;      // drift case: |W - printed closed form|
};

/// The two R^2 examples: lambda < 0, b <= 0 (b = 0 is the pure
/// inverse-square case). Confirms the printed strict inequality and, for
/// b < 0, the closed form of W to 1e-10.
PlanarReport planar_example_report(double lambda, double b,
                                   const std::vector<double>& grid);

struct DecayReport {
  double first = 0, last = 0;
  bool monotone = false;
  bool to_zero = false;        // last < 1e-3 * first
  std::string verdict;
};

/// Decay of G_profile/u along the grid and of its alpha_± powers — the
/// mechanism forcing any 0 < v <= h_± to satisfy v/u -> 0.
DecayReport hbig_probe(const Profile& u, const Profile& G_profile, double lambda,
                       const std::vector<double>& grid);

/// Ratio e^{-(2-eps) r} / (W(r) - (N-1)^2/4): increases without bound when
/// the Hardy excess is a short-range tail. Verdict is a monotone-growth
/// check over the grid.
DecayReport small_perturbation_decay(double N, double eps,
                                     const std::vector<double>& grid);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace critlab::radial
