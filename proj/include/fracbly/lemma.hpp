#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fracbly/geometry.hpp"
#include "fracbly/interval.hpp"

namespace fracbly {

// Key inequality machinery. For x >= 0,
//   h(x) = d x^{d+a} - (d+a) x^d + a - a (2x+1)(x-1)^2 = x^2 g(x),
//   g(x) = d x^{d+a-2} - (d+a) x^{d-2} - 2 a x + 3 a.
// h >= 0 whenever (d, a) lies in the key region (see in_key_region).

struct HValue {
  double h = 0.0;  // direct formula
  double g = 0.0;  // polynomial form, finite at x = 0
  double g_prime = 0.0;
  double g_double_prime = 0.0;
  /// Inflection point of g: 0 for d = 3, empty for d = 2.
  std::optional<double> x_crit;
};

HValue h_value(double x, int d, double alpha);

/// h(x) evaluated as x^2 g(x); free of the cancellation in the direct form.
double h_factored(double x, int d, double alpha);

/// Enclosure of the direct formula for h at the point x.
Interval h_enclosure(double x, int d, double alpha);

/// Point where g'' changes sign for d >= 4; 0 for d = 3; empty for d = 2.
std::optional<double> critical_point(int d, double alpha);

/// a^{d+a} minus the right side of the key inequality. Throws
/// RegionViolation outside the key region unless `force` is set.
double key_gap(double a, double b, int d, double alpha, bool force = false);

struct Counterexample {
  double x = 0.0;
  double h = 0.0;
  Interval enclosure;
  bool certified = false;  // enclosure lies strictly below zero
};

struct LemmaScanResult {
  int d = 0;
  double alpha = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
  bool valid_region = false;
  double min_h = 0.0;
  double argmin_x = 0.0;
  std::optional<Counterexample> counterexample;
};

inline constexpr double kLemmaTolerance = 1e-12;

/// Dense scan of h on [0, x_max] followed by golden-section refinement
/// around the grid minimum. Runs for any (d, alpha), so it doubles as the
/// counterexample search outside the key region.
LemmaScanResult scan_min_gap(int d, double alpha, double x_max, int n_points);

struct MomentIntegrals {
  double i0 = 0.0;      // int_tau^{tau+1} (a-b)^2 da
  double i1 = 0.0;      // int_tau^{tau+1} a (a-b)^2 da
  double i_comb = 0.0;  // int_tau^{tau+1} (2a+b)(a-b)^2 da
  double bound0 = 0.0;
  double bound1 = 0.0;
  double bound_comb = 0.0;
};

MomentIntegrals moment_integrals(double tau, double b);

/// gamma_d(x) = int_x^{x+1} a^d da, strictly increasing on [0, inf).
double gamma_d(double x, int d);

/// The tau >= 0 with gamma_d(tau) = target. Requires target >= 1/(d+1).
double gamma_solve(double target, int d);

/// T(x) = x^{d+a} - nu1 x^d + nu2, vanishing at tau and tau + 1.
struct TentPolynomial {
  double tau = 0.0;
  int d = 0;
  double alpha = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;

  [[nodiscard]] double operator()(double x) const;
};

TentPolynomial tent_poly(double tau, int d, double alpha);

/// The four summands of the lower bound on sum lambda_j expressed through
/// x = phi_k(0) (the value of the rearranged Fourier mass at the origin),
/// evaluated directly from beta and omega_d.
std::array<double, 4> theta_terms(const GeometrySummary& geom, int d, double alpha,
                                  std::int64_t k, double x);
double theta(const GeometrySummary& geom, int d, double alpha, std::int64_t k, double x);

struct ThetaMonotonicity {
  double x1 = 0.0;
  double x2 = 0.0;
  double omega_cap = 0.0;
  bool thresholds_hold = false;      // omega_cap <= min(x1, x2)
  double max_relative_increase = 0;  // max_i (theta(x_{i+1}) - theta(x_i)) / |theta(x_i)|
  bool is_decreasing = false;
  double min_location = 0.0;
};

inline constexpr double kThetaSlack = 1e-10;

ThetaMonotonicity theta_monotonicity(const GeometrySummary& geom, int d, double alpha,
                                     std::int64_t k, int grid_points = 10000);

/// Scalars of the proof chain for a trial x = phi_k(0) in (0, omega_cap].
struct ProofReplayState {
  double zeta = 0.0;  // beta^d k / (d omega_d x^{d+1})
  double eta = 0.0;   // smallest eta permitted by the moment estimates
  double tau = 0.0;   // gamma_d(tau) = d zeta
  double nu1 = 0.0;
  double nu2 = 0.0;
  double x = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

ProofReplayState replay_proof(const GeometrySummary& geom, int d, double alpha, std::int64_t k,
                              double x);

/// Piecewise-constant density on [0, width * heights.size()).
struct StepDensity {
  double width = 0.0;
  std::vector<double> heights;

  /// int_0^inf a^p theta(a) da, exact per piece.
  [[nodiscard]] double moment(double p) const;
  [[nodiscard]] double mass() const;
  /// 0 <= theta <= 1 and unit mass within tol.
  [[nodiscard]] bool admissible(double tol = 1e-12) const;
};

/// Integral of a^p over [lo, hi].
double power_integral(double lo, double hi, double p);

}  // namespace fracbly
