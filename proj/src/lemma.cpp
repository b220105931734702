#include "fracbly/lemma.hpp"

#include <cmath>
#include <limits>
#include <tuple>
#include <sstream>

#include "fracbly/bounds.hpp"
#include "fracbly/error.hpp"
#include "fracbly/numeric.hpp"

namespace fracbly {

namespace {

void check_order(int d, double alpha) {
  if (d < 2) throw InvalidInput("key inequality needs d >= 2");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidInput("key inequality needs 0 < alpha <= 2");
}

// c * x^p with the convention 0 * anything = 0.
double term(double c, double x, double p) { return c == 0.0 ? 0.0 : c * std::pow(x, p); }

double g_poly(double x, int d, double a) {
  return d * std::pow(x, d + a - 2.0) - (d + a) * std::pow(x, d - 2.0) - 2.0 * a * x + 3.0 * a;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::optional<double> critical_point(int d, double alpha) {
  check_order(d, alpha);
  if (d == 2) return std::nullopt;
  if (d == 3) return 0.0;
  const double a = alpha;
  const double ratio = ((d + a) * (d - 2.0) * (d - 3.0)) / (d * (d + a - 2.0) * (d + a - 3.0));
  return std::pow(ratio, 1.0 / a);
}

HValue h_value(double x, int d, double alpha) {
  check_order(d, alpha);
  if (!(x >= 0.0)) throw InvalidInput("h_value needs x >= 0");
  const double a = alpha;
  HValue out;
  out.h = d * std::pow(x, d + a) - (d + a) * std::pow(x, d) + a -
          a * (2.0 * x + 1.0) * (x - 1.0) * (x - 1.0);
  out.g = g_poly(x, d, a);
  out.g_prime = term(d * (d + a - 2.0), x, d + a - 3.0) - term((d + a) * (d - 2.0), x, d - 3.0) -
                2.0 * a;
  out.g_double_prime = term(d * (d + a - 2.0) * (d + a - 3.0), x, d + a - 4.0) -
                       term((d + a) * (d - 2.0) * (d - 3.0), x, d - 4.0);
  out.x_crit = critical_point(d, alpha);
  return out;
}

double h_factored(double x, int d, double alpha) {
  if (x == 0.0) return 0.0;
  return x * x * g_poly(x, d, alpha);
}

Interval h_enclosure(double x, int d, double alpha) {
  const Interval X(x);
  const Interval A(alpha);
  const Interval D(static_cast<double>(d));
  const Interval one(1.0);
  const Interval two(2.0);
  const Interval xm1 = X - one;
  return D * pow(X, d + alpha) - (D + A) * pow(X, static_cast<double>(d)) + A -
         A * (two * X + one) * xm1 * xm1;
}

double key_gap(double a, double b, int d, double alpha, bool force) {
  check_order(d, alpha);
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("key_gap needs a, b > 0");
  if (!force && !in_key_region(d, alpha)) {
    std::ostringstream os;
    os << "key inequality (d=" << d << ", alpha=" << alpha
       << ") outside its region: d = 2 requires alpha >= 1";
    throw RegionViolation(os.str());
  }
  const double al = alpha;
  const double rhs = (d + al) / d * std::pow(a, d) * std::pow(b, al) - al / d * std::pow(b, d + al) +
                     al / d * std::pow(b, d + al - 3.0) * (2.0 * a + b) * (a - b) * (a - b);
  return std::pow(a, d + al) - rhs;
}

LemmaScanResult scan_min_gap(int d, double alpha, double x_max, int n_points) {
  check_order(d, alpha);
  if (!(x_max >= 2.0)) throw InvalidInput("scan_min_gap needs x_max >= 2");
  if (n_points < 1000) throw InvalidInput("scan_min_gap needs at least 1000 points");

  LemmaScanResult res;
  res.d = d;
  res.alpha = alpha;
  res.x_max = x_max;
  res.n_points = n_points;
  res.valid_region = in_key_region(d, alpha);

  const double step = x_max / (n_points - 1);
  int best = 0;
  double best_h = h_factored(0.0, d, alpha);
  for (int i = 1; i < n_points; ++i) {
    const double x = i == n_points - 1 ? x_max : i * step;
    const double h = h_factored(x, d, alpha);
    if (h < best_h) {
      best_h = h;
      best = i;
    }
  }
  double best_x = best == n_points - 1 ? x_max : best * step;

  // Golden-section refinement on the two cells around the grid minimum.
  double lo = std::max(0.0, best_x - step);
  double hi = std::min(x_max, best_x + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double e = lo + inv_phi * (hi - lo);
  double fc = h_factored(c, d, alpha);
  double fe = h_factored(e, d, alpha);
  while (hi - lo > 1e-10) {
    if (fc < fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - inv_phi * (hi - lo);
      fc = h_factored(c, d, alpha);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + inv_phi * (hi - lo);
      fe = h_factored(e, d, alpha);
    }
  }
  for (double x : {lo, hi, 0.5 * (lo + hi)}) {
    const double h = h_factored(x, d, alpha);
    if (h < best_h) {
      best_h = h;
      best_x = x;
    }
  }

  res.min_h = best_h;
  res.argmin_x = best_x;
  if (best_h < -kLemmaTolerance) {
    Counterexample ce;
    ce.x = best_x;
    ce.h = best_h;
    ce.enclosure = h_enclosure(best_x, d, alpha);
    ce.certified = ce.enclosure.certainly_negative();
    res.counterexample = ce;
  }
  return res;
}

MomentIntegrals moment_integrals(double tau, double b) {
  if (!(tau >= 0.0)) throw InvalidInput("moment_integrals needs tau >= 0");
  MomentIntegrals m;
  const double u1 = tau + 1.0 - b;
  const double u0 = tau - b;
  m.i0 = (u1 * u1 * u1 - u0 * u0 * u0) / 3.0;
  // a (a-b)^2 = (a-b)^3 + b (a-b)^2
  m.i1 = (u1 * u1 * u1 * u1 - u0 * u0 * u0 * u0) / 4.0 + b * m.i0;
  m.i_comb = 2.0 * m.i1 + b * m.i0;
  m.bound0 = 1.0 / 12.0;
  m.bound1 = 0.5 * b * b - 2.0 * b / 3.0 + 0.25;
  m.bound_comb = b * b - 1.25 * b + 0.5;
  return m;
}

double gamma_d(double x, int d) {
  if (d < 1) throw InvalidInput("gamma_d needs d >= 1");
  if (!(x >= 0.0)) throw InvalidInput("gamma_d needs x >= 0");
  // ((x+1)^{d+1} - x^{d+1}) / (d+1) expanded into positive terms.
  double s = 0.0;
  double xp = 1.0;
  for (int i = 0; i <= d; ++i) {
    s += binomial(d + 1, i) * xp;
    xp *= x;
  }
  return s / (d + 1.0);
}

double gamma_solve(double target, int d) {
  if (d < 1) throw InvalidInput("gamma_solve needs d >= 1");
  const double floor = 1.0 / (d + 1.0);
  if (!(target >= floor)) {
    std::ostringstream os;
    os << "gamma_solve: target " << target << " below gamma_d(0) = 1/(d+1); no tau >= 0";
    throw InvalidInput(os.str());
  }
  if (target == floor) return 0.0;
  // gamma_d(t) >= t^d, so t = target^{1/d} brackets the root from above.
  double lo = 0.0;
  double hi = std::pow(target, 1.0 / d);
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = gamma_d(t, d) - target;
    if (std::abs(f) <= 1e-15 * target) return t;
    if (f > 0.0) hi = t; else lo = t;
    const double deriv = std::pow(t + 1.0, d) - std::pow(t, d);
    double next = t - f / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-16 * std::max(1.0, t)) return next;
    t = next;
  }
  if (rel_diff(gamma_d(t, d), target) <= 1e-12) return t;
  throw ConvergenceError("gamma_solve did not converge");
}

double TentPolynomial::operator()(double x) const {
  return std::pow(x, d + alpha) - nu1 * std::pow(x, d) + nu2;
}

TentPolynomial tent_poly(double tau, int d, double alpha) {
  if (!(tau >= 0.0)) throw InvalidInput("tent_poly needs tau >= 0");
  check_order(d, alpha);
  TentPolynomial t;
  t.tau = tau;
  t.d = d;
  t.alpha = alpha;
  const double num = std::pow(tau + 1.0, d + alpha) - std::pow(tau, d + alpha);
  const double den = std::pow(tau + 1.0, d) - std::pow(tau, d);
  t.nu1 = num / den;
  t.nu2 = t.nu1 * std::pow(tau, d) - std::pow(tau, d + alpha);
  return t;
}

std::array<double, 4> theta_terms(const GeometrySummary& geom, int d, double a, std::int64_t k,
                                  double x) {
  const double kk = static_cast<double>(k);
  const double w = geom.omega_d;
  const double b = geom.beta;
  std::array<double, 4> t{};
  t[0] = d * std::pow(kk, 1.0 + a / d) / ((a + d) * std::pow(w, a / d)) * std::pow(x, -a / d);
  t[1] = a * std::pow(kk, 1.0 + (a - 1.0) / d) / ((a + d) * b * std::pow(w, (a - 1.0) / d)) *
         std::pow(x, 1.0 - (a - 1.0) / d);
  t[2] = -5.0 * a * std::pow(kk, 1.0 + (a - 2.0) / d) /
         (4.0 * (a + d) * b * b * std::pow(w, (a - 2.0) / d)) * std::pow(x, 2.0 - (a - 2.0) / d);
  t[3] = a * std::pow(kk, 1.0 + (a - 3.0) / d) /
         (2.0 * (a + d) * b * b * b * std::pow(w, (a - 3.0) / d)) * std::pow(x, 3.0 - (a - 3.0) / d);
  return t;
}

double theta(const GeometrySummary& geom, int d, double alpha, std::int64_t k, double x) {
  const auto t = theta_terms(geom, d, alpha, k, x);
  return compensated_sum(t);
}

namespace {

std::pair<double, double> theta_thresholds(const GeometrySummary& geom, int d, double a,
                                           std::int64_t k) {
  const double scale = geom.beta * std::pow(static_cast<double>(k), 1.0 / d) /
                       std::pow(geom.omega_d, 1.0 / d);
  const double e = d / (d + 1.0);
  const double x1 = std::pow(d * scale / (2.0 * (d - a + 1.0)), e);
  const double x2 = std::pow(5.0 * (2.0 * d + 2.0 - a) * scale / (2.0 * (3.0 * d + 3.0 - a)), e);
  return {x1, x2};
}

}  // namespace

ThetaMonotonicity theta_monotonicity(const GeometrySummary& geom, int d, double alpha,
                                     std::int64_t k, int grid_points) {
  check_order(d, alpha);
  if (geom.dimension() != d) throw InvalidInput("theta_monotonicity: geometry dimension mismatch");
  if (k < 1) throw InvalidInput("theta_monotonicity needs k >= 1");
  if (grid_points < 2) throw InvalidInput("theta_monotonicity needs at least 2 grid points");
  ThetaMonotonicity out;
  std::tie(out.x1, out.x2) = theta_thresholds(geom, d, alpha, k);
  out.omega_cap = geom.omega_cap;
  out.thresholds_hold = out.omega_cap <= std::min(out.x1, out.x2);

  double prev = theta(geom, d, alpha, k, out.omega_cap / grid_points);
  double best = prev;
  out.min_location = out.omega_cap / grid_points;
  out.max_relative_increase = -std::numeric_limits<double>::infinity();
  for (int i = 2; i <= grid_points; ++i) {
    const double x = i == grid_points ? out.omega_cap : out.omega_cap * i / grid_points;
    const double cur = theta(geom, d, alpha, k, x);
    out.max_relative_increase = std::max(out.max_relative_increase, (cur - prev) / std::abs(prev));
    if (cur <= best) {
      best = cur;
      out.min_location = x;
    }
    prev = cur;
  }
  out.is_decreasing = out.thresholds_hold && out.max_relative_increase <= kThetaSlack;
  return out;
}

ProofReplayState replay_proof(const GeometrySummary& geom, int d, double a, std::int64_t k,
                              double x) {
  check_order(d, a);
  if (!(x > 0.0 && x <= geom.omega_cap * (1.0 + 1e-15))) {
    throw InvalidInput("replay_proof needs 0 < x <= |Omega| / (2 pi)^d");
  }
  ProofReplayState s;
  s.x = x;
  s.zeta = std::pow(geom.beta, d) * static_cast<double>(k) /
           (d * geom.omega_d * std::pow(x, d + 1.0));
  const double dz = d * s.zeta;
  s.tau = gamma_solve(dz, d);
  const TentPolynomial t = tent_poly(s.tau, d, a);
  s.nu1 = t.nu1;
  s.nu2 = t.nu2;
  std::tie(s.x1, s.x2) = theta_thresholds(geom, d, a, k);
  s.eta = std::pow(dz, 1.0 + a / d) / (a + d) +
          a / (d * (a + d)) * std::pow(dz, 1.0 + (a - 1.0) / d) -
          5.0 * a / (4.0 * d * (a + d)) * std::pow(dz, 1.0 + (a - 2.0) / d) +
          a / (2.0 * d * (a + d)) * std::pow(dz, 1.0 + (a - 3.0) / d);
  return s;
}

double power_integral(double lo, double hi, double p) {
  return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / (p + 1.0);
}

double StepDensity::moment(double p) const {
  CompensatedSum s;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (heights[i] == 0.0) continue;
    s.add(heights[i] * power_integral(i * width, (i + 1) * width, p));
  }
  return s.value();
}

double StepDensity::mass() const {
  CompensatedSum s;
  for (double h : heights) s.add(h * width);
  return s.value();
}

bool StepDensity::admissible(double tol) const {
  for (double h : heights) {
    if (h < -tol || h > 1.0 + tol) return false;
  }
  return std::abs(mass() - 1.0) <= tol;
}

}  // namespace fracbly
