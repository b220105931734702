#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbly/bounds.hpp"
#include "fracbly/error.hpp"
#include "fracbly/lemma.hpp"
#include "fracbly/numeric.hpp"

using namespace fracbly;
using doctest::Approx;

namespace {

std::vector<double> alpha_grid() {
  std::vector<double> a;
  for (int i = 1; i <= 8; ++i) a.push_back(0.25 * i);
  return a;
}

}  // namespace

TEST_CASE("h and g at the anchor points") {
  for (int d = 2; d <= 8; ++d) {
    for (double a : alpha_grid()) {
      const auto v = h_value(1.0, d, a);
      CHECK(std::abs(v.h) < 1e-13);
      CHECK(std::abs(v.g) < 1e-13);
      CHECK(std::abs(v.g_prime) < 1e-12);
      CHECK(h_value(0.0, d, a).h == 0.0);
    }
  }
  CHECK(h_value(0.0, 3, 1.0).g == Approx(3.0));  // 3 alpha
  CHECK(h_value(0.0, 2, 1.5).g == Approx(2 * 1.5 - 2));
  CHECK_THROWS_AS(h_value(-0.1, 3, 1.0), InvalidInput);
  CHECK_THROWS_AS(h_value(1.0, 1, 1.0), InvalidInput);
}

TEST_CASE("critical point") {
  CHECK_FALSE(critical_point(2, 1.5).has_value());
  for (double a : alpha_grid()) CHECK(*critical_point(3, a) == 0.0);
  const double x = *critical_point(5, 2.0);
  CHECK(x == Approx(std::sqrt(0.42)).epsilon(1e-14));
  CHECK(x == Approx(0.64807).epsilon(1e-5));
  for (int d = 4; d <= 8; ++d) {
    for (double a : alpha_grid()) {
      const double xc = *critical_point(d, a);
      CHECK(xc < 1.0);
      CHECK(std::abs(h_value(xc, d, a).g_double_prime) < 1e-9);
    }
  }
}

TEST_CASE("h = x^2 g on random x") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(1e-3, 20.0);
  for (int d = 2; d <= 8; ++d) {
    for (double a : alpha_grid()) {
      for (int i = 0; i < 50; ++i) {
        const double x = ux(rng);
        const auto v = h_value(x, d, a);
        const double scale = d * std::pow(x, d + a) + (d + a) * std::pow(x, d) + a * (2 * x + 1) * (x - 1) * (x - 1) + a;
        CHECK(std::abs(v.h - x * x * v.g) <= 1e-13 * scale);
        CHECK(std::abs(h_factored(x, d, a) - v.h) <= 1e-13 * scale);
      }
    }
  }
}

TEST_CASE("g derivatives against finite differences") {
  for (int d : {2, 3, 5}) {
    for (double a : {0.5, 1.25, 2.0}) {
      for (double x : {0.3, 1.7, 4.0}) {
        const double e = 1e-5;
        const double gp = (h_value(x + e, d, a).g - h_value(x - e, d, a).g) / (2 * e);
        const double gpp = (h_value(x + e, d, a).g_prime - h_value(x - e, d, a).g_prime) / (2 * e);
        CHECK(h_value(x, d, a).g_prime == Approx(gp).epsilon(1e-7));
        CHECK(h_value(x, d, a).g_double_prime == Approx(gpp).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("g is convex beyond the critical point") {
  for (int d = 3; d <= 8; ++d) {
    for (double a : alpha_grid()) {
      const double xc = *critical_point(d, a);
      for (int i = 0; i <= 2000; ++i) {
        const double x = xc + (20.0 - xc) * i / 2000.0;
        if (x == 0.0) continue;
        CHECK(h_value(x, d, a).g_double_prime >= -1e-12);
      }
    }
  }
}

TEST_CASE("key gap") {
  CHECK(key_gap(1, 1, 3, 1.0) == Approx(0.0));
  CHECK(key_gap(2, 1, 3, 1.0) == Approx(4.0).epsilon(1e-14));
  CHECK(key_gap(2, 1, 3, 1.0) == Approx(h_value(2.0, 3, 1.0).h / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(key_gap(2, 1, 2, 0.5), RegionViolation);
  CHECK_NOTHROW(key_gap(2, 1, 2, 0.5, true));
  CHECK_THROWS_AS(key_gap(0, 1, 3, 1.0), InvalidInput);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const int d = 2 + static_cast<int>(rng() % 7);
    const double a = d == 2 ? 1.0 + std::fmod(u(rng), 1.0) : std::fmod(u(rng), 1.999) + 1e-3;
    const double x = u(rng), y = u(rng);
    const double gap = key_gap(x, y, d, a);
    const double scale = std::pow(x, d + a) + std::pow(y, d + a);
    CHECK(std::abs(gap - std::pow(y, d + a) / d * h_value(x / y, d, a).h) <= 1e-10 * scale);
    CHECK(gap >= -1e-12 * scale);
  }
}

TEST_CASE("scan in the valid region") {
  const auto r = scan_min_gap(3, 1.5, 10.0, 100000);
  CHECK(r.valid_region);
  CHECK(r.min_h >= -kLemmaTolerance);
  CHECK_FALSE(r.counterexample.has_value());
  const auto r2 = scan_min_gap(2, 1.0, 20.0, 10000);
  CHECK(r2.min_h == 0.0);
  CHECK_THROWS_AS(scan_min_gap(3, 1.0, 1.0, 1000), InvalidInput);
  CHECK_THROWS_AS(scan_min_gap(3, 1.0, 10.0, 999), InvalidInput);
}

TEST_CASE("scan finds a certified counterexample for d = 2, alpha < 1") {
  for (double a : {0.25, 0.5, 0.75}) {
    const auto r = scan_min_gap(2, a, 20.0, 100000);
    CHECK_FALSE(r.valid_region);
    REQUIRE(r.counterexample.has_value());
    CHECK(r.counterexample->h < -1e-6);
    CHECK(r.counterexample->certified);
    CHECK(r.counterexample->enclosure.contains(r.counterexample->h));
    // a small-x witness too: g(x) = 2 x^a - 2 a x + 2 a - 2 < 0 just off zero
    CHECK(h_enclosure(0.01, 2, a).certainly_negative());
  }
}

TEST_CASE("interval enclosure contains the float value") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(0.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double x = ux(rng);
    const auto iv = h_enclosure(x, 4, 0.7);
    CHECK(iv.lower() <= iv.upper());
    CHECK(iv.contains(h_value(x, 4, 0.7).h));
  }
}

TEST_CASE("moment integrals") {
  const auto m = moment_integrals(0.0, 0.5);
  CHECK(m.i0 == Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(m.i1 == Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(m.bound1 == Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(moment_integrals(3.0, 0.5).i0 == Approx((std::pow(3.5, 3) - std::pow(2.5, 3)) / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(moment_integrals(-1.0, 1.0), InvalidInput);
  // Simpson oracle for the three integrals
  for (double tau : {0.0, 0.7, 4.2}) {
    for (double b : {0.5, 1.3, 8.0}) {
      const int n = 2000;
      double s0 = 0, s1 = 0;
      for (int i = 0; i <= n; ++i) {
        const double a = tau + double(i) / n;
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s0 += w * (a - b) * (a - b);
        s1 += w * a * (a - b) * (a - b);
      }
      s0 /= 3.0 * n;
      s1 /= 3.0 * n;
      const auto mi = moment_integrals(tau, b);
      CHECK(mi.i0 == Approx(s0).epsilon(1e-12));
      CHECK(mi.i1 == Approx(s1).epsilon(1e-12));
      CHECK(mi.i_comb == Approx(2 * s1 + b * s0).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma_d and its inverse") {
  for (int d = 2; d <= 8; ++d) CHECK(gamma_solve(1.0 / (d + 1), d) == 0.0);
  CHECK(gamma_solve(7.0 / 3.0, 2) == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_solve(0.3, 2), InvalidInput);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const int d = 2 + static_cast<int>(rng() % 7);
    const double v = 1.0 / (d + 1) + std::ldexp(static_cast<double>(rng() >> 11), -53) * 1e4;
    const double t = gamma_solve(v, d);
    CHECK(t >= 0.0);
    CHECK(rel_diff(gamma_d(t, d), v) < 1e-12);
  }
  for (int i = 0; i < 500; ++i) {
    const int d = 2 + static_cast<int>(rng() % 7);
    const double x = std::ldexp(static_cast<double>(rng() >> 11), -53) * 50;
    const double dx = 1e-6 + std::ldexp(static_cast<double>(rng() >> 11), -53);
    CHECK(gamma_d(x + dx, d) > gamma_d(x, d));
    CHECK(gamma_d(x, d) == Approx((std::pow(x + 1, d + 1) - std::pow(x, d + 1)) / (d + 1)).epsilon(1e-10));
  }
}

TEST_CASE("tent polynomial") {
  const auto t0 = tent_poly(0.0, 3, 1.0);
  CHECK(t0.nu1 == Approx(1.0));
  CHECK(t0.nu2 == 0.0);
  CHECK(t0(0.5) == Approx(std::pow(0.5, 4) - std::pow(0.5, 3)));
  const auto t1 = tent_poly(1.0, 3, 2.0);
  CHECK(t1.nu1 == Approx(31.0 / 7.0).epsilon(1e-15));
  CHECK(t1.nu2 == Approx(24.0 / 7.0).epsilon(1e-15));
  CHECK(std::abs(t1(1.0)) < 1e-14);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const double a = d == 2 ? 1.0 + (rng() % 100) / 100.0 : 0.05 + (rng() % 195) / 100.0;
    const double tau = (rng() % 1000) / 100.0;
    const auto t = tent_poly(tau, d, a);
    CHECK(t.nu1 > 0);
    CHECK(t.nu2 >= 0);
    const double scale = std::pow(tau + 1, d + a);
    CHECK(std::abs(t(tau)) <= 1e-10 * scale);
    CHECK(std::abs(t(tau + 1)) <= 1e-10 * scale);
    double in_max = -INFINITY, out_min = INFINITY;
    for (int j = 0; j <= 10000; ++j) {
      const double x = (tau + 3) * j / 10000.0;
      const double v = t(x);
      if (x > tau && x < tau + 1) {
        in_max = std::max(in_max, v);
      } else if (x < tau || x > tau + 1) {
        out_min = std::min(out_min, v);
      }
    }
    CHECK(in_max <= 1e-10 * scale);
    CHECK(out_min >= -1e-10 * scale);
  }
}

TEST_CASE("theta minimisation on the unit square") {
  const auto g = summarize(Domain::box({1.0, 1.0}));
  const auto m = theta_monotonicity(g, 2, 2.0, 1);
  CHECK(m.omega_cap == Approx(1.0 / (4 * kPi * kPi)).epsilon(1e-14));
  CHECK(m.omega_cap == Approx(0.02533).epsilon(1e-3));
  CHECK(m.thresholds_hold);
  CHECK(m.is_decreasing);
  CHECK(m.min_location == m.omega_cap);
  const auto t = theta_terms(g, 2, 2.0, 1, g.omega_cap);
  const auto p = prop_lower(g, {2, 2.0, 1, 1, 1});
  for (std::size_t j = 0; j < 4; ++j) CHECK(rel_diff(t[j], p.terms[j]) < 1e-12);
}

TEST_CASE("proof replay state") {
  const std::vector<Domain> doms = {Domain::box({1.0, 1.0}), Domain::disk(1.0), Domain::box({1, 1, 1})};
  for (const auto& dom : doms) {
    const auto g = summarize(dom);
    const int d = dom.dimension();
    for (std::int64_t k : {1, 10, 1000}) {
      for (double frac : {1.0, 0.5, 0.1}) {
        const auto s = replay_proof(g, d, 1.5, k, frac * g.omega_cap);
        CHECK(d * s.zeta >= 1.0 / (d + 1) * (1 - 1e-12));
        CHECK(rel_diff(gamma_d(s.tau, d), d * s.zeta) < 1e-12);
        CHECK(s.nu1 > 0);
        CHECK(s.nu2 >= 0);
        CHECK(s.eta > 0);
        const TentPolynomial t{s.tau, d, 1.5, s.nu1, s.nu2};
        const double scale = std::pow(s.tau + 1, d + 1.5);
        CHECK(std::abs(t(s.tau)) <= 1e-10 * scale);
        CHECK(std::abs(t(s.tau + 1)) <= 1e-10 * scale);
      }
    }
  }
  const auto g = summarize(Domain::box({1.0, 1.0}));
  CHECK_THROWS_AS(replay_proof(g, 2, 1.5, 1, 2 * g.omega_cap), InvalidInput);
}

TEST_CASE("bathtub comparison for random step densities") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const double a = d == 2 ? 1.0 + u(rng) : 0.05 + 1.95 * u(rng);
    StepDensity th;
    const int pieces = 1 + static_cast<int>(rng() % 64);
    double total = 0;
    for (int i = 0; i < pieces; ++i) {
      th.heights.push_back(u(rng));
      total += th.heights.back();
    }
    if (total <= 0) continue;
    th.width = 1.0 / total;
    REQUIRE(th.admissible(1e-12));
    const double tau = gamma_solve(th.moment(d), d);
    const double lhs = power_integral(tau, tau + 1, d + a);
    const double rhs = th.moment(d + a);
    CHECK(lhs <= rhs * (1 + 1e-12));
    ++checked;
  }
  CHECK(checked > 990);
}
