#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fracbly/bounds.hpp"
#include "fracbly/error.hpp"
#include "fracbly/numeric.hpp"
#include "fracbly/spectrum.hpp"

using namespace fracbly;
using doctest::Approx;

namespace {

std::vector<double> brute_force_box(const std::vector<double>& edges, int K, int cap) {
  const double pi2 = kPi * kPi;
  std::vector<double> inv;
  for (double a : edges) inv.push_back(1.0 / (a * a));
  std::vector<double> vals;
  std::vector<int> m(edges.size(), 1);
  while (true) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) v = v + pi2 * static_cast<double>(m[i] * m[i]) * inv[i];
    vals.push_back(v);
    std::size_t i = m.size();
    while (i > 0) {
      --i;
      if (++m[i] <= cap) break;
      m[i] = 1;
      if (i == 0) {
        std::sort(vals.begin(), vals.end());
        vals.resize(static_cast<std::size_t>(K));
        return vals;
      }
    }
  }
}

// J0 by its power series; accurate for x below about 15.
double j0_series(double x) {
  double term = 1.0, sum = 1.0;
  const double q = -(x * x) / 4.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double bisect_root(double (*f)(double), double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("unit square spectrum") {
  const auto s = box_spectrum(Domain::box({1.0, 1.0}), 3);
  REQUIRE(s.count() == 3);
  CHECK(s.values[0] == Approx(2 * kPi * kPi).epsilon(1e-15));
  CHECK(s.values[1] == Approx(5 * kPi * kPi).epsilon(1e-15));
  CHECK(s.values[2] == Approx(5 * kPi * kPi).epsilon(1e-15));
  CHECK(s.values[0] == Approx(19.7392).epsilon(1e-5));
  CHECK(s.is_exact());
  CHECK(s.operator_tag() == "laplacian_exact");
  CHECK(box_spectrum(Domain::box({1.0, 2.0}), 1).values[0] == Approx(1.25 * kPi * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(box_spectrum(Domain::disk(1.0), 3), InvalidInput);
  CHECK_THROWS_AS(box_spectrum(Domain::box({1.0, 1.0}), 0), InvalidInput);
}

TEST_CASE("box spectrum equals brute-force enumeration") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = trial < 3 ? 2 : 3;
    std::vector<double> edges;
    for (int i = 0; i < d; ++i) edges.push_back(u(rng));
    const int K = 500;
    const auto s = box_spectrum(Domain::box(edges), K);
    const auto oracle = brute_force_box(edges, K, d == 2 ? 120 : 30);
    CHECK(s.values == oracle);
  }
}

TEST_CASE("box spectrum scales as t^-2") {
  const auto a = box_spectrum(Domain::box({1.0, 1.7, 0.6}), 200);
  const auto b = box_spectrum(Domain::box({2.5, 4.25, 1.5}), 200);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(rel_diff(b.values[i], a.values[i] / 6.25) < 1e-13);
}

TEST_CASE("box spectrum in higher dimension") {
  const auto s = box_spectrum(Domain::box({1, 1, 1, 1}), 5);
  CHECK(s.values[0] == Approx(4 * kPi * kPi).epsilon(1e-15));
  for (int i = 1; i < 5; ++i) CHECK(s.values[i] == Approx(7 * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("disk spectrum") {
  const double j01 = bisect_root(j0_series, 2.0, 3.0);
  const auto s = radial_spectrum(Domain::disk(1.0), 10);
  CHECK(s.values[0] == Approx(j01 * j01).epsilon(1e-13));
  CHECK(s.values[0] == Approx(5.78319).epsilon(1e-5));
  CHECK(s.values[0] < s.values[1]);
  CHECK(s.values[1] == s.values[2]);
  const double j02 = bisect_root(j0_series, 5.0, 6.0);
  CHECK(std::any_of(s.values.begin(), s.values.end(), [&](double v) { return rel_diff(v, j02 * j02) < 1e-12; }));
  const auto big = radial_spectrum(Domain::disk(2.0), 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(rel_diff(big.values[i], s.values[i] / 4) < 1e-13);
}

TEST_CASE("ball spectrum") {
  const auto s = radial_spectrum(Domain::ball(3, 1.0), 400);
  CHECK(s.values[0] == Approx(kPi * kPi).epsilon(1e-12));
  // l = 0 gives (m pi)^2; l = 1 has multiplicity 3
  for (int m = 1; m <= 5; ++m) {
    const double target = (m * kPi) * (m * kPi);
    CHECK(std::any_of(s.values.begin(), s.values.end(), [&](double v) { return rel_diff(v, target) < 1e-12; }));
  }
  CHECK(s.values[1] == s.values[2]);
  CHECK(s.values[2] == s.values[3]);
  CHECK(s.values[3] < s.values[4]);
  CHECK_THROWS_AS(radial_spectrum(Domain::ball(4, 1.0), 3), InvalidInput);
  CHECK(bessel_zero(0.5, 3) == Approx(3 * kPi).epsilon(1e-14));
}

TEST_CASE("sorted and positive") {
  for (const auto& dom : {Domain::box({2.0, 1.0}), Domain::disk(1.0), Domain::ball(3, 1.0), Domain::box({1, 1, 1})}) {
    const auto s = exact_spectrum(dom, 2000);
    CHECK(s.count() == 2000);
    CHECK(s.values.front() > 0);
    CHECK(std::is_sorted(s.values.begin(), s.values.end()));
  }
  CHECK_THROWS_AS(exact_spectrum(Domain::polygon({{0, 0}, {1, 0}, {0, 1}}), 3), InvalidInput);
}

TEST_CASE("power spectrum") {
  const auto s = box_spectrum(Domain::box({1.0, 1.0}), 50);
  const auto id = power_spectrum(s, 1.0);
  CHECK(id.values == s.values);
  const auto half = power_spectrum(s, 0.5);
  CHECK(half.values[0] == Approx(std::sqrt(2.0) * kPi).epsilon(1e-15));
  CHECK(half.values[0] == Approx(4.44288).epsilon(1e-5));
  CHECK(std::is_sorted(half.values.begin(), half.values.end()));
  CHECK(half.operator_tag() == "laplacian_power(0.5)");
  CHECK_THROWS_AS(power_spectrum(s, 0.0), InvalidInput);
  CHECK_THROWS_AS(power_spectrum(s, 1.5), InvalidInput);
  std::mt19937_64 rng(3);
  Spectrum r;
  for (int i = 0; i < 100; ++i) r.values.push_back(1e-3 + (rng() % 100000) / 7.0);
  std::sort(r.values.begin(), r.values.end());
  const auto rp = power_spectrum(r, 0.37);
  CHECK(std::is_sorted(rp.values.begin(), rp.values.end()));
}

TEST_CASE("partial sums") {
  const auto s = box_spectrum(Domain::box({1.0, 1.0}), 100);
  const auto p = partial_sums(s, 1.0);
  CHECK(p[2] == Approx(12 * kPi * kPi).epsilon(1e-15));
  CHECK(p[2] == Approx(118.435).epsilon(1e-5));
  CHECK(p[0] == s.values[0]);
  CHECK(partial_sums(s, 0.3)[0] == Approx(std::pow(s.values[0], 0.3)).epsilon(1e-15));
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] > p[i - 1]);
}

TEST_CASE("Weyl ratio") {
  const auto dom = Domain::box({1.0, 1.0});
  const auto g = summarize(dom);
  const auto s = box_spectrum(dom, 10000);
  const auto r = weyl_ratio(s, g, 2.0, 1.0);
  CHECK(r[9999] > 1.0);
  CHECK(r[9999] < 1.2);
  CHECK(r[9999] < r[99]);
  for (double v : r) CHECK(v > 1.0);
  const auto dil = dom.dilated(3.0);
  const auto rd = weyl_ratio(box_spectrum(dil, 500), summarize(dil), 2.0, 1.0);
  for (std::size_t i = 0; i < 500; ++i) CHECK(rel_diff(rd[i], r[i]) < 1e-12);
}

TEST_CASE("Riesz mean") {
  const auto s = box_spectrum(Domain::box({1.0, 1.0}), 10);
  CHECK(riesz_mean(s, 0.0) == 0.0);
  CHECK(riesz_mean(s, s.values[0]) == 0.0);
  CHECK(riesz_mean(s, 50.0) == Approx(3 * 50.0 - 12 * kPi * kPi).epsilon(1e-14));
}
