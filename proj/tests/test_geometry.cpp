#include <doctest.h>

#include <cmath>
#include <random>

#include "fracbly/error.hpp"
#include "fracbly/geometry.hpp"
#include "fracbly/json_io.hpp"
#include "fracbly/numeric.hpp"

using namespace fracbly;
using doctest::Approx;

namespace {

struct McEstimate {
  double area, area_se;
  double inertia, inertia_se;
};

// Plain Monte Carlo over the bounding box: area and inertia about the
// sample centroid.
McEstimate monte_carlo(const Domain& dom, int samples, std::uint64_t seed) {
  auto [lo, hi] = dom.bounding_box();
  const double box = (hi[0] - lo[0]) * (hi[1] - lo[1]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]);
  std::vector<std::array<double, 2>> inside;
  for (int i = 0; i < samples; ++i) {
    const double p[2] = {ux(rng), uy(rng)};
    if (dom.contains(p)) inside.push_back({p[0], p[1]});
  }
  const double frac = static_cast<double>(inside.size()) / samples;
  double cx = 0, cy = 0;
  for (auto& p : inside) {
    cx += p[0];
    cy += p[1];
  }
  cx /= inside.size();
  cy /= inside.size();
  // inertia = box * E[1_inside |x - c|^2]
  double m1 = 0, m2 = 0;
  for (auto& p : inside) {
    const double r2 = (p[0] - cx) * (p[0] - cx) + (p[1] - cy) * (p[1] - cy);
    m1 += r2;
    m2 += r2 * r2;
  }
  const double mean = m1 / samples;
  const double var = m2 / samples - mean * mean;
  return {box * frac, box * std::sqrt(frac * (1 - frac) / samples), box * mean,
          box * std::sqrt(var / samples)};
}

}  // namespace

TEST_CASE("volume closed forms") {
  CHECK(volume(Domain::box({1.0, 1.0})) == 1.0);
  CHECK(volume(Domain::box({2.0, 3.0})) == 6.0);
  CHECK(volume(Domain::disk(1.0)) == Approx(kPi).epsilon(1e-15));
  CHECK(volume(Domain::ball(3, 2.0)) == Approx(32.0 * kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("disk volume agrees with Monte Carlo to 1%") {
  const auto mc = monte_carlo(Domain::disk(1.0), 200000, 7);
  CHECK(std::abs(mc.area - kPi) / kPi < 0.01);
}

TEST_CASE("moment of inertia about the centre of mass") {
  CHECK(moment_of_inertia(Domain::box({1.0, 1.0})) == Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(moment_of_inertia(Domain::box({1.0, 1.0}, {5.0, 5.0})) == Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(moment_of_inertia(Domain::disk(1.0)) == Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(moment_of_inertia(Domain::disk(1.0, {3.0, -2.0})) == Approx(kPi / 2.0).epsilon(1e-15));
  // unit ball in R^3: int r^2 dV = 4 pi / 5
  CHECK(moment_of_inertia(Domain::ball(3, 1.0)) == Approx(4.0 * kPi / 5.0).epsilon(1e-14));
  // 2x1 box: V (a^2 + b^2) / 12
  CHECK(moment_of_inertia(Domain::box({2.0, 1.0})) == Approx(2.0 * 5.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("unit ball volume") {
  CHECK(unit_ball_volume(2) == Approx(kPi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == Approx(4.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(unit_ball_volume(4) == Approx(kPi * kPi / 2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(1) == Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(unit_ball_volume(0), InvalidInput);
}

TEST_CASE("gamma accuracy over the needed range") {
  // Gamma(n) = (n-1)!, Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
  double fact = 1.0;
  for (int n = 1; n <= 8; ++n) {
    if (n > 1) fact *= n - 1;
    CHECK(gamma_fn(n) == Approx(fact).epsilon(1e-13));
  }
  CHECK(gamma_fn(2.5) == Approx(0.75 * std::sqrt(kPi)).epsilon(1e-13));
  CHECK(gamma_fn(3.5) == Approx(15.0 / 8.0 * std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("beta and rearrangement radius") {
  const double b_sq = beta(Domain::box({1.0, 1.0}));
  CHECK(b_sq == Approx(1.0 / (2.0 * kPi * kPi * std::sqrt(6.0))).epsilon(1e-14));
  CHECK(b_sq == Approx(0.020679).epsilon(1e-4));
  const double b_disk = beta(Domain::disk(1.0));
  CHECK(b_disk == Approx(1.0 / (2.0 * kPi * std::sqrt(2.0))).epsilon(1e-14));
  CHECK(b_disk == Approx(0.112540).epsilon(1e-4));

  CHECK(rearrangement_radius(Domain::disk(1.0)) == Approx(1.0).epsilon(1e-15));
  CHECK(rearrangement_radius(Domain::box({1.0, 1.0})) == Approx(0.56419).epsilon(1e-5));
  CHECK(rearrangement_radius(Domain::box({1.0, 1.0, 1.0})) == Approx(0.62035).epsilon(1e-5));
}

TEST_CASE("summary invariants on every closed-form domain") {
  const std::vector<Domain> doms = {Domain::box({1.0, 1.0}),      Domain::box({2.0, 1.0}),
                                    Domain::box({0.3, 1.7, 2.2}), Domain::box({1, 1, 1, 1}),
                                    Domain::disk(0.7),            Domain::ball(3, 1.3),
                                    Domain::ball(5, 0.4)};
  for (const auto& dom : doms) {
    const auto g = summarize(dom);
    const int d = dom.dimension();
    CHECK(g.dimension() == d);
    CHECK(g.volume == Approx(g.omega_d * std::pow(g.rearrangement_radius, d)).epsilon(1e-13));
    CHECK(g.omega_cap == Approx(g.volume / std::pow(2 * kPi, d)).epsilon(1e-14));
    CHECK(g.beta >= beta_lower_bound(d, g.volume) * (1 - 1e-12));
    const double ib = inertia_ball_lower_bound(d, g.volume);
    if (dom.kind() == DomainKind::box) {
      CHECK(g.inertia > ib);
    } else {
      CHECK(std::abs(g.inertia - ib) / ib < 1e-9);
    }
  }
}

TEST_CASE("dilation covariance") {
  const std::vector<Domain> doms = {Domain::box({1.0, 2.0}, {0.3, 0.1}), Domain::disk(1.2, {1, 1}),
                                    Domain::ball(3, 0.8), Domain::box({1, 2, 3})};
  for (const auto& dom : doms) {
    const int d = dom.dimension();
    for (double t : {0.5, 2.0, 7.3}) {
      const auto s = dom.dilated(t);
      CHECK(rel_diff(volume(s), std::pow(t, d) * volume(dom)) < 1e-12);
      CHECK(rel_diff(moment_of_inertia(s), std::pow(t, d + 2) * moment_of_inertia(dom)) < 1e-12);
      CHECK(rel_diff(beta(s), std::pow(t, d + 1) * beta(dom)) < 1e-12);
    }
  }
}

TEST_CASE("polygon quadrature matches Monte Carlo within 4 standard errors") {
  const std::vector<Domain> polys = {
      Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),         // L shape
      Domain::polygon({{0, 0}, {3, 0}, {0.5, 2}}, {4.0, -1.0}),                 // triangle, shifted
      Domain::polygon({{0, 0}, {1, -0.5}, {2, 0}, {1.5, 1}, {1, 0.4}, {0.5, 1}}),  // non-convex
  };
  std::uint64_t seed = 11;
  for (const auto& p : polys) {
    const auto mc = monte_carlo(p, 2000000, seed++);
    CHECK(std::abs(volume(p) - mc.area) <= 4 * mc.area_se);
    CHECK(std::abs(moment_of_inertia(p) - mc.inertia) <= 4 * mc.inertia_se);
  }
}

TEST_CASE("polygon exact values") {
  // unit square as a polygon, clockwise input
  const auto sq = Domain::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {5, 5});
  CHECK(volume(sq) == Approx(1.0).epsilon(1e-15));
  CHECK(moment_of_inertia(sq) == Approx(1.0 / 6.0).epsilon(1e-14));
  const auto c = center_of_mass(sq);
  CHECK(c[0] == Approx(5.5));
  CHECK(c[1] == Approx(5.5));
  // right triangle legs a, b: centroidal polar moment = a b (a^2 + b^2) / 36
  const auto tri = Domain::polygon({{0, 0}, {3, 0}, {0, 2}});
  CHECK(moment_of_inertia(tri) == Approx(3.0 * 2.0 * 13.0 / 36.0).epsilon(1e-14));
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(Domain::box({1.0}), InvalidInput);
  CHECK_THROWS_AS(Domain::box({1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(Domain::box({1.0, -2.0}), InvalidInput);
  CHECK_THROWS_AS(Domain::disk(0.0), InvalidInput);
  CHECK_THROWS_AS(Domain::ball(2, 1.0), InvalidInput);
  CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 0}, {2, 0}}), InvalidInput);            // zero area
  CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidInput);    // bow tie
  CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 0}}), InvalidInput);
  CHECK_THROWS_AS(Domain::box({1.0, 1.0}, {0.0}), InvalidInput);
}

TEST_CASE("domain JSON round trip") {
  const std::vector<Domain> doms = {Domain::box({1.0, 2.0}, {0.5, 0.25}), Domain::disk(1.5, {1, 2}),
                                    Domain::ball(4, 0.5),
                                    Domain::polygon({{0, 0}, {2, 0}, {1, 1.5}}, {0.1, 0.2})};
  for (const auto& d : doms) CHECK(domain_from_json(domain_to_json(d)) == d);
  CHECK(domain_from_json(Json::parse(R"({"kind": "box", "edges": [1.0, 1.0]})")) == Domain::box({1.0, 1.0}));
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind": "torus"})")), InvalidInput);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind": "disk"})")), InvalidInput);

  const auto g = summarize(Domain::disk(1.0));
  const Json j = geometry_to_json(g);
  for (const char* key : {"volume", "center_of_mass", "inertia", "omega_d", "rearrangement_radius", "beta",
                          "omega_cap"}) {
    CHECK(j.contains(key));
  }
  const auto back = geometry_from_json(j);
  CHECK(back.volume == g.volume);
  CHECK(back.beta == g.beta);
}
