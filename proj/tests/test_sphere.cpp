#include "sigmak/sphere.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sigmak;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Direction dir(const Vec& v) { return Direction::normalized(v); }

// Brute-force max of lambda.x over points sampled inside the cap.
double cap_support_bruteforce(const GeodesicCap& cap, const Vec& x, int samples) {
  std::mt19937_64 g(5);
  std::normal_distribution<double> N;
  const int n = cap.center.dim();
  double best = -1e300;
  for (int i = 0; i < samples; ++i) {
    Vec t(n);
    for (int j = 0; j < n; ++j) t[j] = N(g);
    t -= t.dot(cap.center.coords()) * cap.center.coords();
    if (t.norm() == 0.0) continue;
    t.normalize();
    const double a = cap.radius * std::uniform_real_distribution<double>(0.0, 1.0)(g);
    const Vec y = std::cos(a) * cap.center.coords() + std::sin(a) * t;
    best = std::max(best, y.dot(x));
  }
  // The boundary circle carries the maximiser for x outside the cap.
  for (int i = 0; i < samples / 10; ++i) {
    Vec t(n);
    for (int j = 0; j < n; ++j) t[j] = N(g);
    t -= t.dot(cap.center.coords()) * cap.center.coords();
    t.normalize();
    best = std::max(best, (std::cos(cap.radius) * cap.center.coords() + std::sin(cap.radius) * t).dot(x));
  }
  return best;
}

}  // namespace

TEST_CASE("geodesic distance of basic pairs") {
  const Direction e1(unit_vector(3, 0)), e2(unit_vector(3, 1)), m1(-unit_vector(3, 0));
  CHECK(geodesic_distance(e1, e1) == doctest::Approx(0.0));
  CHECK(geodesic_distance(e1, m1) == doctest::Approx(kPi));
  CHECK(geodesic_distance(e1, e2) == doctest::Approx(kPi / 2));
}

TEST_CASE("geodesic distance is a metric on samples") {
  std::mt19937_64 g(1);
  std::normal_distribution<double> N;
  for (int i = 0; i < 200; ++i) {
    const Direction a = dir(Vec::NullaryExpr(3, [&] { return N(g); }));
    const Direction b = dir(Vec::NullaryExpr(3, [&] { return N(g); }));
    const Direction c = dir(Vec::NullaryExpr(3, [&] { return N(g); }));
    const double ab = geodesic_distance(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= kPi);
    CHECK(ab == doctest::Approx(geodesic_distance(b, a)));
    CHECK(ab <= geodesic_distance(a, c) + geodesic_distance(c, b) + 1e-12);
  }
}

TEST_CASE("non-unit directions are rejected") {
  CHECK_THROWS_AS(Direction(v2(1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(GeodesicCap(Direction(unit_vector(2, 0)), kPi), DomainError);
}

TEST_CASE("support values of the half circle") {
  const LightlikeSet B = half_sphere(2);
  CHECK(support_value(B, v2(-3.0, 4.0)) == doctest::Approx(4.0));
  CHECK(support_value(B, v2(3.0, -4.0)) == doctest::Approx(5.0));
  CHECK(support_value(B, Vec::Zero(2)) == 0.0);
}

TEST_CASE("cap support formula matches brute force") {
  const GeodesicCap cap(Direction(unit_vector(2, 0)), kPi / 4);
  CHECK(support_value(cap, v2(-1.0, 0.0)) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-12));
  std::mt19937_64 g(2);
  std::normal_distribution<double> N;
  for (int n : {2, 3}) {
    const GeodesicCap c(dir(Vec::NullaryExpr(n, [&] { return N(g); })), 0.7);
    for (int i = 0; i < 5; ++i) {
      const Vec x = 3.0 * Vec::NullaryExpr(n, [&] { return N(g); });
      CHECK(std::abs(support_value(c, x) - cap_support_bruteforce(c, x, 100000)) < 1e-2);
    }
  }
  // Exact on the circle: the maximiser is a boundary point.
  const GeodesicCap c2(Direction(unit_vector(2, 0)), 0.7);
  for (double a = 0.0; a < 2 * kPi; a += 0.3) {
    const Vec x = v2(std::cos(a), std::sin(a));
    const double brute = std::max({std::cos(a), std::cos(a - 0.7), std::cos(a + 0.7),
                                   std::abs(std::remainder(a, 2 * kPi)) <= 0.7 ? 1.0 : -1.0});
    CHECK(std::abs(support_value(c2, x) - brute) < 1e-6);
  }
}

TEST_CASE("support value is homogeneous and monotone in the set") {
  std::mt19937_64 g(3);
  std::normal_distribution<double> N;
  const LightlikeSet small(3, 0.2, {GeodesicCap(Direction(unit_vector(3, 0)), 0.4)});
  const LightlikeSet big(3, 0.2, {GeodesicCap(Direction(unit_vector(3, 0)), 0.9)});
  for (int i = 0; i < 500; ++i) {
    const Vec x = Vec::NullaryExpr(3, [&] { return N(g); });
    CHECK(support_value(small, x) <= support_value(big, x) + 1e-15);
    CHECK(support_value(big, 7.5 * x) == doctest::Approx(7.5 * support_value(big, x)).epsilon(1e-12));
  }
}

TEST_CASE("inscribed balls") {
  SUBCASE("a single admissible cap is returned as is") {
    const auto balls = inscribed_balls(half_sphere(2), 1);
    REQUIRE(balls.size() == 1);
    CHECK(balls[0].radius == doctest::Approx(kPi / 2));
    CHECK(balls[0].center.coords().isApprox(unit_vector(2, 0)));
  }
  SUBCASE("defining caps are included") {
    const LightlikeSet F(2, 0.3, {GeodesicCap(Direction(unit_vector(2, 0)), kPi / 2),
                                  GeodesicCap(Direction(-unit_vector(2, 0)), 0.3)});
    const auto balls = inscribed_balls(F, 2);
    REQUIRE(balls.size() >= 2);
    bool big = false, small = false;
    for (const auto& b : balls) {
      big = big || (b.center.coords().isApprox(unit_vector(2, 0)) && std::abs(b.radius - kPi / 2) < 1e-12);
      small = small || (b.center.coords().isApprox(-unit_vector(2, 0)) && std::abs(b.radius - 0.3) < 1e-12);
    }
    CHECK(big);
    CHECK(small);
  }
  SUBCASE("balls of a large cap stay inside it") {
    const LightlikeSet F(3, 0.3, {GeodesicCap(Direction(unit_vector(3, 0)), 2.0)});
    const auto balls = inscribed_balls(F, 64);
    CHECK(!balls.empty());
    for (const auto& b : balls) {
      CHECK(b.radius >= 0.3 - 1e-12);
      CHECK(b.radius <= kPi / 2 + 1e-12);
      // Boundary samples of the ball must lie in F.
      const Mat R = rotation_to_e1(b.center.coords()).transpose();
      for (const Vec& s : sphere_points(2, 100)) {
        Vec y(3);
        y << std::cos(b.radius), std::sin(b.radius) * s[0], std::sin(b.radius) * s[1];
        CHECK(F.contains(R * y, 1e-9));
      }
    }
  }
}

TEST_CASE("enclosing balls") {
  const LightlikeSet B = half_sphere(2);
  CHECK(enclosing_ball(B, Direction(unit_vector(2, 0))).radius == doctest::Approx(kPi / 2));
  const GeodesicCap c = enclosing_ball(B, Direction(v2(std::cos(0.1), std::sin(0.1))));
  CHECK(c.radius == doctest::Approx(kPi / 2 + 0.1));
  // Farthest point of F at pi - delta0 / 2 from the centre.
  const double a = kPi / 2 + kPi / 2 - 0.15;
  CHECK_THROWS_AS(enclosing_ball(B, Direction(v2(std::cos(a), std::sin(a)))), InfeasibleError);
}

TEST_CASE("perpendicular directions") {
  const auto p = perpendicular_directions(HullDomain(half_sphere(2)));
  REQUIRE(p.size() == 1);
  CHECK(p[0].coords().isApprox(-unit_vector(2, 0)));

  const LightlikeSet full(2, 0.3, {GeodesicCap(Direction(unit_vector(2, 0)), 2.0),
                                   GeodesicCap(Direction(-unit_vector(2, 0)), 2.0)});
  CHECK(perpendicular_directions(HullDomain(full)).empty());

  const LightlikeSet pair(2, 0.3, {GeodesicCap(Direction(unit_vector(2, 0)), 0.3),
                                   GeodesicCap(Direction(-unit_vector(2, 0)), 0.3)});
  const auto q = perpendicular_directions(HullDomain(pair));
  REQUIRE(q.size() == 2);
  for (const auto& d : q) {
    CHECK(!pair.contains(d.coords()));
    CHECK(std::abs(d[0]) < 1e-9);  // normal to the chords x1 = +-cos(0.3)
  }
}

TEST_CASE("hull domain of the half circle") {
  const HullDomain D(half_sphere(2));
  CHECK(D.interior(v2(0.5, 0.0)));
  CHECK(D.interior(v2(0.1, 0.9)));
  CHECK(!D.contains(v2(-0.1, 0.0)));
  CHECK(!D.contains(v2(0.8, 0.8)));
  // F lies in the closure and the hull is convex on samples.
  for (const Vec& y : sphere_points(2, 90))
    if (y[0] >= 0.0) CHECK(D.contains(y, 1e-9));
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Vec a = v2(U(g), U(g)), b = v2(U(g), U(g));
    if (D.contains(a) && D.contains(b)) CHECK(D.contains(0.5 * (a + b), 1e-12));
  }
}

TEST_CASE("arc gaps of the two-arc set") {
  const LightlikeSet F(2, 0.3, {GeodesicCap(Direction(unit_vector(2, 0)), 0.5),
                                GeodesicCap(Direction(v2(std::cos(2.0), std::sin(2.0))), 0.5)});
  const auto gaps = arc_gaps(F);
  REQUIRE(gaps.size() == 2);
  double total = 0.0;
  for (const auto& [a, b] : gaps) total += b - a;
  CHECK(total == doctest::Approx(2 * kPi - 2.0));
}
