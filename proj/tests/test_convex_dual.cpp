#include "sigmak/convex_dual.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigmak;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

LightlikeSet full_circle() {
  return LightlikeSet(2, 0.3, {GeodesicCap(Direction(unit_vector(2, 0)), kPi / 2),
                               GeodesicCap(Direction(-unit_vector(2, 0)), kPi / 2)});
}

ValueGrad hyperboloid(const Vec& x) {
  ValueGrad v;
  v.value = std::sqrt(1.0 + x.squaredNorm());
  v.grad = x / v.value;
  return v;
}

}  // namespace

TEST_CASE("conjugate of the hyperboloid") {
  const DualField D(hyperboloid, HullDomain(full_circle()));
  const auto at0 = D.legendre(v2(0.0, 0.0));
  CHECK(at0.value == doctest::Approx(-1.0));
  CHECK(at0.x0.norm() < 1e-8);
  const Vec xi = v2(0.36, -0.48);
  const auto r = D.legendre(xi);
  CHECK(r.value == doctest::Approx(-0.8).epsilon(1e-10));
  CHECK((r.x0 - xi / 0.8).norm() < 1e-6);
  CHECK((D.gradient_map(v2(0.1, 0.2)) - D.gradient_map(v2(0.1, 0.2 + 1e-6))).norm() < 1e-4);
  CHECK(D.biconjugate(v2(1.0, -2.0)) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-6));
  CHECK_THROWS_AS(D.legendre(v2(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(D.legendre(v2(0.8, 0.8)), DomainError);
}

TEST_CASE("half-disc domain and ray probe") {
  const LightlikeSet B = half_sphere(2);
  const ConvexSource u = [&B](const Vec& x) {
    const double V = support_value(B, x);
    ValueGrad v;
    v.value = std::sqrt(1.0 + V * V);
    v.grad = Vec();
    return v;
  };
  const DualField D(u, HullDomain(B));
  CHECK(dual_domain(D).interior(v2(0.3, 0.2)));
  CHECK(!dual_domain(D).contains(v2(-0.3, 0.0)));
  const DomainProbe probe(D, 64);
  CHECK(probe.interior(v2(0.3, 0.2)));
  CHECK(!probe.interior(v2(-0.3, 0.0)));
  CHECK_THROWS_AS(D.legendre(v2(-0.3, 0.0)), DomainError);
  // u* = -sqrt(1 - |xi|^2) on the half disc: u agrees with the hyperboloid for x1 >= 0.
  const auto r = D.legendre(v2(0.3, 0.4));
  CHECK(r.value == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-6));

  const auto whole = dual_domain(DualField(hyperboloid, HullDomain(full_circle())));
  CHECK(whole.interior(v2(-0.9, 0.0)));
  CHECK(whole.interior(v2(0.0, 0.9)));
}

TEST_CASE("Moreau envelope of a quadratic") {
  const auto m = moreau_direct([](const Vec& e) { return 0.5 * e.squaredNorm(); }, 1.0, v2(1.2, 1.6));
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((m.prox - v2(0.6, 0.8)).norm() < 1e-6);
}

TEST_CASE("regularized conjugate of the hyperboloid") {
  const DualField D(hyperboloid, HullDomain(full_circle()));
  const Vec xi = v2(0.3, 0.4);
  const double exact = -std::sqrt(0.75);
  double prev = -1e300;
  for (double eps : {0.2, 0.1, 0.05, 0.025, 0.0125, 1e-4}) {
    const MoreauField M(D, eps, 1);
    const double g = M.eval(xi).value;
    CHECK(g <= exact + 1e-10);
    CHECK(g >= prev - 1e-12);
    prev = g;
  }
  CHECK(std::abs(prev - exact) < 1e-3);

  const auto sel = select_epsilon(D, 1, 1, hull_grid(D.domain(), 0.25, 0.25));
  CHECK(sel.eps >= 1e-6);
  CHECK(sel.min_gap >= -1e-10);
}

TEST_CASE("dual order check") {
  const DualField lower(hyperboloid, HullDomain(full_circle()));
  const DualField upper([](const Vec& x) {
    ValueGrad v = hyperboloid(x);
    v.value += 1.0;
    return v;
  }, HullDomain(full_circle()));
  const auto grid = hull_grid(lower.domain(), 0.2, 0.2);
  const auto same = dual_order_check(lower, lower, grid);
  CHECK(same.max_excess == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.violations == 0);
  const auto shifted = dual_order_check(upper, lower, grid);
  CHECK(shifted.max_excess == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(shifted.violations == 0);
  CHECK(shifted.points == static_cast<int>(grid.size()));
  const auto wrong = dual_order_check(lower, upper, grid);
  CHECK(wrong.violations == static_cast<int>(grid.size()));
}

TEST_CASE("hull grid respects the margin") {
  const HullDomain D(half_sphere(2));
  const auto g = hull_grid(D, 0.1, 0.05);
  CHECK(!g.empty());
  for (const Vec& p : g) {
    CHECK(p[0] >= 0.1 - 1e-12);
    CHECK(p.norm() <= 0.9 + 1e-12);
  }
}
