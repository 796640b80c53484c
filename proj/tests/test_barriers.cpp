#include "sigmak/barriers.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigmak;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

BarrierSettings fast() {
  BarrierSettings s;
  s.seeds = 128;
  s.search.restarts = 2;
  return s;
}

const ProfileSolution& prof21() {
  static const ProfileSolution s = solve_profile(ProfileParams::make(2, 1));
  return s;
}

}  // namespace

TEST_CASE("half-sphere barriers with zero perturbation") {
  const BarrierField B(prof21(), Perturbation::zero(half_sphere(2)), fast());
  CHECK(B.M() == 1.0);
  const double l = 0.5;

  SUBCASE("interior direction") {
    const Vec x = 1e4 * v2(std::cos(0.3), std::sin(0.3));
    const double sub = B.subsolution(x) - B.V(x);
    CHECK(sub > -1e-2);
    CHECK(sub < 1e-2);
    CHECK(std::abs(B.supersolution(x) - B.V(x)) < 5e-2);
  }
  SUBCASE("perpendicular direction") {
    const Vec x = v2(-1e4, 0.0);
    CHECK(std::abs(B.subsolution(x) - B.V(x) - (std::sqrt(l * l + 1.0) - 1.0)) < 1e-3);
    CHECK(std::abs(B.supersolution(x) - B.V(x) - l) < 1e-3);
    const auto [ps, pu] = predicted_limits(B, v2(-1.0, 0.0));
    CHECK(ps == doctest::Approx(std::sqrt(1.25) - 1.0));
    CHECK(pu == doctest::Approx(l));
    CHECK(pu - ps > 0.0);
  }
  SUBCASE("sub below super on a grid") {
    for (double x1 = -17.5; x1 <= 20.0; x1 += 5.0)
      for (double x2 = -20.0; x2 <= 20.0; x2 += 5.0) {
        const Vec x = v2(x1, x2);
        CHECK(B.subsolution(x) <= B.supersolution(x) + 1e-9);
      }
  }
  SUBCASE("far perpendicular bound") {
    CHECK(far_perpendicular_excess(B, 1e3, {0.0, 1.0, 10.0, 100.0}) <= 1e-9);
  }
  SUBCASE("uncalibrated cutoff") {
    CHECK(!B.calibrated());
    CHECK_THROWS_AS(B.cutoff(v2(1.0, 1.0)), StateError);
    CHECK_THROWS_AS(B.cutoff_constants(), StateError);
  }
}

TEST_CASE("cutoff with fixed constants") {
  BarrierField B(prof21(), Perturbation::zero(half_sphere(2)), fast());
  CHECK_THROWS_AS(B.set_cutoff_constants({0.0, 1.0, 1.0, 2.0, 0.0}), DomainError);
  const CutoffConstants c{0.5, 2.0, 10.0, 20.0, 0.0};
  B.set_cutoff_constants(c);
  CHECK(B.calibrated());
  for (const Vec& x : {v2(1.0, 2.0), v2(-3.0, 0.5), v2(0.0, -4.0)}) {
    const double V = B.V(x);
    CHECK(B.cutoff_base(x).value == doctest::Approx(std::sqrt(1.0 + V * V)).epsilon(1e-12));
    // sup over the circle of base(x + y) - 1, brute force.
    double best = -1e300;
    for (int i = 0; i < 20000; ++i) {
      const double a = 2 * kPi * i / 20000.0;
      best = std::max(best, B.cutoff_base(x + v2(std::cos(a), std::sin(a))).value - 1.0);
    }
    CHECK(std::abs(B.cutoff(x) - best) < 1e-6);
  }
  // lambda -> 0 leaves the cone.
  const ValueGrad cone = cutoff_standard(v2(-2.0, 3.0), 1e-12, 10.0, 20.0);
  CHECK(cone.value == doctest::Approx(3.0));
  CHECK(cutoff_standard(v2(3.0, 4.0), 1e-12, 10.0, 20.0).value == doctest::Approx(5.0));
}

TEST_CASE("perpendicular supersolution bound") {
  for (double xn : {0.0, 0.5, 3.0, 40.0}) {
    const BoundCheck b = perpendicular_super_bound(0.5, 1.0, 0.3, 2, xn);
    CHECK(b.lhs >= b.rhs - 1e-9);
  }
  const BoundCheck b3 = perpendicular_super_bound(2.0 / 3.0, 2.0, 0.3, 3, 5.0);
  CHECK(b3.lhs >= b3.rhs - 1e-9);
}

TEST_CASE("half-sphere chain holds for a small bump") {
  Perturbation P = Perturbation::cap_bump(half_sphere(2), unit_vector(2, 0), 1.0, 0.05);
  const auto k = estimate_constants(P);
  P.set_constants(k);
  P.set_M(choose_M(k));
  CHECK(half_sphere_chain(P, 0.5, 4000) <= 1e-9);
}

TEST_CASE("ordering report rows") {
  const BarrierField B(prof21(), Perturbation::zero(half_sphere(2)), fast());
  const auto rows = ordering_report(B, {v2(1.0, 0.0), v2(-1.0, 0.0), v2(0.0, 1.0)}, {10.0, 1e4});
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) CHECK(r.violations.empty());
  CHECK(max_ordering_violation(rows) <= 1e-9);
  CHECK(std::isnan(rows[0].cutoff));
  const std::string csv = ordering_csv(rows);
  CHECK(csv.rfind("theta1,theta2,r,sub,super,cutoff,V,predicted_sub_limit,predicted_super_limit\r\n", 0) == 0);
}
