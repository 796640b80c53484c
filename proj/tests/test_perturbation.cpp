#include "sigmak/perturbation.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigmak;

TEST_CASE("choose_M rule") {
  CHECK(choose_M({}) == 1.0);
  CHECK(choose_M({0.0, 0.0, 1.0, 0.0}) == doctest::Approx(2.2));
  CHECK(choose_M({0.0, 0.0, 0.0, 5.0}) == doctest::Approx(50.0));
  CHECK(choose_M({0.0, 3.0, 0.0, 0.0}) == doctest::Approx(4.0));
}

TEST_CASE("zero perturbation") {
  const Perturbation P = Perturbation::zero(half_sphere(3));
  CHECK(P.is_zero());
  const auto k = estimate_constants(P, {2000, 200, 1e-4, 1});
  CHECK(k.a0 == 0.0);
  CHECK(k.a1 == 0.0);
  CHECK(k.a2 == 0.0);
  CHECK(k.a4 == 0.0);
  std::uint64_t st = 9;
  for (int i = 0; i < 20; ++i) {
    const Vec y = random_unit(3, st);
    CHECK((shift_p(P, y) - P.M() * y).norm() == 0.0);
    CHECK((shift_p_hat(P, y) + P.M() * y).norm() == 0.0);
  }
}

TEST_CASE("cap bump perturbation") {
  const LightlikeSet F = half_sphere(2);
  Perturbation P = Perturbation::cap_bump(F, unit_vector(2, 0), 1.0, 0.2);
  const Vec e1 = unit_vector(2, 0);
  CHECK(P.q(e1) == doctest::Approx(0.2));
  CHECK(P.q(-e1) == 0.0);
  CHECK(P.q(3.0 * e1) == doctest::Approx(0.2));  // degree 0

  // Tangential gradient against central differences.
  std::uint64_t st = 4;
  for (int i = 0; i < 50; ++i) {
    const Vec y = random_unit(2, st);
    CHECK((P.Dq(y) - P.Dq_fd(y)).norm() < 1e-6);
    CHECK(std::abs(P.Dq(y).dot(y)) < 1e-12);
  }

  const auto k = estimate_constants(P);
  CHECK(k.a0 > 0.0);
  CHECK(k.a1 > 0.0);
  CHECK(k.a2 > 0.0);
  P.set_constants(k);
  P.set_M(choose_M(k));
  // Sampled estimates: fresh samples may exceed them by a few percent.
  CHECK(validate_a2(P) <= 1.05);
  const auto [r0, r1] = validate_a0_a1(P);
  CHECK(r0 <= 1.05);
  CHECK(r1 <= 1.05);

  for (int i = 0; i < 50; ++i) {
    const Vec y = random_unit(2, st);
    CHECK((shift_p(P, y) - shift_p_hat(P, y) - 2.0 * P.M() * y).norm() < 1e-12);
    if (!F.contains(y)) CHECK((shift_p(P, y) - P.M() * y).norm() < 1e-12);
  }
}

TEST_CASE("boundary coordinate of the half sphere is y1") {
  const LightlikeSet F = half_sphere(3);
  std::uint64_t st = 5;
  for (int i = 0; i < 50; ++i) {
    Vec y = random_unit(3, st);
    y[0] = std::abs(y[0]);
    CHECK(boundary_coordinate(F, y) == doctest::Approx(y[0]).epsilon(1e-9));
  }
}

TEST_CASE("random units are deterministic") {
  std::uint64_t a = 17, b = 17;
  for (int i = 0; i < 5; ++i) {
    const Vec u = random_unit(4, a), v = random_unit(4, b);
    CHECK(u.norm() == doctest::Approx(1.0));
    CHECK((u - v).norm() == 0.0);
  }
}
