#include "sigmak/profile.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace sigmak;

namespace {

// t with f(t) = target, by bisection on the monotone profile.
double t_at_height(const ProfileSolution& s, double target) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (s.eval(mid).f < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("limit heights and first-integral constants") {
  const auto p = ProfileParams::make(2, 1);
  CHECK(p.l == doctest::Approx(0.5));
  CHECK(p.c == doctest::Approx(0.25));
  CHECK(ProfileParams::make(3, 3).l == 0.0);
  CHECK(ProfileParams::make(3, 1).l == doctest::Approx(2.0 / 3.0));
  CHECK(ProfileParams::make(3, 2).l == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK_THROWS(ProfileParams::make(2, 3));
}

TEST_CASE("first integral at y = 1 for n = 2, k = 1") {
  const auto fi = first_integral(ProfileParams::make(2, 1), 1.0);
  CHECK(fi.phi == doctest::Approx(1.25));
  CHECK(fi.u == doctest::Approx(0.6));
}

TEST_CASE("first integral degenerates at the limit height") {
  for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const auto p = ProfileParams::make(n, k);
    const auto fi = first_integral(p, p.l + 1e-7);
    CHECK(fi.phi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fi.u < 1e-3);
    CHECK_THROWS_AS(first_integral(p, p.l), DomainError);
    CHECK_THROWS_AS(first_integral(p, p.l - 0.1), DomainError);
  }
}

TEST_CASE("profile of n = 2, k = 1") {
  const auto s = solve_profile(ProfileParams::make(2, 1));
  CHECK(std::abs(s.eval(-40.0).f - 0.5) < 1e-6);
  const auto far = s.eval(-40.0);
  CHECK(std::abs(far.fp) < 1e-6);
  CHECK(std::abs(far.fpp) < 1e-6);

  const double t1 = t_at_height(s, 1.0);
  CHECK(s.eval(t1).fp == doctest::Approx(0.6).epsilon(1e-6));

  // The ODE residual vanishes along the table.
  for (double t : {-5.0, -1.0, 0.0, 0.5, 2.0, 10.0, 100.0})
    CHECK(std::abs(ode_residual(s.params(), s.eval(t))) < 1e-6);

  // f is increasing, convex, spacelike.
  double prev = 0.0;
  for (double t = -20.0; t <= 50.0; t += 0.5) {
    const auto v = s.eval(t);
    CHECK(v.f >= prev);
    CHECK(v.fp >= 0.0);
    CHECK(v.fp < 1.0);
    CHECK(v.fpp >= -1e-12);
    prev = v.f;
  }
}

TEST_CASE("profile of n = 3, k = 3 decays to zero") {
  const auto s = solve_profile(ProfileParams::make(3, 3));
  CHECK(s.params().l == 0.0);
  CHECK(s.eval(-40.0).f < s.eval(-20.0).f);
  CHECK(s.eval(-20.0).f < 0.05);
}

TEST_CASE("asymptotic gap") {
  for (auto [n, k] : {std::pair{2, 1}, {2, 2}, {3, 2}}) {
    const auto s = solve_profile(ProfileParams::make(n, k));
    CHECK(asymptotic_gap(s, 5.0) > 0.0);
    CHECK(asymptotic_gap(s, 50.0) < asymptotic_gap(s, 5.0));
    CHECK(asymptotic_gap(s, 500.0) < 1e-2);
  }
  const auto hyp = solve_profile(ProfileParams::hyperboloid_mode(2, 1));
  CHECK(asymptotic_gap(hyp, 5.0) == 0.0);
  CHECK(hyp.eval(1.0).f == doctest::Approx(std::sqrt(2.0)));
  CHECK(hyp.eval(1.0).fp == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("tabulated nodes satisfy the first integral") {
  const auto s = solve_profile(ProfileParams::make(2, 2));
  const auto& t = s.table_t();
  REQUIRE(t.size() > 100);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  for (std::size_t i = 0; i < t.size(); i += 97) CHECK(s.first_integral_residual(i) < 1e-8);
}

TEST_CASE("profile csv layout") {
  const auto s = solve_profile(ProfileParams::make(2, 1), 100.0, 200);
  const std::string csv = profile_csv(s);
  CHECK(csv.rfind("t,f,fprime,fsecond,residual\r\n", 0) == 0);
}
