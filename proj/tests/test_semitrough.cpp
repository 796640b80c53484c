#include "sigmak/semitrough.hpp"

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

const ProfileSolution& prof21() {
  static const ProfileSolution s = solve_profile(ProfileParams::make(2, 1));
  return s;
}

double t_at(const ProfileSolution& s, double target, bool slope) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto v = s.eval(mid);
    ((slope ? v.fp : v.f) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("standard semitrough values") {
  const auto& s = prof21();
  const auto at0 = eval_standard(s, v2(0.0, 0.0));
  CHECK(at0.value == doctest::Approx(s.eval(0.0).f));
  CHECK(at0.grad[0] == doctest::Approx(s.eval(0.0).fp));
  CHECK(at0.grad[1] == 0.0);

  const double t1 = t_at(s, 1.0, false);
  const auto at1 = eval_standard(s, v2(t1, 0.0));
  CHECK(at1.value == doctest::Approx(1.0));
  CHECK(at1.grad[0] == doctest::Approx(0.6).epsilon(1e-6));

  for (double xb : {0.0, 0.7, 3.0}) {
    const auto far = eval_standard(s, v2(-40.0, xb));
    CHECK(std::abs(far.value - std::hypot(0.5, xb)) < 1e-6);
  }
}

TEST_CASE("boost with alpha = 0 is a rotation only") {
  const auto& s = prof21();
  const Semitrough st(s, GeodesicCap(Direction(unit_vector(2, 0)), kPi / 2));
  CHECK(st.alpha() == 0.0);
  std::mt19937_64 g(21);
  std::normal_distribution<double> N(0.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Vec x = v2(N(g), N(g));
    const auto a = st.eval(x), b = eval_standard(s, x);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
    CHECK((a.grad - b.grad).norm() < 1e-14);
  }
}

TEST_CASE("boost round trip and critical slope") {
  const auto& s = prof21();
  const FrameFunction z = [&](const Vec& x) { return eval_standard(s, x); };
  for (double alpha : {-0.6, 0.3, 0.8}) {
    const double sa = std::sqrt(1.0 - alpha * alpha);
    for (double x1 : {-6.0, -0.5, 0.0, 2.0, 9.0}) {
      for (double xb : {0.0, 1.5}) {
        const Vec x = v2(x1, xb);
        const double h = z(x).value;
        const Vec xp = v2((x1 - alpha * h) / sa, xb);
        CHECK(std::abs(boost_eval(z, alpha, xp).value - (h - alpha * x1) / sa) < 1e-10);
      }
    }
  }
  // Where the first slope equals alpha the boosted slope vanishes.
  const Semitrough st(s, GeodesicCap(Direction(unit_vector(2, 0)), 2.0));
  const double alpha = st.alpha();
  CHECK(alpha == doctest::Approx(-std::cos(2.0)));
  const double t = t_at(s, alpha, true);
  const double h = s.eval(t).f;
  const Vec xp = v2((t - alpha * h) / std::sqrt(1.0 - alpha * alpha), 0.0);
  CHECK(std::abs(boost_eval(z, alpha, xp).grad[0]) < 1e-8);
  CHECK_THROWS_AS(boost_eval(z, 1.0, xp), DomainError);
}

TEST_CASE("boosted semitroughs stay spacelike") {
  const auto& s = prof21();
  const Semitrough st(s, GeodesicCap(Direction(v2(std::cos(0.4), std::sin(0.4))), 1.1));
  std::vector<Vec> pts;
  std::mt19937_64 g(22);
  std::normal_distribution<double> N(0.0, 20.0);
  for (int i = 0; i < 400; ++i) pts.push_back(v2(N(g), N(g)));
  CHECK(contraction_margin([&](const Vec& x) { return st.eval(x); }, pts) > 0.0);
}

TEST_CASE("limit gaps of caps") {
  const auto& s = prof21();
  const Semitrough half(s, GeodesicCap(Direction(unit_vector(2, 0)), kPi / 2));
  const auto perp = limit_gap(half, Direction(-unit_vector(2, 0)), 1e4);
  CHECK(perp.perpendicular);
  CHECK(perp.predicted == doctest::Approx(0.5));
  CHECK(std::abs(perp.measured - 0.5) < 1e-3);
  const auto inside = limit_gap(half, Direction(unit_vector(2, 0)), 1e4);
  CHECK(inside.predicted == 0.0);
  CHECK(std::abs(inside.measured) < 1e-3);

  const Semitrough wide(s, GeodesicCap(Direction(unit_vector(2, 0)), 2.0));
  const double a = wide.alpha();
  const auto wp = limit_gap(wide, Direction(-unit_vector(2, 0)), 1e4);
  CHECK(wp.perpendicular);
  // Far along -e1: x1 = sqrt(1 - a^2) x1' + a l and V = -a x1', so the gap is l sqrt(1 - a^2).
  CHECK(wp.predicted == doctest::Approx(0.5 * std::sqrt(1.0 - a * a)));
  CHECK(std::abs(wp.measured - wp.predicted) < 1e-3);
}

TEST_CASE("semitroughs are monotone under cap inclusion") {
  const auto& s = prof21();
  const Vec c = v2(std::cos(0.5), std::sin(0.5));
  std::mt19937_64 g(23);
  std::normal_distribution<double> N(0.0, 10.0);
  for (double inner : {0.4, 1.0, 1.9}) {
    const Semitrough small(s, GeodesicCap(Direction(c), inner));
    const Semitrough big(s, GeodesicCap(Direction(c), inner + 0.6));
    for (int i = 0; i < 200; ++i) {
      const Vec x = v2(N(g), N(g));
      CHECK(small.value(x) <= big.value(x) + 1e-10);
    }
  }
}

TEST_CASE("semitrough families") {
  const auto& s = prof21();
  const GeodesicCap cap(Direction(unit_vector(2, 0)), 1.2);
  const LightlikeSet single(2, 0.3, {cap});
  const Semitrough st(s, cap);
  for (const Vec& x : {v2(0.0, 0.0), v2(-3.0, 1.0), v2(5.0, -2.0)})
    CHECK(family_sup(single, s, x) == doctest::Approx(st.value(x)).epsilon(1e-12));

  const LightlikeSet F(2, 0.3, {GeodesicCap(Direction(unit_vector(2, 0)), 0.6),
                                GeodesicCap(Direction(v2(std::cos(2.2), std::sin(2.2))), 0.5)});
  const auto lower = SemitroughFamily::inscribed(F, s, 64);
  const auto upper = SemitroughFamily::enclosing(F, s, 64);
  CHECK(!lower.is_upper());
  CHECK(upper.is_upper());
  double eta = 1e300;
  for (double x1 = -2.0; x1 <= 2.0; x1 += 0.5)
    for (double x2 = -2.0; x2 <= 2.0; x2 += 0.5) {
      const Vec x = v2(x1, x2);
      eta = std::min(eta, lower.value(x) - support_value(F, x));
      CHECK(lower.value(x) <= upper.value(x) + 1e-12);
    }
  CHECK(eta > 0.0);
  const Vec far = 1e4 * unit_vector(2, 0);
  CHECK(lower.value(far) - support_value(F, far) < 1e-2);
  CHECK(upper.value(far) - support_value(F, far) < 1e-2);
}

TEST_CASE("translation limits") {
  const auto tl = translation_limit(prof21(), Vec::Zero(1), 40.0);
  CHECK(tl.predicted == doctest::Approx(0.5));
  CHECK(std::abs(tl.measured - 0.5) < 1e-4);
  const auto s3 = solve_profile(ProfileParams::make(3, 1));
  const auto t3 = translation_limit(s3, Vec::Zero(2), 40.0);
  CHECK(t3.predicted == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(t3.measured - t3.predicted) < 1e-4);
  Vec xb(2);
  xb << 0.3, -1.0;
  const auto t4 = translation_limit(s3, xb, 40.0);
  CHECK(t4.predicted == doctest::Approx(std::sqrt(4.0 / 9.0 + 1.09)));
  CHECK(std::abs(t4.measured - t4.predicted) < 1e-4);
  CHECK_THROWS(translation_limit(solve_profile(ProfileParams::make(2, 2)), Vec::Zero(1), 40.0));
}
