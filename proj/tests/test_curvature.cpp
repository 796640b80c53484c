#include "sigmak/curvature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sigmak;

TEST_CASE("elementary symmetric functions") {
  CHECK(sigma(1, {1, 2, 3}) == doctest::Approx(6.0));
  CHECK(sigma(2, {1, 2, 3}) == doctest::Approx(11.0));
  CHECK(sigma(3, {1, 2, 3}) == doctest::Approx(6.0));
  CHECK(sigma(0, {1, 2, 3}) == 1.0);
  CHECK_THROWS_AS(sigma(4, {1, 2, 3}), DomainError);
  const auto all = sigma_all({0.5, -1.0});
  REQUIRE(all.size() == 3);
  CHECK(all[1] == doctest::Approx(-0.5));
  CHECK(all[2] == doctest::Approx(-0.5));
}

TEST_CASE("Maclaurin means are ordered for positive values") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> U(0.01, 5.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(4);
    for (auto& x : v) x = U(g);
    CHECK(maclaurin_check(v).ordered);
  }
  const auto equal = maclaurin_check({2.0, 2.0, 2.0});
  for (double m : equal.means) CHECK(m == doctest::Approx(2.0));
}

TEST_CASE("hyperboloid has unit curvatures") {
  const ScalarField u = [](const Vec& x) { return std::sqrt(1.0 + x.squaredNorm()); };
  for (int n : {2, 3}) {
    for (int k = 1; k <= n; ++k) {
      Vec x = Vec::Constant(n, 0.3);
      x[0] = -0.7;
      const auto r = graph_sigma_residual(u, x, 1e-3, k);
      for (double kap : r.kappa) CHECK(kap == doctest::Approx(1.0).epsilon(1e-5));
      CHECK(std::abs(r.residual) < 1e-4);
      CHECK(r.target == doctest::Approx(binom(n, k)));
    }
  }
  // Gradient-based variant is accurate at a smaller step.
  const GradientField Du = [](const Vec& x) -> Vec { return x / std::sqrt(1.0 + x.squaredNorm()); };
  Vec x(2);
  x << 1.5, -2.0;
  const auto r = graph_sigma_residual(Du, x, 1e-5, 2);
  CHECK(std::abs(r.residual) < 1e-8);
}

TEST_CASE("rotational profile curvatures solve the equation") {
  const auto s = solve_profile(ProfileParams::make(3, 2));
  for (double t : {-3.0, 0.0, 1.0, 8.0}) {
    const auto r = rotational_curvatures(s, t);
    CHECK(r.kappa.size() == 3);
    CHECK(std::abs(r.residual) < 1e-6);
    for (double kap : r.kappa) CHECK(kap > 0.0);
  }
}

TEST_CASE("dual operator of the hyperboloid conjugate") {
  const ScalarField us = [](const Vec& xi) { return -std::sqrt(1.0 - xi.squaredNorm()); };
  for (int k : {1, 2}) {
    for (double a : {0.0, 0.5}) {
      Vec xi(2);
      xi << a, 0.0;
      const auto d = dual_operator(us, xi, k);
      CHECK(d.target == doctest::Approx(std::pow(binom(2, k), -1.0 / k)));
      CHECK(d.F == doctest::Approx(d.target).epsilon(1e-5));
      for (double kap : d.kappa) CHECK(kap == doctest::Approx(1.0).epsilon(1e-5));
    }
  }
}

TEST_CASE("dual matrix factor") {
  // gamma* has eigenvalue w* along xi and 1 across, so det(dual_matrix(xi, I)) = w*^n w*^2.
  Vec xi(3);
  xi << 0.3, -0.4, 0.5;
  const double w = std::sqrt(1.0 - xi.squaredNorm());
  const Mat D = dual_matrix(xi, Mat::Identity(3, 3));
  CHECK(D.determinant() == doctest::Approx(std::pow(w, 5)));
  CHECK((D - D.transpose()).norm() < 1e-14);
}

TEST_CASE("finite-difference helpers") {
  const ScalarField u = [](const Vec& x) { return x[0] * x[0] * x[1] + std::exp(x[1]); };
  Vec x(2);
  x << 0.4, -0.2;
  const Vec g = fd_gradient(u, x, 1e-5);
  CHECK(g[0] == doctest::Approx(2 * 0.4 * -0.2).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(0.16 + std::exp(-0.2)).epsilon(1e-8));
  const Mat H = fd_hessian(u, x, 1e-4);
  CHECK(H(0, 0) == doctest::Approx(-0.4).epsilon(1e-5));
  CHECK(H(0, 1) == doctest::Approx(0.8).epsilon(1e-5));
  CHECK(H(1, 1) == doctest::Approx(std::exp(-0.2)).epsilon(1e-5));
}
