#include "sigmak/dirichlet2d.hpp"

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

double exact(const Vec& xi) { return -std::sqrt(1.0 - xi.squaredNorm()); }

DomainSequence disc07() {
  DomainParams p;
  p.offset = 0.6;
  return DomainSequence(HullDomain(full_circle()), 1, p);
}

double max_error(const DiscreteSolution& s, const std::function<double(const Vec&)>& f) {
  double err = 0.0;
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix)
      if (s.kind[s.index(ix, iy)] == NodeKind::Interior)
        err = std::max(err, std::abs(s.u[s.index(ix, iy)] - f(s.node(ix, iy))));
  return err;
}

}  // namespace

TEST_CASE("domains of the full circle are discs") {
  const DomainSequence ds(HullDomain(full_circle()), 3);
  for (int j = 1; j <= 3; ++j) {
    for (const Vec& b : ds.boundary_samples(j, 32))
      CHECK(b.norm() == doctest::Approx(1.0 - 0.5 * std::pow(2.0, -j)).epsilon(1e-9));
    CHECK(ds.min_boundary_curvature(j, 64) == doctest::Approx(1.0 / (1.0 - 0.5 * std::pow(2.0, -j))).epsilon(1e-3));
  }
}

TEST_CASE("half-disc domains are nested and strictly convex") {
  const DomainSequence ds(HullDomain(half_sphere(2)), 4);
  const HullDomain D(half_sphere(2));
  for (int j = 1; j <= 4; ++j) {
    CHECK(ds.contains(j, ds.center()));
    CHECK(ds.min_boundary_curvature(j, 128) > 0.0);
    for (const Vec& b : ds.boundary_samples(j, 64)) CHECK(D.interior(b));
    if (j > 1) CHECK(ds.nesting_margin(j, 128) > 0.0);
  }
  CHECK(ds.lattice(1, 0.1).size() < ds.lattice(4, 0.1).size());
}

TEST_CASE("dual residuals vanish on the hyperboloid conjugate") {
  for (const Vec& xi : {v2(0.0, 0.0), v2(0.3, -0.5)}) {
    const double w = std::sqrt(1.0 - xi.squaredNorm());
    const Mat H = (Mat::Identity(2, 2) + xi * xi.transpose() / (w * w)) / w;
    CHECK(std::abs(dual_residual(xi, H, 1)) < 1e-13);
    CHECK(std::abs(dual_residual(xi, H, 2)) < 1e-13);
  }
  CHECK(dual_residual(v2(0.0, 0.0), Mat::Identity(2, 2), 2) == doctest::Approx(0.0));
  CHECK(dual_residual(v2(0.0, 0.0), 2.0 * Mat::Identity(2, 2), 2) == doctest::Approx(3.0));
}

TEST_CASE("manufactured solutions converge at second order") {
  const DomainSequence ds = disc07();
  for (int k : {1, 2}) {
    SolveOptions o;
    o.h = 1.4 / 16;
    const auto coarse = solve_dirichlet(ds, 1, exact, k, o);
    o.h = 1.4 / 32;
    const auto fine = solve_dirichlet(ds, 1, exact, k, o);
    CHECK(coarse.residual < 1e-10);
    CHECK(fine.residual < 1e-10);
    const double e1 = max_error(coarse, exact), e2 = max_error(fine, exact);
    CHECK(e2 < 1e-3);
    CHECK(e1 / e2 > 3.0);
    CHECK(fine.min_second_difference > 0.0);
    CHECK(fine.min_diagonal_difference > 0.0);
  }
}

TEST_CASE("discrete comparison") {
  const DomainSequence ds = disc07();
  SolveOptions o;
  o.h = 1.4 / 24;
  const auto bump = [](const Vec& xi) { return exact(xi) + 0.05 * (1.0 + xi[0]) * (1.0 + xi[0]); };
  const auto lo = solve_dirichlet(ds, 1, exact, 2, o);
  const auto hi = solve_dirichlet(ds, 1, bump, 2, o);
  REQUIRE(lo.u.size() == hi.u.size());
  for (std::size_t i = 0; i < lo.u.size(); ++i)
    if (lo.kind[i] == NodeKind::Interior) CHECK(lo.u[i] <= hi.u[i] + 1e-12);
}

TEST_CASE("Legendre transform back to the graph") {
  const DomainSequence ds = disc07();
  SolveOptions o;
  o.h = 1.4 / 32;
  const auto s = solve_dirichlet(ds, 1, exact, 1, o);
  const auto samples = legendre_back(s);
  REQUIRE(!samples.empty());
  double worst = 0.0;
  for (const auto& g : samples) {
    const double w = std::sqrt(1.0 - g.xi.squaredNorm());
    worst = std::max(worst, (g.x - g.xi / w).norm());
    CHECK(g.slope < 1.0);
    CHECK(g.u == doctest::Approx(std::sqrt(1.0 + g.x.squaredNorm())).epsilon(1e-2));
  }
  CHECK(worst < 1e-2);
  CHECK(biconjugation_error(s, samples) < 1e-2);

  const std::string csv = solution_csv(s);
  CHECK(csv.rfind("ix,iy,xi1,xi2,kind,u\r\n", 0) == 0);
  const std::string obj = graph_obj(s, samples);
  CHECK(obj.find("\nf ") != std::string::npos);
  CHECK(obj.rfind("v ", 0) == 0);
}

TEST_CASE("gradient trend") {
  CHECK(gradient_trend_ok({{1, 0.3, 0.7, 1.0}, {2, 0.6, 0.8, 2.0}, {3, 0.9, 0.95, 4.0}}));
  CHECK(!gradient_trend_ok({{1, 0.6, 0.7, 1.0}, {2, 0.3, 0.8, 2.0}}));
}
