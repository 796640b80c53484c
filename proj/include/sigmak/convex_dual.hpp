#pragma once

#include "sigmak/common.hpp"
#include "sigmak/curvature.hpp"
#include "sigmak/optimize.hpp"
#include "sigmak/semitrough.hpp"
#include "sigmak/sphere.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sigmak {

// A spacelike convex function; an empty gradient requests central differences.
using ConvexSource = std::function<ValueGrad(const Vec&)>;

struct DualOptions {
  double gtol = 1e-10;
  int max_iter = 30;  // BFGS iterations before the simplex polish
  double fd_step = 1e-6;    // gradient fallback
};

struct LegendreResult {
  double value = 0.0;
  Vec x0;  // argmax, equal to the gradient of the conjugate
  bool converged = false;
};

class DualField {
 public:
  DualField(ConvexSource u, HullDomain domain, DualOptions opt = {});

  const HullDomain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  const DualOptions& options() const { return opt_; }

  ValueGrad source(const Vec& x) const;

  // sup_x xi.x - u(x); DomainError unless xi is interior to Conv(F).
  LegendreResult legendre(const Vec& xi) const;
  Vec gradient_map(const Vec& xi) const { return legendre(xi).x0; }
  // sup over the box |x_i| <= half_side, finite for every xi.
  LegendreResult partial_conjugate(const Vec& xi, double half_side) const;
  // Maximises xi.x - u(x) - (eps/2)|x|^2 over the box (eps = 0 allowed).
  LegendreResult regularized(const Vec& xi, double eps, double half_side, const Vec& start = Vec()) const;
  // (u*)*(x) = sup over interior xi of x.xi - u*(xi).
  double biconjugate(const Vec& x) const;

 private:
  ConvexSource u_;
  HullDomain domain_;
  DualOptions opt_;
};

// Classifies xi against Conv(F) by growth of r xi.theta - u(r theta) along rays;
// ray values are cached per (theta, r).
class DomainProbe {
 public:
  DomainProbe(const DualField& D, int directions = 256, std::vector<double> radii = {1e2, 1e3, 1e4});
  // True when no ray grows monotonically across the radii.
  bool interior(const Vec& xi) const;

 private:
  std::vector<Vec> dirs_;
  std::vector<double> radii_;
  std::vector<std::vector<double>> u_;  // u(r theta), [dir][radius]
};

// Conv(F) of the source (the hull domain itself).
const HullDomain& dual_domain(const DualField& D);

struct MoreauValue {
  double value = 0.0;
  Vec prox;  // eta0
  Vec grad;  // (xi - eta0) / eps
};

// g(xi) = inf_eta utilde(eta) + |xi - eta|^2 / (2 eps), utilde the box-restricted
// conjugate. Evaluated through the equivalent sup_x xi.x - u(x) - eps|x|^2/2.
class MoreauField {
 public:
  MoreauField(const DualField& base, double eps, int j);

  double eps() const { return eps_; }
  int j() const { return j_; }
  double half_side() const { return 5.0 * j_; }  // box of side 10 j

  // start: optional initial guess for the maximiser.
  MoreauValue eval(const Vec& xi, const Vec& start = Vec()) const;
  // Central differences of Dg about xi; m = eval(xi) seeds the inner solves.
  Mat hessian(const Vec& xi, const MoreauValue& at) const;
  Mat hessian(const Vec& xi) const { return hessian(xi, eval(xi)); }
  // Box-restricted conjugate (the function being regularized).
  double base_value(const Vec& xi) const;

 private:
  const DualField* base_;
  double eps_;
  int j_;
};

// Direct prox minimisation for an arbitrary convex callable.
MoreauValue moreau_direct(const std::function<double(const Vec&)>& f, double eps, const Vec& xi);

struct EpsilonSelection {
  double eps = 0.0;
  double min_gap = 0.0;       // min of u* - g over the grid
  double max_gap = 0.0;       // max of u* - g
  double max_grad_gap = 0.0;  // max |Dg - Du*|
  double max_operator_excess = 0.0;  // max F(w* gamma* D^2g gamma*) - target
  int tried = 0;
  int critical_points = 0;  // grid points with Du* = 0, where the gap vanishes
  std::string failure;  // last failed check while searching
};

struct SelectOptions {
  double start = 1e-1;
  double ratio = 0.5;
  int max_steps = 30;
  double operator_tol = 1e-8;
};

// Largest eps on the ladder passing the value, gradient and operator checks on the grid.
EpsilonSelection select_epsilon(const DualField& D, int j, int k, const std::vector<Vec>& grid,
                                const SelectOptions& opt = {});

struct DualOrderReport {
  double max_excess = 0.0;  // max of upper* - lower* (<= 0 expected)
  int violations = 0;
  int points = 0;
};

// Conjugate of the larger function must not exceed the conjugate of the smaller one.
DualOrderReport dual_order_check(const DualField& upper, const DualField& lower, const std::vector<Vec>& grid,
                                 double tol = 1e-8);

// Disc grid: points of Conv(F) with hull margin >= margin on a Cartesian lattice of spacing h.
std::vector<Vec> hull_grid(const HullDomain& D, double margin, double h);

// CSV rows xi..., ustar, gstar, grad_gap.
std::string dual_grid_csv(const DualField& D, const MoreauField& g, const std::vector<Vec>& grid);

}  // namespace sigmak
