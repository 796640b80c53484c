#pragma once

#include "sigmak/common.hpp"

#include <functional>
#include <vector>

namespace sigmak {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double xtol = 1e-10;  // simplex diameter
  double ftol = 1e-14;  // relative spread of simplex values
  int max_evals = 4000;
};

struct OptResult {
  Vec x;
  double f = 0.0;
  Vec g;  // gradient at x when available
  int evals = 0;
  bool converged = false;
};

// Minimises f from x0.
OptResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const NelderMeadOptions& opt = {});

struct BfgsOptions {
  double gtol = 1e-10;
  int max_iter = 500;
};

// Minimises f with gradient; fg returns f and writes the gradient. Non-finite
// values are treated as outside the domain and rejected by the line search.
OptResult bfgs(const std::function<double(const Vec&, Vec&)>& fg, const Vec& x0, const BfgsOptions& opt = {});

// Maximises G over the sphere, or over the cap of radius cap_radius about
// cap_center when cap_radius > 0: best seeds refined by Nelder-Mead in
// tangent coordinates.
struct SphereSearch {
  int restarts = 3;
  NelderMeadOptions nm;
};
struct SphereOptimum {
  Vec y;
  double value = 0.0;
  bool converged = false;
};
SphereOptimum sphere_maximize(const std::function<double(const Vec&)>& G, const std::vector<Vec>& seeds,
                              const SphereSearch& s, const Vec& cap_center = Vec(), double cap_radius = 0.0);

// Inverse of the exponential map at y (tangent vector in ambient coordinates).
Vec sphere_log(const Vec& y, const Vec& x);

}  // namespace sigmak
