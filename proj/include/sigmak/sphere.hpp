#pragma once

#include "sigmak/common.hpp"

#include <utility>
#include <vector>

namespace sigmak {

// A point of the unit sphere S^{n-1}.
class Direction {
 public:
  // Throws DomainError unless | |c| - 1 | <= 1e-12.
  explicit Direction(Vec c);
  static Direction normalized(const Vec& v);

  const Vec& coords() const { return c_; }
  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }

 private:
  Vec c_;
};

// Closed geodesic ball {y : d_S(y, center) <= radius}, radius in (0, pi).
struct GeodesicCap {
  GeodesicCap(Direction center, double radius);

  Direction center;
  double radius;

  bool contains(const Vec& y, double tol = 0.0) const;
  bool contains_cap(const GeodesicCap& other, double tol = 1e-12) const;
};

// Finite union of caps F with inner-ball radius delta0.
struct LightlikeSet {
  LightlikeSet(int n, double delta0, std::vector<GeodesicCap> caps);

  int n;
  double delta0;
  std::vector<GeodesicCap> caps;

  bool contains(const Vec& y, double tol = 0.0) const;
  // max_i (r_i - d(y, c_i)); a lower bound for the distance from y to the
  // complement of F (exact for a single cap or disjoint caps).
  double depth(const Vec& y) const;
  // Distance from y to the complement of F (0 outside F).
  double inner_radius(const Vec& y) const;
  bool overlapping() const;
};

LightlikeSet half_sphere(int n, double delta0 = 0.3);

// Conv(F) intersected with the unit ball, realised through support values on
// a fixed direction grid.
class HullDomain {
 public:
  explicit HullDomain(LightlikeSet F, int grid_count = 0);

  const LightlikeSet& parent() const { return F_; }
  int dim() const { return F_.n; }
  const std::vector<Vec>& grid() const { return grid_; }

  // min over grid x of V_F(x) - xi.x, further capped by 1 - |xi|.
  double margin(const Vec& xi) const;
  bool contains(const Vec& xi, double tol = 0.0) const { return margin(xi) >= -tol; }
  bool interior(const Vec& xi, double tol = 0.0) const { return margin(xi) > tol; }
  // Grid direction attaining the minimum in margin (separating direction).
  Vec separating_direction(const Vec& xi) const;

 private:
  LightlikeSet F_;
  std::vector<Vec> grid_;
  std::vector<double> support_;
};

double geodesic_distance(const Direction& a, const Direction& b);
// Unchecked variant for vectors already known to be unit.
double geodesic_distance_unit(const Vec& a, const Vec& b);

double support_value(const GeodesicCap& cap, const Vec& x);
double support_value(const LightlikeSet& F, const Vec& x);
double support_value(const HullDomain& D, const Vec& x);

std::vector<GeodesicCap> inscribed_balls(const LightlikeSet& F, int budget);
GeodesicCap enclosing_ball(const LightlikeSet& F, const Direction& center);
std::vector<Direction> perpendicular_directions(const HullDomain& D, int budget = 256);

// n = 2: for each gap of F, the arc covering everything but that gap
// (feasible ones only, radius <= pi - delta0).
std::vector<GeodesicCap> minimal_enclosing_arcs(const LightlikeSet& F);

// n = 2: uncovered arcs of the circle as (start, end) angles, start < end.
std::vector<std::pair<double, double>> arc_gaps(const LightlikeSet& F);

// Deterministic quasi-uniform point set on S^{n-1} (circle grid for n = 2,
// golden spiral for n = 3, Kronecker lattice in Hopf coordinates for n = 4).
std::vector<Vec> sphere_points(int n, int count);

// Orthogonal matrix R with R * nu = e_1.
Mat rotation_to_e1(const Vec& nu);

// Exponential map of the sphere at y applied to a tangent vector v.
Vec sphere_exp(const Vec& y, const Vec& v);

}  // namespace sigmak
