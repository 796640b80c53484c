#pragma once

#include "sigmak/common.hpp"
#include "sigmak/profile.hpp"
#include "sigmak/sphere.hpp"

#include <functional>
#include <vector>

namespace sigmak {

struct ValueGrad {
  double value = 0.0;
  Vec grad;
};

using FrameFunction = std::function<ValueGrad(const Vec&)>;

// Lorentz boost x1' = (x1 - a x_{n+1}) / sqrt(1 - a^2) of the graph of a
// spacelike function g, evaluated at x' (all in g's own frame).
ValueGrad boost_eval(const FrameFunction& g, double alpha, const Vec& xp);

// z(x) = sqrt(f(x_1)^2 + |xbar|^2).
ValueGrad eval_standard(const ProfileSolution& profile, const Vec& x);

// Semitrough whose Gauss image is the convex hull of a cap. The profile must
// outlive the semitrough.
class Semitrough {
 public:
  Semitrough(const ProfileSolution& profile, GeodesicCap cap);

  const GeodesicCap& cap() const { return cap_; }
  const ProfileSolution& profile() const { return *profile_; }
  double alpha() const { return alpha_; }
  // Orthogonal R with R * center = e_1.
  const Mat& rotation() const { return R_; }

  ValueGrad eval(const Vec& x) const;
  double value(const Vec& x) const { return eval(x).value; }

 private:
  const ProfileSolution* profile_;
  GeodesicCap cap_;
  Mat R_;
  double alpha_;
};

ValueGrad eval_boosted(const Semitrough& s, const Vec& x);

struct LimitGap {
  double measured = 0.0;   // z(r theta) - V(r theta)
  double limit = 0.0;      // r -> infinity value for theta's class
  double predicted = 0.0;  // sqrt(1 - a^2)(sqrt(l^2 + |xbar'|^2) - |xbar'|) outside the cap, 0 inside
  bool perpendicular = false;
};
LimitGap limit_gap(const Semitrough& s, const Direction& theta, double r);

// sup over inscribed balls (lower family) or inf over enclosing balls (upper
// family) of the boosted semitroughs.
class SemitroughFamily {
 public:
  static SemitroughFamily inscribed(const LightlikeSet& F, const ProfileSolution& profile, int budget = 256);
  static SemitroughFamily enclosing(const LightlikeSet& F, const ProfileSolution& profile, int budget = 256);

  bool is_upper() const { return upper_; }
  const std::vector<Semitrough>& members() const { return members_; }
  bool refines() const { return refine_; }

  double value(const Vec& x) const { return eval(x).value; }
  // Gradient is that of the active member.
  ValueGrad eval(const Vec& x) const;

 private:
  SemitroughFamily(const LightlikeSet& F, const ProfileSolution& profile, bool upper);
  ValueGrad refine_at(const Vec& x, std::size_t start, const ValueGrad& best) const;
  void prune();

  LightlikeSet F_;
  const ProfileSolution* profile_;
  bool upper_;
  bool refine_ = false;
  std::vector<Semitrough> members_;
};

double family_sup(const LightlikeSet& F, const ProfileSolution& profile, const Vec& x);
double family_inf(const LightlikeSet& F, const ProfileSolution& profile, const Vec& x);

struct TranslationLimit {
  double measured;
  double predicted;
};
// z^1(-shift, xbar) against sqrt(((n-1)/n)^2 + |xbar|^2).
TranslationLimit translation_limit(const ProfileSolution& profile, const Vec& xbar, double shift);

// 1 - max |Dz| over the sample points, an empirical contraction margin.
double contraction_margin(const std::function<ValueGrad(const Vec&)>& z, const std::vector<Vec>& samples);

}  // namespace sigmak
