#pragma once

#include "sigmak/common.hpp"
#include "sigmak/optimize.hpp"
#include "sigmak/perturbation.hpp"
#include "sigmak/profile.hpp"
#include "sigmak/semitrough.hpp"
#include "sigmak/sphere.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sigmak {

struct BarrierSettings {
  int seeds = 2048;        // sphere seeds for the sup over y
  int super_seeds = 256;   // seeds inside the supersolution cap
  int family_budget = 256;
  SphereSearch search{3, NelderMeadOptions{0.1, 1e-10, 1e-15, 4000}};
};

struct CutoffConstants {
  double lambda = 1.0;
  double M1 = 1.0;
  double R0 = 1.0;
  double R1 = 2.0;
  double c0 = 0.0;
};

// psi for the half sphere: sqrt(lambda^2 + V^2) plus the transition term
// (1 - V(x/|x|)) eta / sqrt(1 + |xbar|^2).
ValueGrad cutoff_standard(const Vec& x, double lambda, double R0, double R1);

class BarrierField {
 public:
  // The profile must outlive the field.
  BarrierField(const ProfileSolution& profile, Perturbation P, BarrierSettings s = {});

  const LightlikeSet& F() const { return P_.F(); }
  const Perturbation& perturbation() const { return P_; }
  const ProfileSolution& profile() const { return *profile_; }
  const BarrierSettings& settings() const { return s_; }
  const SemitroughFamily& lower_family() const { return lower_; }
  const SemitroughFamily& upper_family() const { return upper_; }
  double delta() const { return delta_; }
  double M() const { return P_.M(); }
  double V(const Vec& x) const { return support_value(F(), x); }

  // sup_y q(y) - M + zlower(x + p(y)); gradient by the envelope theorem.
  ValueGrad subsolution_grad(const Vec& x) const;
  double subsolution(const Vec& x) const { return subsolution_grad(x).value; }
  // inf over the delta-cap about x/|x| of q(y) + M V_F(y) + zupper(x + phat(y)).
  ValueGrad supersolution_grad(const Vec& x) const;
  double supersolution(const Vec& x) const { return supersolution_grad(x).value; }

  bool calibrated() const { return cut_.has_value(); }
  const CutoffConstants& cutoff_constants() const;
  void set_cutoff_constants(const CutoffConstants& c);
  void clear_cutoff_constants() { cut_.reset(); }
  // inf over enclosing balls of the boosted M1-scaled psi.
  ValueGrad cutoff_base(const Vec& x) const;
  // sup_y q(y) - M + cutoff_base(x + p(y)).
  ValueGrad cutoff_grad(const Vec& x) const;
  double cutoff(const Vec& x) const { return cutoff_grad(x).value; }

 private:
  const ProfileSolution* profile_;
  Perturbation P_;
  BarrierSettings s_;
  SemitroughFamily lower_, upper_;
  double delta_ = 0.0;
  std::vector<Vec> seeds_;
  Mat local_seeds_;  // tangent offsets (columns) inside the delta-disc
  std::optional<CutoffConstants> cut_;
};

// Box [lo, hi] in R^n.
struct Box {
  Vec lo, hi;
  double radius() const;  // max |x| over the box
};

struct CalibrationOptions {
  int grid_per_axis = 0;  // 0: 9 for n = 2, 5 otherwise
  std::vector<double> radii{1e3, 1e4, 1e5};
  int directions = 32;
  int lipschitz_points = 4000;
  int lipschitz_pairs = 64;
  double lipschitz_bound = 1.0 - 1e-6;
  int max_doublings = 16;  // M1 ladder
  int max_halvings = 8;    // lambda ladder
  std::uint64_t seed = 7;
};

struct CalibrationReport {
  CutoffConstants constants;
  double min_gap = 0.0;                // min over K of cutoff - sub (= c0)
  double min_super_margin = 0.0;       // min over samples of cutoff - super
  double max_lipschitz = 0.0;          // largest gradient norm / difference quotient
  int candidates = 0;
};

// Searches lambda (decreasing) and M1 (increasing); sets the constants on B.
CalibrationReport calibrate_cutoff(BarrierField& B, const Box& K, const CalibrationOptions& opt = {});

// Largest sampled |grad| of cutoff_base and difference quotient of cutoff.
double cutoff_lipschitz(const BarrierField& B, const CalibrationOptions& opt = {});

struct OrderingRow {
  Vec theta;
  double r = 0.0;
  double sub = 0.0, super = 0.0, cutoff = 0.0;  // cutoff is NaN when uncalibrated
  double V = 0.0;
  double predicted_sub = 0.0, predicted_super = 0.0;  // NaN when no limit is known for theta
  std::vector<std::string> violations;
};

struct OrderingOptions {
  double limit_radius = 1e4;  // limits are compared from this radius on
  double limit_tol = 5e-2;
  double perpendicular_tol = 1e-3;
};

std::vector<OrderingRow> ordering_report(const BarrierField& B, const std::vector<Vec>& directions,
                                         const std::vector<double>& radii, const OrderingOptions& opt = {});
std::string ordering_csv(const std::vector<OrderingRow>& rows);
// Largest amount by which an ordering (sub <= super <= cutoff) fails, 0 if none.
double max_ordering_violation(const std::vector<OrderingRow>& rows);

// Predicted r -> infinity limits of sub - V and super - V in direction theta
// (NaN when theta is not covered by a known limit).
std::pair<double, double> predicted_limits(const BarrierField& B, const Vec& theta);

// inf over the delta-cap about -e1 of M V(y) + sqrt(l^2 + (xn - M yn)^2 + M^2 (1 - y1^2 - yn^2))
// against -M + sqrt(l^2 + (xn + M)^2).
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};
BoundCheck perpendicular_super_bound(double l, double M, double delta, int n, double xn);

// Half-sphere chain: max over samples with y1 in [0, 1], xn in [0, 100 M] of
// q(y) + sqrt(l^2 + sum_{i=2}^{n-1} p_i^2 + (xn + p_n)^2) - sqrt(l^2 + (xn + M)^2).
// Non-positive when the chain holds.
double half_sphere_chain(const Perturbation& P, double l, int samples, std::uint64_t seed = 3);

// max over x = (-shift, 0, .., xn) of sub(x) + M - sqrt(l^2 + (V(x) + M)^2).
double far_perpendicular_excess(const BarrierField& B, double shift, const std::vector<double>& xn);

}  // namespace sigmak
