#pragma once

#include "sigmak/common.hpp"
#include "sigmak/sphere.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace sigmak {

struct PerturbationConstants {
  double a0 = 0.0;  // |q| <= a0 rho^2
  double a1 = 0.0;  // |Dq| <= a1 rho
  double a2 = 0.0;  // |q(x) - q(y) - Dq(y).(x - y)| <= a2 |x - y|^2
  double a4 = 0.0;  // tangential-to-boundary part of Dq <= a4 rho^2
};

// Boundary function q on S^{n-1}, extended with degree 0, vanishing off F.
class Perturbation {
 public:
  using Fn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  static Perturbation zero(const LightlikeSet& F);
  // c (1 - s)^3 on the cap, s = (1 - y.nu) / (1 - cos rho).
  static Perturbation cap_bump(const LightlikeSet& F, const Vec& center, double radius, double c);
  // c max(0, y.nu - cos rho)^3.
  static Perturbation cosine_cap(const LightlikeSet& F, const Vec& center, double radius, double c);
  // Arbitrary q; the gradient falls back to central differences when grad is empty.
  static Perturbation custom(const LightlikeSet& F, std::string name, Fn q, GradFn grad = {});

  const std::string& family() const { return family_; }
  const LightlikeSet& F() const { return F_; }
  bool is_zero() const { return family_ == "zero"; }

  double q(const Vec& y) const;
  // Tangential gradient at a unit y.
  Vec Dq(const Vec& y) const;
  Vec Dq_fd(const Vec& y, double h = 1e-6) const;

  const PerturbationConstants& constants() const { return k_; }
  void set_constants(const PerturbationConstants& k) { k_ = k; }
  double M() const { return M_; }
  void set_M(double M) { M_ = M; }

  Vec p(const Vec& y) const { return Dq(y) + M_ * y; }
  Vec p_hat(const Vec& y) const { return Dq(y) - M_ * y; }

 private:
  Perturbation(const LightlikeSet& F, std::string family) : F_(F), family_(std::move(family)) {}

  LightlikeSet F_;
  std::string family_;
  Fn q_;
  GradFn grad_;  // ambient gradient, projected in Dq
  PerturbationConstants k_;
  double M_ = 1.0;
};

// Distance-to-complement coordinate: sin(min(inner radius, pi/2)), equal to y_1 for the half sphere.
double boundary_coordinate(const LightlikeSet& F, const Vec& y);

struct EstimateOptions {
  int samples = 20000;
  int pairs_per_bin = 2000;
  double min_gap = 1e-4;
  std::uint64_t seed = 1;
};

PerturbationConstants estimate_constants(const Perturbation& P, const EstimateOptions& opt = {});

// Largest ratio measured/estimated of the q.3 quotient on fresh pairs (seed + 1).
double validate_a2(const Perturbation& P, const EstimateOptions& opt = {});
// Largest ratios |q|/(a0 rho^2) and |Dq|/(a1 rho) on fresh samples.
std::pair<double, double> validate_a0_a1(const Perturbation& P, const EstimateOptions& opt = {});

// max(2.2 a2, 10 a4, a1 + 1, 1).
double choose_M(const PerturbationConstants& k);

Vec shift_p(const Perturbation& P, const Vec& y);
Vec shift_p_hat(const Perturbation& P, const Vec& y);

// Random unit vectors from a seeded generator.
Vec random_unit(int n, std::uint64_t& state);

}  // namespace sigmak
