#pragma once

#include "sigmak/common.hpp"

#include <string>
#include <vector>

namespace sigmak {

struct ProfileParams {
  int n = 2;
  int k = 1;
  double l = 0.5;  // limit of f at -infinity, ((n-k)/n)^{1/k}
  double c = 0.25; // first-integral constant l^{n-k} (1 - l^k)
  bool hyperboloid = false;  // reference mode f = sqrt(1 + t^2)

  static ProfileParams make(int n, int k);
  static ProfileParams hyperboloid_mode(int n, int k);
};

struct FirstIntegral {
  double phi;
  double u;
};

// phi = y^k + c y^{-(n-k)}, u = sqrt(1 - phi^{-2/k}); throws DomainError for y <= l.
FirstIntegral first_integral(const ProfileParams& p, double y);

struct ProfileValue {
  double f;
  double fp;
  double fpp;
  double w2;  // 1 - f'^2, evaluated without cancellation
};

// Residual of k f''/(f^{k-1}(1-f'^2)^{k/2+1}) + (n-k)/(f^k (1-f'^2)^{k/2}) - n.
double ode_residual(const ProfileParams& p, const ProfileValue& v);

class ProfileSolution {
 public:
  ProfileSolution() = default;
  // Untabulated solution; only the closed-form helpers are usable.
  explicit ProfileSolution(const ProfileParams& p) : p_(p) {}

  const ProfileParams& params() const { return p_; }
  ProfileValue eval(double t) const;
  // b(t) - f(t) in a cancellation-free form, t > 1.
  double gap(double t) const;
  // Height y as a function of t, without derivatives.
  double height(double t) const;

  // Tabulated nodes: t_i, y_i (strictly increasing).
  const std::vector<double>& table_t() const { return t_; }
  std::vector<double> table_y() const;
  double t_min() const { return t_.empty() ? 0.0 : t_.front(); }
  double t_max() const { return t_.empty() ? 0.0 : t_.back(); }

  // Relative first-integral defect |(1 - f'^2)^{-k/2} / phi(f) - 1| at a node.
  double first_integral_residual(std::size_t node) const;

  // Internal helpers shared with the solver.
  double u_of_d(double d) const;
  double fpp_of_d(double d) const;
  double phi_minus_one(double d) const;
  double tail_integral(double y) const;  // int_y^inf (1/v - 1/u)
  double tail_density(double y) const;

  friend ProfileSolution solve_profile(const ProfileParams&, double, int);

 private:
  double d_from_t_table(double t) const;
  double d_from_t_top(double t) const;
  double d_from_t_bottom(double t) const;
  double dtdw(double w) const;
  double d2tdw2(double w) const;

  ProfileParams p_;
  double y_max_ = 1e3;
  double w_lo_ = 0.0, w_hi_ = 0.0, h_ = 1.0;
  double mu_ = 1.0;  // exponential rate of d(t) at -infinity
  std::vector<double> t_, t1_, t2_;  // T(w), T'(w), T''(w) on uniform w nodes
};

ProfileSolution solve_profile(const ProfileParams& p, double y_max = 1e3, int samples = 4096);
ProfileValue eval_profile(const ProfileSolution& s, double t);
double asymptotic_gap(const ProfileSolution& s, double t);

// Rows t, f, fprime, fsecond, residual for every table node.
std::string profile_csv(const ProfileSolution& s);

}  // namespace sigmak
