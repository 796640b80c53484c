#pragma once

#include "sigmak/common.hpp"
#include "sigmak/profile.hpp"

#include <functional>
#include <vector>

namespace sigmak {

using ScalarField = std::function<double(const Vec&)>;

// sigma_0 .. sigma_n of the given values (coefficients of prod (1 + v_i t)).
std::vector<double> sigma_all(const std::vector<double>& values);
double sigma(int k, const std::vector<double>& values);

struct CurvatureReport {
  Vec point;
  std::vector<double> kappa;
  double sigma_k = 0.0;
  double target = 0.0;  // binom(n, k)
  double residual = 0.0;
};

// Principal curvatures of the rotational graph at height f(t); |xbar| does not
// enter because the curvatures are constant along the rotation orbits.
CurvatureReport rotational_curvatures(const ProfileSolution& s, double t, double xbar_norm = 0.0);

// Shape-operator eigenvalues of the spacelike graph of u at x from central
// differences with step h.
CurvatureReport graph_sigma_residual(const ScalarField& u, const Vec& x, double h, int k);

// Same, from an analytic gradient field: the Hessian is a central difference of
// the gradient, so rounding grows like 1/h instead of 1/h^2.
using GradientField = std::function<Vec(const Vec&)>;
CurvatureReport graph_sigma_residual(const GradientField& Du, const Vec& x, double h, int k);
// Same, from a known gradient and Hessian.
CurvatureReport graph_curvatures(const Vec& x, const Vec& Du, const Mat& D2u, int k);

struct DualOperatorValue {
  Vec xi;
  std::vector<double> kappa;  // eigenvalues of w* gamma* D^2u* gamma*
  double F = 0.0;             // (sigma_n / sigma_{n-k})^{1/k}
  double target = 0.0;        // binom(n, k)^{-1/k}
};

// w* gamma* H gamma* with w* = sqrt(1 - |xi|^2), gamma* = I - xi xi^T / (1 + w*).
Mat dual_matrix(const Vec& xi, const Mat& H);
DualOperatorValue dual_operator_from_hessian(const Vec& xi, const Mat& H, int k);
DualOperatorValue dual_operator(const ScalarField& ustar, const Vec& xi, int k, double h = 1e-4);

struct MaclaurinMeans {
  std::vector<double> means;  // (sigma_l / binom(n, l))^{1/l}, l = 1..n
  bool ordered = false;       // non-increasing in l up to rounding
};
MaclaurinMeans maclaurin_check(const std::vector<double>& values);

// Central-difference gradient and Hessian.
Vec fd_gradient(const ScalarField& u, const Vec& x, double h);
Mat fd_hessian(const ScalarField& u, const Vec& x, double h);

}  // namespace sigmak
