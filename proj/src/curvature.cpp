#include "sigmak/curvature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sigmak {

std::vector<double> sigma_all(const std::vector<double>& values) {
  std::vector<double> c(values.size() + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t m = i + 1; m >= 1; --m) c[m] += values[i] * c[m - 1];
  return c;
}

double sigma(int k, const std::vector<double>& values) {
  if (k < 0 || k > static_cast<int>(values.size())) throw DomainError("sigma: k out of range");
  return sigma_all(values)[k];
}

namespace {

std::vector<double> sym_eigenvalues(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration failed");
  const Vec ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

void fill(CurvatureReport& r, int n, int k) {
  r.sigma_k = sigma(k, r.kappa);
  r.target = binom(n, k);
  r.residual = std::abs(r.sigma_k - r.target);
}

}  // namespace

CurvatureReport rotational_curvatures(const ProfileSolution& s, double t, double /*xbar_norm*/) {
  const ProfileParams& p = s.params();
  const ProfileValue v = s.eval(t);
  CurvatureReport r;
  r.point = Vec::Constant(1, t);
  r.kappa.assign(p.n, 1.0 / (v.f * std::sqrt(v.w2)));
  r.kappa[0] = v.fpp / std::pow(v.w2, 1.5);
  fill(r, p.n, p.k);
  return r;
}

Vec fd_gradient(const ScalarField& u, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (u(a) - u(b)) / (2 * h);
  }
  return g;
}

Mat fd_hessian(const ScalarField& u, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  Mat H(n, n);
  const double u0 = u(x);
  for (int i = 0; i < n; ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    H(i, i) = (u(a) - 2 * u0 + u(b)) / (h * h);
    for (int j = 0; j < i; ++j) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      H(i, j) = H(j, i) = (u(pp) - u(pm) - u(mp) + u(mm)) / (4 * h * h);
    }
  }
  return H;
}

CurvatureReport graph_curvatures(const Vec& x, const Vec& Du, const Mat& D2u, int k) {
  const int n = static_cast<int>(x.size());
  const double p2 = Du.squaredNorm();
  if (!(p2 < 1.0)) throw ConditioningError("gradient is not spacelike");
  const double w = std::sqrt(1.0 - p2);
  const Mat gamma = Mat::Identity(n, n) + Du * Du.transpose() / (w * (1.0 + w));
  CurvatureReport r;
  r.point = x;
  r.kappa = sym_eigenvalues(gamma * D2u * gamma / w);
  fill(r, n, k);
  return r;
}

CurvatureReport graph_sigma_residual(const ScalarField& u, const Vec& x, double h, int k) {
  const Vec Du = fd_gradient(u, x, h);
  if (Du.norm() > 1.0 - 1e-6) throw ConditioningError("gradient too close to lightlike");
  return graph_curvatures(x, Du, fd_hessian(u, x, h), k);
}

CurvatureReport graph_sigma_residual(const GradientField& Du, const Vec& x, double h, int k) {
  const int n = static_cast<int>(x.size());
  const Vec g = Du(x);
  if (g.norm() > 1.0 - 1e-6) throw ConditioningError("gradient too close to lightlike");
  Mat H(n, n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    H.col(j) = (Du(xp) - Du(xm)) / (2.0 * h);
  }
  return graph_curvatures(x, g, 0.5 * (H + H.transpose()), k);
}

Mat dual_matrix(const Vec& xi, const Mat& H) {
  const int n = static_cast<int>(xi.size());
  const double r2 = xi.squaredNorm();
  if (!(r2 < 1.0)) throw DomainError("dual operator needs |xi| < 1");
  const double w = std::sqrt(1.0 - r2);
  const Mat g = Mat::Identity(n, n) - xi * xi.transpose() / (1.0 + w);
  return w * g * H * g;
}

DualOperatorValue dual_operator_from_hessian(const Vec& xi, const Mat& H, int k) {
  const int n = static_cast<int>(xi.size());
  if (k < 1 || k > n) throw DomainError("dual operator: k out of range");
  DualOperatorValue r;
  r.xi = xi;
  r.kappa = sym_eigenvalues(dual_matrix(xi, H));
  const std::vector<double> s = sigma_all(r.kappa);
  if (!(s[n - k] > 0.0) || !(s[n] > 0.0)) throw OutsideConeError("Hessian quotient argument outside the admissible cone");
  r.F = std::pow(s[n] / s[n - k], 1.0 / k);
  r.target = std::pow(1.0 / binom(n, k), 1.0 / k);
  return r;
}

DualOperatorValue dual_operator(const ScalarField& ustar, const Vec& xi, int k, double h) {
  return dual_operator_from_hessian(xi, fd_hessian(ustar, xi, h), k);
}

MaclaurinMeans maclaurin_check(const std::vector<double>& values) {
  for (double v : values)
    if (!(v > 0.0)) throw DomainError("Maclaurin means need positive values");
  const int n = static_cast<int>(values.size());
  const std::vector<double> s = sigma_all(values);
  MaclaurinMeans m;
  for (int l = 1; l <= n; ++l) m.means.push_back(std::pow(s[l] / binom(n, l), 1.0 / l));
  m.ordered = true;
  for (int l = 1; l < n; ++l)
    if (m.means[l] > m.means[l - 1] * (1 + 1e-12)) m.ordered = false;
  return m;
}

}  // namespace sigmak
