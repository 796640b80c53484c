#include "sigmak/profile.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace sigmak {

namespace {

// e^x - 1 - x without cancellation.
double expm1_minus_x(double x) {
  if (std::abs(x) < 0.5) {
    double term = x * x / 2.0, sum = term;
    for (int m = 3; m < 30; ++m) {
      term *= x / m;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

// Integrates over [a, b] in the local variable x = w - a so that node rounding
// scales with the panel width rather than with |a|.
template <class F>
double integrate(F f, double a, double b) {
  double err = 0.0;
  auto local = [&](double x) { return f(a + x); };
  const double r = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(local, 0.0, b - a, 8, 1e-12, &err);
  if (!std::isfinite(r)) throw NumericError("profile quadrature produced a non-finite value");
  return r;
}

// Quintic Hermite basis on [0, 1] and its derivative.
void hermite5(double s, double* H, double* dH) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  H[0] = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  H[1] = s - 6 * s3 + 8 * s4 - 3 * s5;
  H[2] = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  H[3] = 0.5 * (s3 - 2 * s4 + s5);
  H[4] = -4 * s3 + 7 * s4 - 3 * s5;
  H[5] = 10 * s3 - 15 * s4 + 6 * s5;
  dH[0] = -30 * s2 + 60 * s3 - 30 * s4;
  dH[1] = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  dH[2] = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
  dH[3] = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
  dH[4] = -12 * s2 + 28 * s3 - 15 * s4;
  dH[5] = 30 * s2 - 60 * s3 + 30 * s4;
}

}  // namespace

ProfileParams ProfileParams::make(int n, int k) {
  if (n < 2 || k < 1 || k > n) throw DomainError("profile requires n >= 2 and 1 <= k <= n");
  ProfileParams p;
  p.n = n;
  p.k = k;
  p.l = (k == n) ? 0.0 : std::pow(static_cast<double>(n - k) / n, 1.0 / k);
  p.c = (k == n) ? 1.0 : std::pow(p.l, n - k) * (1.0 - std::pow(p.l, k));
  return p;
}

ProfileParams ProfileParams::hyperboloid_mode(int n, int k) {
  ProfileParams p = make(n, k);
  p.c = 0.0;
  p.hyperboloid = true;
  return p;
}

FirstIntegral first_integral(const ProfileParams& p, double y) {
  if (p.hyperboloid) {
    if (!(y > 1.0)) throw DomainError("hyperboloid first integral needs y > 1");
    return {std::pow(y, p.k), std::sqrt(1.0 - 1.0 / (y * y))};
  }
  if (!(y > p.l)) throw DomainError("first integral needs y > l_k");
  const ProfileSolution tmp(p);
  const double phi = std::pow(y, p.k) + p.c * std::pow(y, -(p.n - p.k));
  return {phi, tmp.u_of_d(y - p.l)};
}

double ode_residual(const ProfileParams& p, const ProfileValue& v) {
  const int n = p.n, k = p.k;
  const double a = k * v.fpp / (std::pow(v.f, k - 1) * std::pow(v.w2, 0.5 * k + 1));
  const double b = (n - k) / (std::pow(v.f, k) * std::pow(v.w2, 0.5 * k));
  return a + b - n;
}

double ProfileSolution::phi_minus_one(double d) const {
  const int n = p_.n, k = p_.k;
  if (p_.l == 0.0) return std::pow(d, n);
  const double L = std::log1p(d / p_.l);
  const double a = static_cast<double>(n - k) / n;
  return a * expm1_minus_x(k * L) + (1.0 - a) * expm1_minus_x(-(n - k) * L);
}

double ProfileSolution::u_of_d(double d) const {
  const double pm1 = phi_minus_one(d);
  const double u2 = -std::expm1(-(2.0 / p_.k) * std::log1p(pm1));
  return std::sqrt(std::max(0.0, u2));
}

double ProfileSolution::fpp_of_d(double d) const {
  const int n = p_.n, k = p_.k;
  double dphi;
  if (p_.l == 0.0) {
    dphi = n * std::pow(d, n - 1);
  } else {
    const double y = p_.l + d;
    const double L = std::log1p(d / p_.l);
    const double a = static_cast<double>(n - k) / n;
    dphi = (k * a / y) * (std::expm1(k * L) - std::expm1(-(n - k) * L));
  }
  const double lphi = std::log1p(phi_minus_one(d));
  return dphi * std::exp((-1.0 - 2.0 / k) * lphi) / k;
}

// 1/v - 1/u at height y > 1, v = sqrt(1 - 1/y^2).
double ProfileSolution::tail_density(double y) const {
  const double iy2 = 1.0 / (y * y);
  const double diff = iy2 * (-std::expm1(-(2.0 / p_.k) * std::log1p(p_.c * std::pow(y, -p_.n))));
  const double v = std::sqrt(1.0 - iy2);
  const double u = std::sqrt(v * v + diff);
  return diff / (u * v * (u + v));
}

double ProfileSolution::tail_integral(double y) const {
  auto integrand = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    return tail_density(y / tau) * y / (tau * tau);
  };
  return integrate(integrand, 0.0, 1.0);
}

double ProfileSolution::dtdw(double w) const {
  const double d = std::exp(w);
  return d / u_of_d(d);
}

double ProfileSolution::d2tdw2(double w) const {
  const double d = std::exp(w);
  const double u = u_of_d(d);
  return d / u - d * d * fpp_of_d(d) / (u * u * u);
}

ProfileSolution solve_profile(const ProfileParams& p, double y_max, int samples) {
  if (y_max < 10.0) throw DomainError("y_max must be >= 10");
  if (samples < 100) throw DomainError("samples must be >= 100");
  ProfileSolution s;
  s.p_ = p;
  s.y_max_ = y_max;
  if (p.hyperboloid) return s;

  double d_lo;
  if (p.l > 0.0)
    d_lo = 1e-10 * p.l;
  else
    d_lo = (p.n == 2) ? 1e-10 : 1e-6;
  s.w_lo_ = std::log(d_lo);
  s.w_hi_ = std::log(y_max - p.l);
  const int N = samples;
  s.h_ = (s.w_hi_ - s.w_lo_) / (N - 1);
  s.t_.assign(N, 0.0);
  s.t1_.assign(N, 0.0);
  s.t2_.assign(N, 0.0);
  int anchor = N - 1;
  for (int i = 0; i < N; ++i) {
    const double w = s.w_lo_ + i * s.h_;
    s.t1_[i] = s.dtdw(w);
    s.t2_[i] = s.d2tdw2(w);
    if (!std::isfinite(s.t1_[i]) || !std::isfinite(s.t2_[i]))
      throw NumericError("non-finite profile integrand");
    if (anchor == N - 1 && p.l + std::exp(w) >= 2.0) anchor = i;
  }
  // Above the anchor t = sqrt(y^2 - 1) + G(y), with G accumulated downward from y_max.
  double G = s.tail_integral(p.l + std::exp(s.w_hi_));
  for (int i = N - 1; i >= anchor; --i) {
    const double a = s.w_lo_ + i * s.h_;
    if (i < N - 1)
      G += integrate([&](double w) {
        const double d = std::exp(w);
        return s.tail_density(p.l + d) * d;
      }, a, a + s.h_);
    const double y = p.l + std::exp(a);
    s.t_[i] = std::sqrt(y * y - 1.0) + G;
  }
  for (int i = anchor - 1; i >= 0; --i) {
    const double a = s.w_lo_ + i * s.h_;
    s.t_[i] = s.t_[i + 1] - integrate([&](double w) { return s.dtdw(w); }, a, a + s.h_);
  }
  const double u_lo = s.u_of_d(d_lo);
  s.mu_ = u_lo / d_lo;
  for (int i = 1; i < N; ++i)
    if (!(s.t_[i] > s.t_[i - 1])) throw NumericError("profile table is not strictly increasing");
  return s;
}

double ProfileSolution::d_from_t_table(double t) const {
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - t_.begin())) - 1;
  i = std::min(i, t_.size() - 2);
  const double c[6] = {t_[i], h_ * t1_[i], h_ * h_ * t2_[i], h_ * h_ * t2_[i + 1], h_ * t1_[i + 1], t_[i + 1]};
  double lo = 0.0, hi = 1.0;
  double s = std::clamp((t - t_[i]) / (t_[i + 1] - t_[i]), 0.0, 1.0);
  double H[6], dH[6];
  for (int it2 = 0; it2 < 60; ++it2) {
    hermite5(s, H, dH);
    double val = -t, der = 0.0;
    for (int j = 0; j < 6; ++j) {
      val += c[j] * H[j];
      der += c[j] * dH[j];
    }
    if (val > 0)
      hi = s;
    else
      lo = s;
    double next = (der > 0) ? s - val / der : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-16) {
      s = next;
      break;
    }
    s = next;
  }
  return std::exp(w_lo_ + (i + s) * h_);
}

double ProfileSolution::d_from_t_top(double t) const {
  const int n = p_.n, k = p_.k;
  double y = std::sqrt(1.0 + t * t);
  for (int it = 0; it < 6; ++it) {
    const double G = (p_.c / k) / (n + 1) * std::pow(y, -(n + 1));
    const double s = t - G;
    y = std::sqrt(1.0 + s * s);
  }
  return y - p_.l;
}

double ProfileSolution::d_from_t_bottom(double t) const {
  const double t0 = t_.front();
  const double d0 = std::exp(w_lo_);
  if (p_.l > 0.0 || p_.n == 2) return d0 * std::exp(mu_ * (t - t0));
  const double e = 1.0 - 0.5 * p_.n;
  const double z = std::pow(d0, e) + e * (t - t0) / std::sqrt(0.5 * p_.n);
  return std::pow(z, 1.0 / e);
}

ProfileValue ProfileSolution::eval(double t) const {
  if (p_.hyperboloid) {
    const double f = std::sqrt(1.0 + t * t);
    return {f, t / f, 1.0 / (f * f * f), 1.0 / (f * f)};
  }
  if (t_.empty()) throw StateError("profile has not been solved");
  double d;
  if (t > t_.back())
    d = d_from_t_top(t);
  else if (t < t_.front())
    d = d_from_t_bottom(t);
  else
    d = d_from_t_table(t);
  const double y = p_.l + d;
  const double pm1 = phi_minus_one(d);
  const double lp = std::log1p(pm1);
  const double w2 = std::exp(-(2.0 / p_.k) * lp);
  const double u = std::sqrt(std::max(0.0, -std::expm1(-(2.0 / p_.k) * lp)));
  return {y, u, fpp_of_d(d), w2};
}

double ProfileSolution::height(double t) const { return eval(t).f; }

double ProfileSolution::gap(double t) const {
  if (p_.hyperboloid) return 0.0;
  if (!(t > 1.0)) throw DomainError("asymptotic gap needs t > 1");
  const double b = std::sqrt(1.0 + t * t);
  double y = b, G = 0.0, s = t;
  for (int it = 0; it < 5; ++it) {
    G = tail_integral(y);
    s = t - G;
    y = std::sqrt(1.0 + s * s);
  }
  return G * (t + s) / (b + y);
}

std::vector<double> ProfileSolution::table_y() const {
  std::vector<double> ys(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) ys[i] = p_.l + std::exp(w_lo_ + i * h_);
  return ys;
}

double ProfileSolution::first_integral_residual(std::size_t node) const {
  const ProfileValue v = eval(t_.at(node));
  const double y = v.f;
  const double phi = std::pow(y, p_.k) + p_.c * std::pow(y, -(p_.n - p_.k));
  return std::abs(std::pow(v.w2, -0.5 * p_.k) / phi - 1.0);
}

ProfileValue eval_profile(const ProfileSolution& s, double t) { return s.eval(t); }

double asymptotic_gap(const ProfileSolution& s, double t) { return s.gap(t); }

std::string profile_csv(const ProfileSolution& s) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,f,fprime,fsecond,residual\r\n";
  for (double t : s.table_t()) {
    const ProfileValue v = s.eval(t);
    os << t << ',' << v.f << ',' << v.fp << ',' << v.fpp << ',' << ode_residual(s.params(), v) << "\r\n";
  }
  return os.str();
}

}  // namespace sigmak
