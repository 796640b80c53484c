#include "sigmak/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace sigmak {

namespace {

Vec tangential(const Vec& g, const Vec& y) { return g - g.dot(y) * y; }

// Is the closed cap(center, radius) inside F? Checked on boundary samples.
bool cap_inside(const LightlikeSet& F, const Vec& center, double radius) {
  if (!F.contains(center)) return false;
  const Mat T = tangent_basis(center);
  std::vector<Vec> dirs;
  if (F.n == 2) {
    dirs = {T.col(0), -T.col(0)};
  } else {
    for (const auto& u : sphere_points(F.n - 1, 256)) dirs.push_back(T * u);
  }
  for (const auto& d : dirs)
    if (!F.contains(std::cos(radius) * center + std::sin(radius) * d, 1e-9)) return false;
  return true;
}

}  // namespace

Vec random_unit(int n, std::uint64_t& state) {
  std::mt19937_64 rng(state);
  std::normal_distribution<double> N;
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = N(rng);
  } while (v.norm() < 1e-8);
  state = rng();
  return v.normalized();
}

Perturbation Perturbation::zero(const LightlikeSet& F) {
  Perturbation P(F, "zero");
  const int n = F.n;
  P.q_ = [](const Vec&) { return 0.0; };
  P.grad_ = [n](const Vec&) { return Vec(Vec::Zero(n)); };
  return P;
}

Perturbation Perturbation::cap_bump(const LightlikeSet& F, const Vec& center, double radius, double c) {
  if (!(radius > 0.0 && radius < kPi)) throw ConfigError("cap-bump radius must lie in (0, pi)");
  const Vec nu = center.normalized();
  if (!cap_inside(F, nu, radius)) throw ConfigError("cap-bump support is not contained in F");
  Perturbation P(F, "cap-bump");
  const double w = 1.0 - std::cos(radius);
  P.q_ = [nu, w, c](const Vec& y) {
    const double s = (1.0 - y.dot(nu)) / w;
    return s < 1.0 ? c * std::pow(1.0 - s, 3) : 0.0;
  };
  P.grad_ = [nu, w, c](const Vec& y) {
    const double s = (1.0 - y.dot(nu)) / w;
    if (s >= 1.0) return Vec(Vec::Zero(y.size()));
    return Vec(3.0 * c * (1.0 - s) * (1.0 - s) / w * nu);
  };
  return P;
}

Perturbation Perturbation::cosine_cap(const LightlikeSet& F, const Vec& center, double radius, double c) {
  if (!(radius > 0.0 && radius < kPi)) throw ConfigError("cosine-cap radius must lie in (0, pi)");
  const Vec nu = center.normalized();
  if (!cap_inside(F, nu, radius)) throw ConfigError("cosine-cap support is not contained in F");
  Perturbation P(F, "cosine-cap");
  const double cr = std::cos(radius);
  P.q_ = [nu, cr, c](const Vec& y) {
    const double h = y.dot(nu) - cr;
    return h > 0.0 ? c * h * h * h : 0.0;
  };
  P.grad_ = [nu, cr, c](const Vec& y) {
    const double h = y.dot(nu) - cr;
    if (h <= 0.0) return Vec(Vec::Zero(y.size()));
    return Vec(3.0 * c * h * h * nu);
  };
  return P;
}

Perturbation Perturbation::custom(const LightlikeSet& F, std::string name, Fn q, GradFn grad) {
  Perturbation P(F, std::move(name));
  P.q_ = std::move(q);
  P.grad_ = std::move(grad);
  return P;
}

double Perturbation::q(const Vec& y) const {
  const double r = y.norm();
  if (!(r > 0.0)) throw DomainError("q is undefined at the origin");
  return q_(y / r);
}

Vec Perturbation::Dq_fd(const Vec& y, double h) const {
  const Vec u = y.normalized();
  const Mat T = tangent_basis(u);
  Vec g = Vec::Zero(u.size());
  for (int j = 0; j < T.cols(); ++j) {
    const double d = (q_(sphere_exp(u, h * T.col(j))) - q_(sphere_exp(u, -h * T.col(j)))) / (2 * h);
    g += d * T.col(j);
  }
  return g;
}

Vec Perturbation::Dq(const Vec& y) const {
  const Vec u = y.normalized();
  if (!grad_) return Dq_fd(u);
  return tangential(grad_(u), u);
}

double boundary_coordinate(const LightlikeSet& F, const Vec& y) {
  return std::sin(std::min(F.inner_radius(y), kPi / 2));
}

namespace {

// Nearest defining-cap center, used to split Dq into its normal and boundary parts.
Vec governing_center(const LightlikeSet& F, const Vec& y) {
  std::size_t arg = 0;
  double best = -1e300;
  for (std::size_t i = 0; i < F.caps.size(); ++i) {
    const double d = F.caps[i].radius - geodesic_distance_unit(y, F.caps[i].center.coords());
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  return F.caps[arg].center.coords();
}

struct PairMax {
  double value = 0.0;
  Vec x, y;
};

std::vector<PairMax> a2_bins(const Perturbation& P, const EstimateOptions& opt, std::uint64_t seed) {
  const int n = P.F().n;
  std::vector<PairMax> bins;
  std::uint64_t state = seed;
  for (double gap = 1.0; gap >= opt.min_gap * 0.999; gap *= 0.5) {
    PairMax pm;
    for (int s = 0; s < opt.pairs_per_bin; ++s) {
      // Half of the base points are drawn from F, where q is nonzero.
      Vec base = random_unit(n, state);
      for (int tries = 0; s % 2 == 0 && tries < 50 && !P.F().contains(base); ++tries) base = random_unit(n, state);
      const Vec v = tangent_basis(base) * random_unit(n - 1, state);
      const Vec x = sphere_exp(base, gap * v);
      const double d2 = (x - base).squaredNorm();
      if (d2 <= 0.0) continue;
      const double val = std::abs(P.q(x) - P.q(base) - P.Dq(base).dot(x - base)) / d2;
      if (val > pm.value) pm = {val, x, base};
    }
    bins.push_back(pm);
  }
  return bins;
}

std::string describe_pair(const PairMax& pm) {
  std::ostringstream os;
  os << "x = (" << pm.x.transpose() << "), y = (" << pm.y.transpose() << ")";
  return os.str();
}

}  // namespace

PerturbationConstants estimate_constants(const Perturbation& P, const EstimateOptions& opt) {
  const LightlikeSet& F = P.F();
  const int n = F.n;
  PerturbationConstants k;
  if (P.is_zero()) return k;
  std::uint64_t state = opt.seed;
  std::vector<Vec> pts = sphere_points(n, opt.samples);
  for (int i = 0; i < opt.samples / 4; ++i) pts.push_back(random_unit(n, state));

  // C^{2,1}_0 proxy: q and Dq vanish off F and on its boundary.
  for (const auto& y : pts) {
    const double rho = boundary_coordinate(F, y);
    if (rho <= 0.0 && (std::abs(P.q(y)) > 1e-8 || P.Dq(y).norm() > 1e-8)) {
      std::ostringstream os;
      os << "q or Dq does not vanish outside F at (" << y.transpose() << ")";
      throw ValidationError(os.str());
    }
  }
  for (const auto& y : pts) {
    const double rho = boundary_coordinate(F, y);
    if (rho <= 1e-6) continue;
    const Vec g = P.Dq(y);
    const Vec nu = governing_center(F, y);
    k.a0 = std::max(k.a0, std::abs(P.q(y)) / (rho * rho));
    k.a1 = std::max(k.a1, g.norm() / rho);
    k.a4 = std::max(k.a4, (g - g.dot(nu) * nu).norm() / (rho * rho));
  }
  const auto bins = a2_bins(P, opt, opt.seed);
  for (const auto& b : bins) k.a2 = std::max(k.a2, b.value);
  // Growth over the three finest bins signals a quotient blowing up.
  const std::size_t m = bins.size();
  if (m >= 4) {
    bool growing = true;
    for (std::size_t i = m - 3; i < m; ++i)
      if (!(bins[i].value >= 1.3 * bins[i - 1].value && bins[i].value > 0.0)) growing = false;
    if (growing) throw ValidationError("second-order quotient diverges near " + describe_pair(bins.back()));
  }
  for (double v : {k.a0, k.a1, k.a2, k.a4})
    if (!std::isfinite(v)) throw ValidationError("non-finite perturbation constant");
  return k;
}

double validate_a2(const Perturbation& P, const EstimateOptions& opt) {
  const double a2 = P.constants().a2;
  double worst = 0.0;
  for (const auto& b : a2_bins(P, opt, opt.seed + 1)) {
    if (a2 > 0.0)
      worst = std::max(worst, b.value / a2);
    else if (b.value > 1e-12)
      worst = std::max(worst, 1e300);
  }
  return worst;
}

std::pair<double, double> validate_a0_a1(const Perturbation& P, const EstimateOptions& opt) {
  const auto& k = P.constants();
  std::uint64_t state = opt.seed + 1;
  double r0 = 0.0, r1 = 0.0;
  for (int i = 0; i < opt.samples; ++i) {
    const Vec y = random_unit(P.F().n, state);
    const double rho = boundary_coordinate(P.F(), y);
    if (rho <= 1e-6) continue;
    const double q = std::abs(P.q(y)), g = P.Dq(y).norm();
    if (q > 0.0) r0 = std::max(r0, k.a0 > 0.0 ? q / (k.a0 * rho * rho) : 1e300);
    if (g > 0.0) r1 = std::max(r1, k.a1 > 0.0 ? g / (k.a1 * rho) : 1e300);
  }
  return {r0, r1};
}

double choose_M(const PerturbationConstants& k) {
  return std::max({2.2 * k.a2, 10.0 * k.a4, k.a1 + 1.0, 1.0});
}

Vec shift_p(const Perturbation& P, const Vec& y) { return P.p(y); }
Vec shift_p_hat(const Perturbation& P, const Vec& y) { return P.p_hat(y); }

}  // namespace sigmak
