#include "sigmak/optimize.hpp"

#include "sigmak/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sigmak {

OptResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const NelderMeadOptions& opt) {
  const int n = static_cast<int>(x0.size());
  std::vector<Vec> s(n + 1, x0);
  std::vector<double> fv(n + 1);
  int evals = 0;
  auto F = [&](const Vec& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (int i = 0; i < n; ++i) s[i + 1][i] += opt.initial_step;
  for (int i = 0; i <= n; ++i) fv[i] = F(s[i]);
  std::vector<int> idx(n + 1);
  OptResult r;
  while (evals < opt.max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];
    double diam = 0.0;
    for (int i = 1; i <= n; ++i) diam = std::max(diam, (s[idx[i]] - s[best]).norm());
    const double spread = std::abs(fv[worst] - fv[best]);
    if (diam < opt.xtol || (std::isfinite(spread) && spread <= opt.ftol * (1.0 + std::abs(fv[best])) && diam < 1e3 * opt.xtol)) {
      r.converged = true;
      break;
    }
    Vec c = Vec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) c += s[i];
    c /= n;
    const Vec xr = c + (c - s[worst]);
    const double fr = F(xr);
    if (fr < fv[best]) {
      const Vec xe = c + 2.0 * (c - s[worst]);
      const double fe = F(xe);
      if (fe < fr) {
        s[worst] = xe;
        fv[worst] = fe;
      } else {
        s[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      s[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const Vec xc = outside ? Vec(c + 0.5 * (xr - c)) : Vec(c + 0.5 * (s[worst] - c));
      const double fc = F(xc);
      if (fc < (outside ? fr : fv[worst])) {
        s[worst] = xc;
        fv[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          s[i] = s[best] + 0.5 * (s[i] - s[best]);
          fv[i] = F(s[i]);
        }
      }
    }
  }
  const int b = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  r.x = s[b];
  r.f = fv[b];
  r.evals = evals;
  return r;
}

OptResult bfgs(const std::function<double(const Vec&, Vec&)>& fg, const Vec& x0, const BfgsOptions& opt) {
  const int n = static_cast<int>(x0.size());
  OptResult r;
  r.x = x0;
  r.g = Vec::Zero(n);
  r.f = fg(r.x, r.g);
  r.evals = 1;
  if (!std::isfinite(r.f)) throw DomainError("BFGS start point is outside the domain");
  Mat Hinv = Mat::Identity(n, n);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (r.g.norm() <= opt.gtol) {
      r.converged = true;
      return r;
    }
    Vec d = -Hinv * r.g;
    if (d.dot(r.g) >= 0.0) {
      Hinv.setIdentity();
      d = -r.g;
    }
    double t = 1.0;
    Vec xn(n), gn(n);
    double fn = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = r.x + t * d;
      fn = fg(xn, gn);
      ++r.evals;
      if (std::isfinite(fn) && fn <= r.f + 1e-4 * t * r.g.dot(d)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Armijo cannot make progress at rounding level; accept if already flat.
      r.converged = r.g.norm() <= 1e3 * opt.gtol;
      return r;
    }
    const Vec s = xn - r.x, y = gn - r.g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      const double rho = 1.0 / sy;
      const Mat I = Mat::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    r.x = xn;
    r.f = fn;
    r.g = gn;
  }
  r.converged = r.g.norm() <= opt.gtol;
  return r;
}

Vec sphere_log(const Vec& y, const Vec& x) {
  const Vec w = x - x.dot(y) * y;
  const double s = w.norm();
  if (s < 1e-300) return Vec::Zero(y.size());
  return std::atan2(s, x.dot(y)) * w / s;
}

SphereOptimum sphere_maximize(const std::function<double(const Vec&)>& G, const std::vector<Vec>& seeds,
                              const SphereSearch& ss, const Vec& cap_center, double cap_radius) {
  if (seeds.empty()) throw DomainError("sphere search needs seeds");
  const int n = static_cast<int>(seeds.front().size());
  if (n == 1) {
    SphereOptimum b{seeds.front(), G(seeds.front()), true};
    for (const auto& y : seeds)
      if (const double v = G(y); v > b.value) b = {y, v, true};
    return b;
  }
  const bool capped = cap_radius > 0.0;
  std::vector<std::pair<double, std::size_t>> vals;
  vals.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) vals.emplace_back(G(seeds[i]), i);
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  // Seed spacing sets the initial simplex size.
  const double spacing = capped ? cap_radius / std::pow(static_cast<double>(seeds.size()), 1.0 / (n - 1))
                                : 2.0 * std::pow(4.0 * kPi / seeds.size(), 1.0 / (n - 1));
  SphereOptimum best{seeds[vals[0].second], vals[0].first, false};
  std::vector<Vec> starts;
  for (const auto& [v, i] : vals) {
    if (static_cast<int>(starts.size()) >= ss.restarts) break;
    bool distinct = true;
    for (const auto& s : starts)
      if (geodesic_distance_unit(s, seeds[i]) < 2.0 * spacing) distinct = false;
    if (distinct) starts.push_back(seeds[i]);
  }
  for (const auto& y0 : starts) {
    const Vec base = capped ? cap_center : y0;
    const Mat T = tangent_basis(base);
    auto point = [&](const Vec& v) -> Vec {
      Vec t = v;
      if (capped && t.norm() > cap_radius) t *= cap_radius / t.norm();
      return sphere_exp(base, T * t);
    };
    Vec v0 = capped ? Vec(T.transpose() * sphere_log(base, y0)) : Vec(Vec::Zero(n - 1));
    NelderMeadOptions nm = ss.nm;
    nm.initial_step = std::max(spacing, 10 * nm.xtol);
    const OptResult r = nelder_mead([&](const Vec& v) { return -G(point(v)); }, v0, nm);
    if (-r.f > best.value) best = {point(r.x), -r.f, best.converged};
    best.converged = best.converged || r.converged;
  }
  return best;
}

}  // namespace sigmak
