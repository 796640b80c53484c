#include "sigmak/semitrough.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigmak {

ValueGrad boost_eval(const FrameFunction& g, double alpha, const Vec& xp) {
  if (!(std::abs(alpha) < 1.0)) throw DomainError("boost parameter must satisfy |alpha| < 1");
  if (alpha == 0.0) return g(xp);
  const double sa = std::sqrt(1.0 - alpha * alpha);
  const double target = sa * xp[0];
  Vec x = xp;
  // h(x1) = x1 - alpha g(x1, xbar) - target has slope in [1 - |alpha|, 1 + |alpha|].
  auto h = [&](double x1, ValueGrad& vg) {
    x[0] = x1;
    vg = g(x);
    return x1 - alpha * vg.value - target;
  };
  ValueGrad vg;
  double x1 = target;
  double hv = h(x1, vg);
  const double reach = std::abs(hv) / (1.0 - std::abs(alpha)) * 1.01 + 1e-12;
  double lo = x1 - reach, hi = x1 + reach;
  ValueGrad tmp;
  for (int grow = 0; grow < 60 && h(lo, tmp) > 0; ++grow) lo -= (hi - lo);
  for (int grow = 0; grow < 60 && h(hi, tmp) < 0; ++grow) hi += (hi - lo);
  bool done = false;
  for (int it = 0; it < 200; ++it) {
    hv = h(x1, vg);
    if (hv == 0.0) {
      done = true;
      break;
    }
    if (hv > 0)
      hi = x1;
    else
      lo = x1;
    const double slope = 1.0 - alpha * vg.grad[0];
    double next = x1 - hv / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x1) <= 1e-12 * std::max(1.0, std::abs(x1)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(x1))) {
      x1 = next;
      h(x1, vg);
      done = true;
      break;
    }
    x1 = next;
  }
  if (!done) throw NumericError("boost root finder did not converge");
  ValueGrad out;
  out.value = (vg.value - alpha * x1) / sa;
  const double den = 1.0 - alpha * vg.grad[0];
  out.grad = vg.grad * (sa / den);
  out.grad[0] = (vg.grad[0] - alpha) / den;
  return out;
}

ValueGrad eval_standard(const ProfileSolution& profile, const Vec& x) {
  const ProfileValue v = profile.eval(x[0]);
  const Vec xbar = x.tail(x.size() - 1);
  const double z = std::sqrt(v.f * v.f + xbar.squaredNorm());
  ValueGrad out;
  out.value = z;
  out.grad.resize(x.size());
  out.grad[0] = v.f * v.fp / z;
  out.grad.tail(x.size() - 1) = xbar / z;
  return out;
}

Semitrough::Semitrough(const ProfileSolution& profile, GeodesicCap cap)
    : profile_(&profile), cap_(std::move(cap)) {
  if (cap_.center.dim() != profile.params().n) throw DomainError("cap dimension differs from profile dimension");
  R_ = rotation_to_e1(cap_.center.coords());
  alpha_ = -std::cos(cap_.radius);
  if (std::abs(alpha_) < 1e-15) alpha_ = 0.0;
}

ValueGrad Semitrough::eval(const Vec& x) const {
  const Vec xr = R_ * x;
  const ProfileSolution& p = *profile_;
  ValueGrad r = boost_eval([&p](const Vec& y) { return eval_standard(p, y); }, alpha_, xr);
  r.grad = R_.transpose() * r.grad;
  return r;
}

ValueGrad eval_boosted(const Semitrough& s, const Vec& x) { return s.eval(x); }

LimitGap limit_gap(const Semitrough& s, const Direction& theta, double r) {
  const Vec x = r * theta.coords();
  LimitGap g;
  g.measured = s.value(x) - support_value(s.cap(), x);
  const Vec& nu = s.cap().center.coords();
  const double sa = std::sqrt(1.0 - s.alpha() * s.alpha());
  const double l = s.profile().params().l;
  if (s.cap().contains(theta.coords(), 1e-9)) return g;
  g.perpendicular = geodesic_distance_unit(theta.coords(), -nu) <= 1e-9;
  if (g.perpendicular) g.limit = sa * l;
  const double xb = (x - x.dot(nu) * nu).norm();
  g.predicted = sa * (std::sqrt(l * l + xb * xb) - xb);
  return g;
}

SemitroughFamily::SemitroughFamily(const LightlikeSet& F, const ProfileSolution& profile, bool upper)
    : F_(F), profile_(&profile), upper_(upper) {}

void SemitroughFamily::prune() {
  // z_B is monotone under inclusion of B, so nested members are redundant.
  std::vector<Semitrough> kept;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < members_.size() && !redundant; ++j) {
      if (i == j) continue;
      const GeodesicCap& a = members_[i].cap();
      const GeodesicCap& b = members_[j].cap();
      const bool nested = upper_ ? a.contains_cap(b, 1e-12) : b.contains_cap(a, 1e-12);
      // Break ties between identical caps by index.
      const bool same = a.contains_cap(b, 1e-12) && b.contains_cap(a, 1e-12);
      if (nested && (!same || j < i)) redundant = true;
    }
    if (!redundant) kept.push_back(members_[i]);
  }
  members_ = std::move(kept);
}

SemitroughFamily SemitroughFamily::inscribed(const LightlikeSet& F, const ProfileSolution& profile, int budget) {
  SemitroughFamily fam(F, profile, false);
  for (const auto& c : inscribed_balls(F, budget)) fam.members_.emplace_back(profile, c);
  fam.prune();
  if (fam.members_.empty()) throw DomainError("empty inscribed family");
  fam.refine_ = fam.members_.size() > 1 && F.overlapping() && F.n >= 3;
  return fam;
}

SemitroughFamily SemitroughFamily::enclosing(const LightlikeSet& F, const ProfileSolution& profile, int budget) {
  SemitroughFamily fam(F, profile, true);
  std::vector<GeodesicCap> caps;
  if (F.n == 2) {
    caps = minimal_enclosing_arcs(F);
  } else {
    std::vector<Vec> centers;
    for (const auto& c : F.caps) centers.push_back(c.center.coords());
    for (const auto& p : sphere_points(F.n, budget)) centers.push_back(p);
    for (const auto& c : centers) {
      try {
        caps.push_back(enclosing_ball(F, Direction::normalized(c)));
      } catch (const InfeasibleError&) {
      }
    }
  }
  if (caps.empty()) throw InfeasibleError("no feasible enclosing ball");
  for (const auto& c : caps) fam.members_.emplace_back(profile, c);
  fam.prune();
  fam.refine_ = fam.members_.size() > 1 && F.n >= 3;
  return fam;
}

ValueGrad SemitroughFamily::eval(const Vec& x) const {
  ValueGrad best;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    ValueGrad v = members_[i].eval(x);
    if (i == 0 || (upper_ ? v.value < best.value : v.value > best.value)) {
      best = std::move(v);
      arg = i;
    }
  }
  if (refine_) return refine_at(x, arg, best);
  return best;
}

ValueGrad SemitroughFamily::refine_at(const Vec& x, std::size_t start, const ValueGrad& best_in) const {
  // Coordinate search over the ball center; the radius follows from the center.
  const int n = F_.n;
  auto ball = [&](const Vec& c, GeodesicCap* out) {
    try {
      if (upper_) {
        *out = enclosing_ball(F_, Direction::normalized(c));
        return true;
      }
      const double r = std::min(F_.inner_radius(c), kPi / 2);
      if (r < F_.delta0) return false;
      *out = GeodesicCap(Direction::normalized(c), r);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  ValueGrad best = best_in;
  Vec c = members_[start].cap().center.coords();
  double step = 0.05;
  while (step > 1e-4) {
    bool improved = false;
    const Mat T = tangent_basis(c);
    for (int j = 0; j < n - 1; ++j) {
      for (double sgn : {1.0, -1.0}) {
        const Vec cand = sphere_exp(c, sgn * step * T.col(j));
        GeodesicCap cap(Direction::normalized(cand), 1.0);
        if (!ball(cand, &cap)) continue;
        ValueGrad v = Semitrough(*profile_, cap).eval(x);
        if (upper_ ? v.value < best.value : v.value > best.value) {
          best = std::move(v);
          c = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

double family_sup(const LightlikeSet& F, const ProfileSolution& profile, const Vec& x) {
  return SemitroughFamily::inscribed(F, profile).value(x);
}

double family_inf(const LightlikeSet& F, const ProfileSolution& profile, const Vec& x) {
  return SemitroughFamily::enclosing(F, profile).value(x);
}

TranslationLimit translation_limit(const ProfileSolution& profile, const Vec& xbar, double shift) {
  const ProfileParams& p = profile.params();
  if (p.k != 1) throw DomainError("translation limit is defined for k = 1");
  if (xbar.size() != p.n - 1) throw DomainError("xbar must have n - 1 components");
  Vec x(p.n);
  x[0] = -shift;
  x.tail(p.n - 1) = xbar;
  const double a = (p.n - 1.0) / p.n;
  return {eval_standard(profile, x).value, std::sqrt(a * a + xbar.squaredNorm())};
}

double contraction_margin(const std::function<ValueGrad(const Vec&)>& z, const std::vector<Vec>& samples) {
  double m = 0.0;
  for (const auto& x : samples) m = std::max(m, z(x).grad.norm());
  return 1.0 - m;
}

}  // namespace sigmak
