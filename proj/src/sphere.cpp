#include "sigmak/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace sigmak {

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a;
}

std::vector<std::pair<double, double>> gaps_2d(const LightlikeSet& F);

}  // namespace

Direction::Direction(Vec c) : c_(std::move(c)) {
  if (c_.size() < 2) throw DomainError("direction needs dimension >= 2");
  if (std::abs(c_.norm() - 1.0) > 1e-12) throw DomainError("direction is not a unit vector");
}

Direction Direction::normalized(const Vec& v) {
  const double r = v.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cannot normalise a zero or non-finite vector");
  return Direction(v / r);
}

double geodesic_distance_unit(const Vec& a, const Vec& b) {
  // atan2 form keeps accuracy for nearly equal or antipodal points.
  const double c = a.dot(b);
  const double s = (a - c * b).norm();
  return std::atan2(s, c);
}

double geodesic_distance(const Direction& a, const Direction& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch");
  return geodesic_distance_unit(a.coords(), b.coords());
}

GeodesicCap::GeodesicCap(Direction c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0 && radius < kPi)) throw DomainError("cap radius must lie in (0, pi)");
}

bool GeodesicCap::contains(const Vec& y, double tol) const {
  return geodesic_distance_unit(y, center.coords()) <= radius + tol;
}

bool GeodesicCap::contains_cap(const GeodesicCap& other, double tol) const {
  return geodesic_distance_unit(center.coords(), other.center.coords()) + other.radius <= radius + tol;
}

LightlikeSet::LightlikeSet(int n_, double d0, std::vector<GeodesicCap> c)
    : n(n_), delta0(d0), caps(std::move(c)) {
  if (n < 2 || n > 4) throw DomainError("dimension must satisfy 2 <= n <= 4");
  if (caps.empty()) throw DomainError("lightlike set needs at least one cap");
  if (!(delta0 > 0.0)) throw DomainError("delta0 must be positive");
  for (const auto& cap : caps) {
    if (cap.center.dim() != n) throw DomainError("cap dimension mismatch");
    if (cap.radius < delta0 - 1e-15) throw DomainError("cap radius below delta0");
  }
}

bool LightlikeSet::contains(const Vec& y, double tol) const {
  for (const auto& c : caps)
    if (c.contains(y, tol)) return true;
  return false;
}

double LightlikeSet::depth(const Vec& y) const {
  double best = -kPi;
  for (const auto& c : caps) best = std::max(best, c.radius - geodesic_distance_unit(y, c.center.coords()));
  return best;
}

bool LightlikeSet::overlapping() const {
  for (std::size_t i = 0; i < caps.size(); ++i)
    for (std::size_t j = i + 1; j < caps.size(); ++j)
      if (geodesic_distance_unit(caps[i].center.coords(), caps[j].center.coords()) < caps[i].radius + caps[j].radius)
        return true;
  return false;
}

LightlikeSet half_sphere(int n, double delta0) {
  return LightlikeSet(n, delta0, {GeodesicCap(Direction(unit_vector(n, 0)), kPi / 2)});
}

double support_value(const GeodesicCap& cap, const Vec& x) {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  const double th = geodesic_distance_unit(x / r, cap.center.coords());
  if (th <= cap.radius) return r;
  return r * std::cos(th - cap.radius);
}

double support_value(const LightlikeSet& F, const Vec& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : F.caps) best = std::max(best, support_value(c, x));
  return best;
}

double support_value(const HullDomain& D, const Vec& x) { return support_value(D.parent(), x); }

std::vector<Vec> sphere_points(int n, int count) {
  std::vector<Vec> pts;
  if (count <= 0) return pts;
  pts.reserve(count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * kPi * i / count;
      Vec p(2);
      p << std::cos(a), std::sin(a);
      pts.push_back(p);
    }
  } else if (n == 3) {
    const double ga = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = ga * i;
      Vec p(3);
      p << z, r * std::cos(a), r * std::sin(a);
      pts.push_back(p);
    }
  } else if (n == 4) {
    const double g = 1.32471795724474602596;
    const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    for (int i = 0; i < count; ++i) {
      const double u1 = (i + 0.5) / count;
      const double u2 = std::fmod(0.5 + a1 * i, 1.0);
      const double u3 = std::fmod(0.5 + a2 * i, 1.0);
      const double s = std::sqrt(u1), c = std::sqrt(1.0 - u1);
      Vec p(4);
      p << s * std::cos(2 * kPi * u2), s * std::sin(2 * kPi * u2), c * std::cos(2 * kPi * u3),
          c * std::sin(2 * kPi * u3);
      pts.push_back(p);
    }
  } else {
    throw DomainError("sphere_points supports 2 <= n <= 4");
  }
  return pts;
}

Mat rotation_to_e1(const Vec& nu) {
  const int n = static_cast<int>(nu.size());
  Vec v = nu - unit_vector(n, 0);
  Mat H = Mat::Identity(n, n);
  const double vv = v.squaredNorm();
  if (vv > 1e-30) H -= 2.0 * v * v.transpose() / vv;
  return H;
}

Vec sphere_exp(const Vec& y, const Vec& v) {
  const double t = v.norm();
  if (t < 1e-300) return y;
  Vec r = std::cos(t) * y + std::sin(t) * (v / t);
  return r / r.norm();
}

HullDomain::HullDomain(LightlikeSet F, int grid_count) : F_(std::move(F)) {
  if (grid_count <= 0) grid_count = F_.n == 2 ? 720 : (F_.n == 3 ? 10000 : 20000);
  grid_ = sphere_points(F_.n, grid_count);
  support_.reserve(grid_.size());
  for (const auto& g : grid_) support_.push_back(support_value(F_, g));
}

double HullDomain::margin(const Vec& xi) const {
  double m = 1.0 - xi.norm();
  for (std::size_t i = 0; i < grid_.size(); ++i) m = std::min(m, support_[i] - xi.dot(grid_[i]));
  return m;
}

Vec HullDomain::separating_direction(const Vec& xi) const {
  double m = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double v = support_[i] - xi.dot(grid_[i]);
    if (v < m) {
      m = v;
      arg = i;
    }
  }
  // Outside the unit ball the radial direction separates at least as well.
  const double r = xi.norm();
  if (r > 0 && 1.0 - r < m) return xi / r;
  return grid_[arg];
}

double LightlikeSet::inner_radius(const Vec& y) const {
  if (!contains(y)) return 0.0;
  if (!overlapping()) return depth(y);
  if (n == 2) {
    double best = kPi;
    const double a = std::atan2(y[1], y[0]);
    for (const auto& [gs, ge] : gaps_2d(*this))
      for (double e : {gs, ge}) best = std::min(best, std::abs(wrap_angle(a - e + kPi) - kPi));
    return best;
  }
  // Boundary points of each cap that are not interior to another cap.
  const auto dirs = sphere_points(n - 1, n == 3 ? 360 : 600);
  double best = kPi;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const Vec& c = caps[i].center.coords();
    const Mat T = tangent_basis(c);
    for (const auto& u : dirs) {
      const Vec b = std::cos(caps[i].radius) * c + std::sin(caps[i].radius) * (T * u);
      bool inner = false;
      for (std::size_t j = 0; j < caps.size() && !inner; ++j)
        if (j != i && geodesic_distance_unit(b, caps[j].center.coords()) < caps[j].radius - 1e-12) inner = true;
      if (!inner) best = std::min(best, geodesic_distance_unit(y, b));
    }
  }
  return best;
}

std::vector<GeodesicCap> inscribed_balls(const LightlikeSet& F, int budget) {
  if (F.caps.empty()) throw DomainError("empty lightlike set");
  if (budget < 1) throw DomainError("budget must be >= 1");
  std::vector<GeodesicCap> out;
  for (const auto& c : F.caps)
    out.emplace_back(c.center, std::clamp(c.radius, F.delta0, kPi / 2));
  if (static_cast<int>(out.size()) >= budget) return out;
  const auto pts = sphere_points(F.n, 8 * budget);
  for (const auto& p : pts) {
    if (static_cast<int>(out.size()) >= budget) break;
    if (F.depth(p) < 0.0) continue;
    const double d = F.inner_radius(p);
    if (d < F.delta0) continue;
    out.emplace_back(Direction::normalized(p), std::min(d, kPi / 2));
  }
  return out;
}

GeodesicCap enclosing_ball(const LightlikeSet& F, const Direction& center) {
  if (center.dim() != F.n) throw DomainError("dimension mismatch");
  double r = 0.0;
  for (const auto& c : F.caps)
    r = std::max(r, std::min(kPi, geodesic_distance_unit(center.coords(), c.center.coords()) + c.radius));
  if (r > kPi - F.delta0 + 1e-14) throw InfeasibleError("enclosing radius exceeds pi - delta0 for this center");
  return GeodesicCap(center, std::min(r, kPi - F.delta0));
}

namespace {

// Maximal uncovered open arcs of the circle as (start, end) angles, end > start.
std::vector<std::pair<double, double>> gaps_2d(const LightlikeSet& F) {
  std::vector<std::pair<double, double>> arcs;
  for (const auto& c : F.caps) {
    const double a = std::atan2(c.center[1], c.center[0]);
    arcs.emplace_back(a - c.radius, a + c.radius);
  }
  // Cut the circle at the start of the first arc and merge in that chart.
  const double origin = arcs.front().first;
  std::vector<std::pair<double, double>> local;
  for (auto [s, e] : arcs) {
    const double ls = wrap_angle(s - origin);
    local.emplace_back(ls, ls + (e - s));
  }
  std::sort(local.begin(), local.end());
  std::vector<std::pair<double, double>> merged;
  for (auto iv : local) {
    if (!merged.empty() && iv.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, iv.second);
    else
      merged.push_back(iv);
  }
  // The last interval may wrap past 2*pi and absorb intervals at the front.
  while (merged.size() > 1 && merged.back().second - 2.0 * kPi >= merged.front().first) {
    merged.back().second = std::max(merged.back().second, merged.front().second + 2.0 * kPi);
    merged.erase(merged.begin());
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : merged)
    if (iv.second - iv.first >= 2.0 * kPi - 1e-14) return out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const double gs = merged[i].second;
    const double ge = (i + 1 < merged.size()) ? merged[i + 1].first : merged.front().first + 2.0 * kPi;
    if (ge - gs > 1e-14) out.emplace_back(origin + gs, origin + ge);
  }
  return out;
}

std::vector<Direction> perpendicular_2d(const LightlikeSet& F) {
  std::vector<Direction> out;
  for (const auto& [gs, ge] : gaps_2d(F)) {
    const double mid = 0.5 * (gs + ge);
    Vec p(2);
    p << std::cos(mid), std::sin(mid);
    if (!F.contains(p, 1e-12)) out.push_back(Direction::normalized(p));
  }
  return out;
}

}  // namespace

std::vector<GeodesicCap> minimal_enclosing_arcs(const LightlikeSet& F) {
  if (F.n != 2) throw DomainError("minimal enclosing arcs are defined for n = 2");
  std::vector<GeodesicCap> out;
  for (const auto& [gs, ge] : gaps_2d(F)) {
    const double mid = 0.5 * (gs + ge) + kPi;
    const double r = kPi - 0.5 * (ge - gs);
    if (r > kPi - F.delta0 + 1e-14) continue;
    Vec c(2);
    c << std::cos(mid), std::sin(mid);
    out.emplace_back(Direction::normalized(c), std::min(r, kPi - F.delta0));
  }
  return out;
}

std::vector<Direction> perpendicular_directions(const HullDomain& D, int budget) {
  const LightlikeSet& F = D.parent();
  if (F.n == 2) return perpendicular_2d(F);
  std::vector<Direction> out;
  auto push_unique = [&](const Vec& v) {
    for (const auto& d : out)
      if ((d.coords() - v).norm() < 1e-6) return;
    out.push_back(Direction::normalized(v));
  };
  for (const auto& c : F.caps) {
    Vec m = -c.center.coords();
    if (F.contains(m, 1e-12)) continue;
    if (std::abs(support_value(F, m) + std::cos(c.radius)) < 1e-12) push_unique(m);
  }
  const auto seeds = sphere_points(F.n, std::max(budget, 16));
  for (std::size_t i = 0; i < F.caps.size(); ++i) {
    for (std::size_t j = i + 1; j < F.caps.size(); ++j) {
      const auto& A = F.caps[i];
      const auto& B = F.caps[j];
      auto g = [&](const Vec& t) { return support_value(A, t) - support_value(B, t); };
      for (const auto& s : seeds) {
        if (static_cast<int>(out.size()) >= budget) return out;
        if (F.contains(s)) continue;
        Vec t = s;
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
          const double gv = g(t);
          if (std::abs(gv) < 1e-13) {
            ok = true;
            break;
          }
          const Mat T = tangent_basis(t);
          Vec grad(T.cols());
          const double h = 1e-7;
          for (int c = 0; c < T.cols(); ++c)
            grad[c] = (g(sphere_exp(t, h * T.col(c))) - g(sphere_exp(t, -h * T.col(c)))) / (2 * h);
          const double gg = grad.squaredNorm();
          if (gg < 1e-20) break;
          t = sphere_exp(t, -(gv / gg) * (T * grad));
        }
        if (!ok || F.contains(t, 1e-9)) continue;
        if (std::abs(support_value(F, t) - support_value(A, t)) > 1e-10) continue;
        push_unique(t);
      }
    }
  }
  return out;
}

std::vector<std::pair<double, double>> arc_gaps(const LightlikeSet& F) {
  if (F.n != 2) throw DomainError("arc gaps need n = 2");
  return gaps_2d(F);
}

}  // namespace sigmak
