#include "sigmak/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace sigmak {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tangent offsets filling the disc of radius delta in R^{m}.
Mat disc_points(int m, double delta, int count) {
  Mat P = Mat::Zero(m, count);
  if (m == 0) return P;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 1; i < count; ++i) {
    const double frac = (i + 0.5) / count;
    if (m == 1) {
      P(0, i) = delta * (2.0 * i / (count - 1.0) - 1.0);
    } else if (m == 2) {
      const double r = delta * std::sqrt(frac);
      P(0, i) = r * std::cos(i * golden);
      P(1, i) = r * std::sin(i * golden);
    } else {
      static thread_local std::vector<Vec> dirs;
      if (static_cast<int>(dirs.size()) != count || dirs.front().size() != m) dirs = sphere_points(m, count);
      P.col(i) = delta * std::pow(frac, 1.0 / m) * dirs[i];
    }
  }
  return P;
}

double distance_to(const LightlikeSet& F, const Vec& y) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : F.caps) d = std::min(d, std::max(0.0, geodesic_distance_unit(y, c.center.coords()) - c.radius));
  return d;
}

bool is_half_sphere(const LightlikeSet& F) {
  return F.caps.size() == 1 && std::abs(F.caps[0].radius - kPi / 2) < 1e-12;
}

}  // namespace

ValueGrad cutoff_standard(const Vec& x, double lambda, double R0, double R1) {
  const int n = static_cast<int>(x.size());
  const double r = x.norm();
  const Vec xbar = x.tail(n - 1);
  const double xb = xbar.norm();
  double V;
  Vec dV = Vec::Zero(n);
  if (x[0] >= 0.0) {
    V = r;
    if (r > 0.0) dV = x / r;
  } else {
    V = xb;
    if (xb > 0.0) dV.tail(n - 1) = xbar / xb;
  }
  const double A = std::sqrt(lambda * lambda + V * V);
  ValueGrad out;
  out.value = A;
  out.grad = (V / A) * dV;
  if (r <= R0) return out;
  const double eta = r >= R1 ? 1.0 : (r - R0) / (R1 - R0);
  const Vec deta = r >= R1 ? Vec(Vec::Zero(n)) : Vec(x / (r * (R1 - R0)));
  const double W = 1.0 - V / r;
  const Vec dW = -(dV / r - (V / (r * r * r)) * x);
  const double P = 1.0 / std::sqrt(1.0 + xb * xb);
  Vec dP = Vec::Zero(n);
  dP.tail(n - 1) = -xbar * (P * P * P);
  out.value += P * W * eta;
  out.grad += W * eta * dP + P * eta * dW + P * W * deta;
  return out;
}

BarrierField::BarrierField(const ProfileSolution& profile, Perturbation P, BarrierSettings s)
    : profile_(&profile),
      P_(std::move(P)),
      s_(s),
      lower_(SemitroughFamily::inscribed(P_.F(), profile, s.family_budget)),
      upper_(SemitroughFamily::enclosing(P_.F(), profile, s.family_budget)) {
  const int n = F().n;
  if (profile.params().n != n) throw DomainError("profile and lightlike set dimensions differ");
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& th : perpendicular_directions(HullDomain(F()))) dmin = std::min(dmin, distance_to(F(), th.coords()));
  delta_ = std::isfinite(dmin) ? std::max(1e-3, 0.5 * dmin) : 1e-3;
  seeds_ = sphere_points(n, s_.seeds);
  local_seeds_ = disc_points(n - 1, delta_, std::max(2, s_.super_seeds));
}

ValueGrad BarrierField::subsolution_grad(const Vec& x) const {
  if (x.size() != F().n) throw DomainError("point dimension differs from F");
  const double M = P_.M();
  auto G = [&](const Vec& y) { return P_.q(y) - M + lower_.value(x + P_.p(y)); };
  const SphereOptimum o = sphere_maximize(G, seeds_, s_.search);
  if (!o.converged) throw NumericError("subsolution search did not converge");
  ValueGrad r = lower_.eval(x + P_.p(o.y));
  r.value = o.value;
  return r;
}

ValueGrad BarrierField::supersolution_grad(const Vec& x) const {
  if (x.size() != F().n) throw DomainError("point dimension differs from F");
  const double rx = x.norm();
  if (!(rx > 0.0)) throw DomainError("supersolution needs |x| > 0");
  const Vec theta = x / rx;
  const double M = P_.M();
  auto H = [&](const Vec& y) { return -(P_.q(y) + M * support_value(F(), y) + upper_.value(x + P_.p_hat(y))); };
  std::vector<Vec> seeds;
  seeds.reserve(local_seeds_.cols());
  if (local_seeds_.rows() == 0) {
    seeds.push_back(theta);
  } else {
    const Mat T = tangent_basis(theta);
    for (int i = 0; i < local_seeds_.cols(); ++i) seeds.push_back(sphere_exp(theta, T * local_seeds_.col(i)));
  }
  const SphereOptimum o = sphere_maximize(H, seeds, s_.search, theta, delta_);
  if (!o.converged) throw NumericError("supersolution search did not converge");
  ValueGrad r = upper_.eval(x + P_.p_hat(o.y));
  r.value = -o.value;
  return r;
}

const CutoffConstants& BarrierField::cutoff_constants() const {
  if (!cut_) throw StateError("cutoff constants are not calibrated");
  return *cut_;
}

void BarrierField::set_cutoff_constants(const CutoffConstants& c) {
  if (!(c.lambda > 0.0 && c.lambda <= 1.0)) throw DomainError("lambda must lie in (0, 1]");
  if (!(c.R0 > 0.0 && c.R1 > c.R0)) throw DomainError("need R1 > R0 > 0");
  if (!(c.M1 > 0.0)) throw DomainError("M1 must be positive");
  cut_ = c;
}

ValueGrad BarrierField::cutoff_base(const Vec& x) const {
  const CutoffConstants& c = cutoff_constants();
  auto psi = [&c](const Vec& y) {
    ValueGrad v = cutoff_standard(y / c.M1, c.lambda, c.R0, c.R1);
    v.value *= c.M1;
    return v;
  };
  ValueGrad best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& m : upper_.members()) {
    ValueGrad v = boost_eval(psi, m.alpha(), m.rotation() * x);
    if (v.value < best.value) {
      best.value = v.value;
      best.grad = m.rotation().transpose() * v.grad;
    }
  }
  return best;
}

ValueGrad BarrierField::cutoff_grad(const Vec& x) const {
  if (x.size() != F().n) throw DomainError("point dimension differs from F");
  cutoff_constants();
  const double M = P_.M();
  auto G = [&](const Vec& y) { return P_.q(y) - M + cutoff_base(x + P_.p(y)).value; };
  const SphereOptimum o = sphere_maximize(G, seeds_, s_.search);
  if (!o.converged) throw NumericError("cutoff search did not converge");
  ValueGrad r = cutoff_base(x + P_.p(o.y));
  r.value = o.value;
  return r;
}

double Box::radius() const {
  double s = 0.0;
  for (int i = 0; i < lo.size(); ++i) s += std::max(lo[i] * lo[i], hi[i] * hi[i]);
  return std::sqrt(s);
}

double cutoff_lipschitz(const BarrierField& B, const CalibrationOptions& opt) {
  const CutoffConstants& c = B.cutoff_constants();
  const int n = B.F().n;
  std::uint64_t state = opt.seed;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double rmin = 1e-3, rmax = 10.0 * c.M1 * c.R1;
  double worst = 0.0;
  for (int i = 0; i < opt.lipschitz_points; ++i) {
    const Vec d = random_unit(n, state);
    // Half the points fill the transition annulus.
    const double r = (i % 2 == 0) ? rmin * std::pow(rmax / rmin, U(rng))
                                  : c.M1 * (c.R0 + (c.R1 - c.R0) * U(rng));
    worst = std::max(worst, B.cutoff_base(r * d).grad.norm());
  }
  const double span = 2.0 * c.M1 * c.R1;
  for (int i = 0; i < opt.lipschitz_pairs; ++i) {
    const Vec a = span * U(rng) * random_unit(n, state);
    const Vec b = a + (0.05 + span * U(rng) * 0.1) * random_unit(n, state);
    const double q = std::abs(B.cutoff(a) - B.cutoff(b)) / (a - b).norm();
    worst = std::max(worst, q);
  }
  return worst;
}

CalibrationReport calibrate_cutoff(BarrierField& B, const Box& K, const CalibrationOptions& opt) {
  const int n = B.F().n;
  if (K.lo.size() != n || K.hi.size() != n) throw DomainError("box dimension differs from F");
  for (int i = 0; i < n; ++i)
    if (!(K.lo[i] <= K.hi[i]) || !std::isfinite(K.lo[i]) || !std::isfinite(K.hi[i])) throw DomainError("box must be bounded");

  // Grid on K with cached subsolution values.
  const int g = opt.grid_per_axis > 0 ? opt.grid_per_axis : (n == 2 ? 9 : 5);
  std::vector<Vec> grid;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = g == 1 ? 0.5 * (K.lo[i] + K.hi[i]) : K.lo[i] + (K.hi[i] - K.lo[i]) * idx[i] / (g - 1.0);
    grid.push_back(x);
    int i = 0;
    while (i < n && ++idx[i] == g) idx[i++] = 0;
    if (i == n) break;
  }
  std::vector<double> sub(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) sub[i] = B.subsolution(grid[i]);

  // Far samples with cached supersolution values.
  std::vector<Vec> dirs = sphere_points(n, opt.directions);
  for (const auto& d : perpendicular_directions(HullDomain(B.F()))) dirs.push_back(d.coords());
  std::vector<Vec> far;
  std::vector<double> sup;
  for (double r : opt.radii)
    for (const auto& d : dirs) {
      far.push_back(r * d);
      sup.push_back(B.supersolution(r * d));
    }

  const double M = B.M();
  const double a1 = B.perturbation().constants().a1;
  const double reach = K.radius() + M + a1 + 1.0;
  CalibrationReport rep;
  std::string last = "no candidate tried";
  std::vector<std::size_t> order(far.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int m = 0; m <= opt.max_doublings; ++m) {
    const double M1 = std::ldexp(1.0, m);
    for (int j = 0; j <= opt.max_halvings; ++j) {
      const double lambda = std::ldexp(1.0, -j);
      for (double r0scale : {1.0, 8.0}) {
        for (double bfac : {4.0, 32.0}) {
          CutoffConstants c;
          c.lambda = lambda;
          c.M1 = M1;
          c.R0 = std::max(1.0, reach / M1) * r0scale;
          c.R1 = c.R0 * (1.0 + bfac / (lambda * lambda));
          B.set_cutoff_constants(c);
          ++rep.candidates;

          CalibrationOptions lo = opt;
          lo.lipschitz_pairs = 0;
          const double lip = cutoff_lipschitz(B, lo);
          if (!(lip <= opt.lipschitz_bound)) {
            last = "Lipschitz bound " + std::to_string(lip);
            continue;
          }
          double smin = std::numeric_limits<double>::infinity();
          bool ok = true;
          for (std::size_t k = 0; k < order.size(); ++k) {
            const std::size_t i = order[k];
            const double gap = B.cutoff(far[i]) - sup[i];
            smin = std::min(smin, gap);
            if (gap < 0.0) {
              // Check the last offender first next time.
              std::rotate(order.begin(), order.begin() + k, order.begin() + k + 1);
              last = "cutoff below supersolution at |x| = " + std::to_string(far[i].norm());
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          double c0 = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < grid.size(); ++i) c0 = std::min(c0, B.cutoff(grid[i]) - sub[i]);
          if (!(c0 > 0.0)) {
            last = "cutoff not above subsolution on K (gap " + std::to_string(c0) + ")";
            continue;
          }
          const double lipq = cutoff_lipschitz(B, opt);
          if (!(lipq <= opt.lipschitz_bound)) {
            last = "difference quotient " + std::to_string(lipq);
            continue;
          }
          c.c0 = c0;
          B.set_cutoff_constants(c);
          rep.constants = c;
          rep.min_gap = c0;
          rep.min_super_margin = smin;
          rep.max_lipschitz = lipq;
          return rep;
        }
      }
    }
  }
  B.clear_cutoff_constants();
  throw CalibrationError("cutoff calibration exhausted; last violation: " + last);
}

std::pair<double, double> predicted_limits(const BarrierField& B, const Vec& theta) {
  const LightlikeSet& F = B.F();
  if (F.inner_radius(theta) > 1e-9) {
    const double q = B.perturbation().q(theta);
    return {q, q};
  }
  if (is_half_sphere(F) && theta.dot(F.caps[0].center.coords()) <= -1.0 + 1e-12) {
    const double l = B.profile().params().l, M = B.M();
    return {std::sqrt(l * l + M * M) - M, l};
  }
  return {kNaN, kNaN};
}

std::vector<OrderingRow> ordering_report(const BarrierField& B, const std::vector<Vec>& directions,
                                         const std::vector<double>& radii, const OrderingOptions& opt) {
  std::vector<OrderingRow> rows;
  for (const auto& d : directions) {
    const Vec theta = d / d.norm();
    const auto [ps, pu] = predicted_limits(B, theta);
    const bool perp = std::isfinite(ps) && !(B.F().inner_radius(theta) > 1e-9);
    for (double r : radii) {
      OrderingRow row;
      row.theta = theta;
      row.r = r;
      const Vec x = r * theta;
      row.sub = B.subsolution(x);
      row.super = B.supersolution(x);
      row.cutoff = B.calibrated() ? B.cutoff(x) : kNaN;
      row.V = B.V(x);
      row.predicted_sub = ps;
      row.predicted_super = pu;
      const double tol = 1e-9 * (1.0 + r);
      if (row.super < row.sub - tol) row.violations.push_back("super below sub");
      if (B.calibrated() && r >= 1e3 && row.cutoff < row.super - tol) row.violations.push_back("cutoff below super");
      if (std::isfinite(ps) && r >= opt.limit_radius) {
        const double t = perp ? opt.perpendicular_tol : opt.limit_tol;
        if (std::abs(row.sub - row.V - ps) > t) row.violations.push_back("sub limit");
        if (std::abs(row.super - row.V - pu) > t) row.violations.push_back("super limit");
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string ordering_csv(const std::vector<OrderingRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  if (rows.empty()) return "";
  const int n = static_cast<int>(rows.front().theta.size());
  for (int i = 0; i < n; ++i) os << "theta" << i + 1 << ',';
  os << "r,sub,super,cutoff,V,predicted_sub_limit,predicted_super_limit\r\n";
  for (const auto& r : rows) {
    for (int i = 0; i < n; ++i) os << r.theta[i] << ',';
    os << r.r << ',' << r.sub << ',' << r.super << ',' << r.cutoff << ',' << r.V << ',' << r.predicted_sub << ','
       << r.predicted_super << "\r\n";
  }
  return os.str();
}

double max_ordering_violation(const std::vector<OrderingRow>& rows) {
  double v = 0.0;
  for (const auto& r : rows) {
    v = std::max(v, r.sub - r.super);
    if (std::isfinite(r.cutoff) && r.r >= 1e3) v = std::max(v, r.super - r.cutoff);
  }
  return v;
}

BoundCheck perpendicular_super_bound(double l, double M, double delta, int n, double xn) {
  if (n < 2) throw DomainError("needs n >= 2");
  auto V = [](const Vec& y) { return y[0] >= 0.0 ? 1.0 : std::sqrt(std::max(0.0, 1.0 - y[0] * y[0])); };
  auto H = [&](const Vec& y) {
    const double yn = y[n - 1];
    const double rest = std::max(0.0, 1.0 - y[0] * y[0] - yn * yn);
    return -(M * V(y) + std::sqrt(l * l + (xn - M * yn) * (xn - M * yn) + M * M * rest));
  };
  const Vec c = -unit_vector(n, 0);
  const Mat T = tangent_basis(c);
  const Mat D = disc_points(n - 1, delta, 512);
  std::vector<Vec> seeds;
  for (int i = 0; i < D.cols(); ++i) seeds.push_back(sphere_exp(c, T * D.col(i)));
  SphereSearch s;
  s.nm.xtol = 1e-12;
  const SphereOptimum o = sphere_maximize(H, seeds, s, c, delta);
  return {-o.value, -M + std::sqrt(l * l + (xn + M) * (xn + M))};
}

double half_sphere_chain(const Perturbation& P, double l, int samples, std::uint64_t seed) {
  const int n = P.F().n;
  if (n < 2) throw DomainError("needs n >= 2");
  const double M = P.M();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uint64_t state = seed;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Vec y = random_unit(n, state);
    y[0] = std::abs(y[0]);
    const double xn = i % 8 == 0 ? 0.0 : 100.0 * M * U(rng);
    const Vec p = P.p(y);
    double s = l * l + (xn + p[n - 1]) * (xn + p[n - 1]);
    for (int j = 1; j < n - 1; ++j) s += p[j] * p[j];
    worst = std::max(worst, P.q(y) + std::sqrt(s) - std::sqrt(l * l + (xn + M) * (xn + M)));
  }
  return worst;
}

double far_perpendicular_excess(const BarrierField& B, double shift, const std::vector<double>& xn) {
  const int n = B.F().n;
  const double l = B.profile().params().l, M = B.M();
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : xn) {
    Vec x = Vec::Zero(n);
    x[0] = -shift;
    x[n - 1] += t;
    const double V = B.V(x);
    worst = std::max(worst, B.subsolution(x) + M - std::sqrt(l * l + (V + M) * (V + M)));
  }
  return worst;
}

}  // namespace sigmak
