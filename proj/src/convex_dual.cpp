#include "sigmak/convex_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sigmak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec y = x;
  for (int i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const double fp = f(y);
    y[i] = x[i] - h;
    const double fm = f(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// (sigma_n / sigma_{n-k})^{1/k} of the dual matrix on the closed cone: eigenvalues
// in [-tol, 0) are difference noise on a flat direction and count as 0, where F = 0.
// NaN when the matrix is genuinely indefinite.
double closure_operator(const Vec& xi, const Mat& H, int k, double tol) {
  const int n = static_cast<int>(xi.size());
  const Eigen::SelfAdjointEigenSolver<Mat> es(dual_matrix(xi, H), Eigen::EigenvaluesOnly);
  std::vector<double> kappa(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvalues()[i];
    if (v < -tol) return std::numeric_limits<double>::quiet_NaN();
    kappa[i] = std::max(v, 0.0);
  }
  const std::vector<double> s = sigma_all(kappa);
  if (s[n] == 0.0) return 0.0;
  return std::pow(s[n] / s[n - k], 1.0 / k);
}

}  // namespace

DualField::DualField(ConvexSource u, HullDomain domain, DualOptions opt)
    : u_(std::move(u)), domain_(std::move(domain)), opt_(opt) {}

ValueGrad DualField::source(const Vec& x) const {
  ValueGrad v = u_(x);
  if (v.grad.size() != x.size())
    v.grad = central_gradient([this](const Vec& y) { return u_(y).value; }, x, opt_.fd_step);
  return v;
}

LegendreResult DualField::regularized(const Vec& xi, double eps, double half_side, const Vec& x_start) const {
  const int n = dim();
  if (xi.size() != n) throw DomainError("dual point dimension differs from domain");
  BfgsOptions bo{opt_.gtol, opt_.max_iter};
  auto phi = [&](const Vec& x, Vec& g) {
    ValueGrad v;
    try {
      v = source(x);
    } catch (const DomainError&) {
      return kInf;  // e.g. a supersolution at the origin
    }
    g = v.grad - xi + eps * x;
    return v.value - xi.dot(x) + 0.5 * eps * x.squaredNorm();
  };
  Vec start = x_start.size() == n ? x_start : Vec(Vec::Zero(n)), g0;
  if (!std::isfinite(phi(start, g0))) start = Vec::Zero(n);
  if (!std::isfinite(phi(start, g0))) start = Vec::Constant(n, 1e-3);
  OptResult r = bfgs(phi, start, bo);
  if (!r.converged) {
    // Kinks (ties in the barrier sup) stall BFGS; polish with a simplex search.
    auto val = [&](const Vec& x) {
      Vec g;
      return phi(x, g);
    };
    NelderMeadOptions nm;
    nm.initial_step = 1e-2 * (1.0 + r.x.norm());
    nm.xtol = 1e-10 * (1.0 + r.x.norm());
    nm.ftol = 1e-16;
    const OptResult p = nelder_mead(val, r.x, nm);
    if (p.f <= r.f) {
      r.x = p.x;
      r.f = p.f;
    }
    r.converged = p.converged;
  }
  if (std::isfinite(half_side) && r.x.lpNorm<Eigen::Infinity>() > half_side) {
    // Maximiser leaves the box: solve in x = L tanh(s).
    const double L = half_side;
    auto psi = [&](const Vec& s, Vec& g) {
      Vec x(n), dx(n);
      for (int i = 0; i < n; ++i) {
        const double t = std::tanh(s[i]);
        x[i] = L * t;
        dx[i] = L * (1.0 - t * t);
      }
      Vec gx;
      const double v = phi(x, gx);
      g = gx.cwiseProduct(dx);
      return v;
    };
    Vec s0 = Vec::Zero(n);
    for (int i = 0; i < n; ++i) s0[i] = std::atanh(std::clamp(r.x[i] / L, -0.999, 0.999));
    const OptResult rs = bfgs(psi, s0, bo);
    r = rs;
    for (int i = 0; i < n; ++i) r.x[i] = L * std::tanh(rs.x[i]);
  }
  LegendreResult out;
  out.value = -r.f;
  out.x0 = r.x;
  out.converged = r.converged;
  return out;
}

LegendreResult DualField::legendre(const Vec& xi) const {
  if (xi.size() != dim()) throw DomainError("dual point dimension differs from domain");
  if (!domain_.interior(xi)) throw DomainError("Legendre objective is unbounded: xi is not interior to Conv(F)");
  LegendreResult r = regularized(xi, 0.0, kInf);
  if (!r.converged) throw NumericError("Legendre maximisation did not converge");
  return r;
}

LegendreResult DualField::partial_conjugate(const Vec& xi, double half_side) const {
  return regularized(xi, 0.0, half_side);
}

double DualField::biconjugate(const Vec& x) const {
  const int n = dim();
  // Start from the deepest of a few candidate points.
  Vec start = Vec::Zero(n);
  double best = domain_.margin(start);
  for (const auto& c : domain_.parent().caps) {
    const Vec cand = 0.5 * c.center.coords();
    if (const double m = domain_.margin(cand); m > best) {
      best = m;
      start = cand;
    }
  }
  auto psi = [&](const Vec& xi, Vec& g) {
    if (!domain_.interior(xi)) return kInf;
    try {
      const LegendreResult r = legendre(xi);
      g = r.x0 - x;
      return r.value - x.dot(xi);
    } catch (const Error&) {
      return kInf;
    }
  };
  const OptResult r = bfgs(psi, start, BfgsOptions{1e-9, 500});
  return -r.f;
}

DomainProbe::DomainProbe(const DualField& D, int directions, std::vector<double> radii)
    : dirs_(sphere_points(D.dim(), directions)), radii_(std::move(radii)) {
  std::sort(radii_.begin(), radii_.end());
  for (const auto& d : dirs_) {
    std::vector<double> row;
    for (double r : radii_) row.push_back(D.source(r * d).value);
    u_.push_back(std::move(row));
  }
}

bool DomainProbe::interior(const Vec& xi) const {
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    const double s = xi.dot(dirs_[i]);
    bool growing = true;
    double prev = -kInf;
    for (std::size_t j = 0; j < radii_.size() && growing; ++j) {
      const double g = radii_[j] * s - u_[i][j];
      growing = g > prev;
      prev = g;
    }
    if (growing) return false;
  }
  return true;
}

const HullDomain& dual_domain(const DualField& D) { return D.domain(); }

MoreauField::MoreauField(const DualField& base, double eps, int j) : base_(&base), eps_(eps), j_(j) {
  if (!(eps > 0.0)) throw DomainError("Moreau parameter must be positive");
  if (j < 1) throw DomainError("approximation index must be >= 1");
}

MoreauValue MoreauField::eval(const Vec& xi, const Vec& start) const {
  const LegendreResult r = base_->regularized(xi, eps_, half_side(), start);
  MoreauValue m;
  m.value = r.value;
  m.grad = r.x0;
  m.prox = xi - eps_ * r.x0;
  return m;
}

Mat MoreauField::hessian(const Vec& xi, const MoreauValue& m) const {
  // Dg is 1/eps-Lipschitz even where u has ridges, so difference it directly.
  const int n = static_cast<int>(xi.size());
  const double h = 1e-4;
  Mat H(n, n);
  Vec y = xi;
  for (int i = 0; i < n; ++i) {
    y[i] = xi[i] + h;
    const Vec gp = eval(y, m.grad).grad;
    y[i] = xi[i] - h;
    const Vec gm = eval(y, m.grad).grad;
    y[i] = xi[i];
    H.col(i) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

double MoreauField::base_value(const Vec& xi) const { return base_->partial_conjugate(xi, half_side()).value; }

MoreauValue moreau_direct(const std::function<double(const Vec&)>& f, double eps, const Vec& xi) {
  if (!(eps > 0.0)) throw DomainError("Moreau parameter must be positive");
  auto obj = [&](const Vec& eta) { return f(eta) + (xi - eta).squaredNorm() / (2.0 * eps); };
  auto fg = [&](const Vec& eta, Vec& g) {
    g = central_gradient(obj, eta, 1e-6);
    return obj(eta);
  };
  const OptResult r = bfgs(fg, xi, BfgsOptions{1e-9, 1000});
  if (!std::isfinite(r.f)) throw NumericError("prox minimisation failed");
  MoreauValue m;
  m.value = r.f;
  m.prox = r.x;
  m.grad = (xi - r.x) / eps;
  return m;
}

EpsilonSelection select_epsilon(const DualField& D, int j, int k, const std::vector<Vec>& grid,
                                const SelectOptions& opt) {
  if (j < 1) throw DomainError("approximation index must be >= 1");
  if (grid.empty()) throw DomainError("empty grid");
  const int n = D.dim();
  const double target = std::pow(binom(n, k), -1.0 / k);
  std::vector<LegendreResult> ustar;
  ustar.reserve(grid.size());
  for (const auto& xi : grid) ustar.push_back(D.legendre(xi));
  EpsilonSelection sel;
  for (const auto& u : ustar)
    if (u.x0.norm() < 1e-6) ++sel.critical_points;
  double eps = opt.start;
  for (int step = 0; step < opt.max_steps; ++step, eps *= opt.ratio) {
    ++sel.tried;
    const MoreauField g(D, eps, j);
    double gmin = kInf, gmax = -kInf, dmax = 0.0, fmax = -kInf;
    bool ok = true;
    for (std::size_t i = 0; i < grid.size() && ok; ++i) {
      const MoreauValue m = g.eval(grid[i], ustar[i].x0);
      const double gap = ustar[i].value - m.value;
      gmin = std::min(gmin, gap);
      gmax = std::max(gmax, gap);
      // g = u* exactly where the conjugate's maximiser is x = 0.
      const bool critical = ustar[i].x0.norm() < 1e-6 && gap > -1e-12;
      if (!((gap > 0.0 || critical) && gap < 1.0 / j)) {
        sel.failure = "value gap " + std::to_string(gap);
        ok = false;
        break;
      }
      const double dg = (m.grad - ustar[i].x0).norm();
      dmax = std::max(dmax, dg);
      if (!(dg < 1.0 / j)) {
        sel.failure = "gradient gap " + std::to_string(dg);
        ok = false;
        break;
      }
      const double ex = closure_operator(grid[i], g.hessian(grid[i], m), k, 1e-5 / eps) - target;
      fmax = std::max(fmax, ex);
      if (!(ex <= opt.operator_tol)) {
        sel.failure = std::isfinite(ex) ? "operator excess " + std::to_string(ex) : "envelope Hessian not positive semidefinite";
        ok = false;
      }
    }
    if (ok) {
      sel.eps = eps;
      sel.min_gap = gmin;
      sel.max_gap = gmax;
      sel.max_grad_gap = dmax;
      sel.max_operator_excess = fmax;
      return sel;
    }
  }
  throw CalibrationError("epsilon ladder exhausted; last failure: " + sel.failure);
}

DualOrderReport dual_order_check(const DualField& upper, const DualField& lower, const std::vector<Vec>& grid,
                                 double tol) {
  DualOrderReport rep;
  rep.max_excess = -kInf;
  for (const auto& xi : grid) {
    const double e = upper.legendre(xi).value - lower.legendre(xi).value;
    rep.max_excess = std::max(rep.max_excess, e);
    if (e > tol) ++rep.violations;
    ++rep.points;
  }
  return rep;
}

std::vector<Vec> hull_grid(const HullDomain& D, double margin, double h) {
  const int n = D.dim();
  const int m = static_cast<int>(std::floor(1.0 / h));
  std::vector<Vec> out;
  std::vector<int> idx(n, -m);
  for (;;) {
    Vec xi(n);
    for (int i = 0; i < n; ++i) xi[i] = idx[i] * h;
    if (D.margin(xi) >= margin) out.push_back(xi);
    int i = 0;
    while (i < n && ++idx[i] > m) idx[i++] = -m;
    if (i == n) break;
  }
  return out;
}

std::string dual_grid_csv(const DualField& D, const MoreauField& g, const std::vector<Vec>& grid) {
  std::ostringstream os;
  os.precision(17);
  const int n = D.dim();
  for (int i = 0; i < n; ++i) os << "xi" << i + 1 << ',';
  os << "ustar,gstar,grad_gap\r\n";
  for (const auto& xi : grid) {
    const LegendreResult u = D.legendre(xi);
    const MoreauValue m = g.eval(xi);
    for (int i = 0; i < n; ++i) os << xi[i] << ',';
    os << u.value << ',' << m.value << ',' << (m.grad - u.x0).norm() << "\r\n";
  }
  return os.str();
}

}  // namespace sigmak
