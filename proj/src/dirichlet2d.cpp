#include "sigmak/dirichlet2d.hpp"

#include "sigmak/curvature.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace sigmak {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ResidualParts {
  double r;
  double d11, d22, d12;  // derivatives in H11, H22 and the shared off-diagonal entry
};

ResidualParts residual_parts(const Vec& xi, const Mat& H, int k) {
  const double r2 = xi.squaredNorm();
  if (!(r2 < 1.0)) throw DomainError("dual equation needs |xi| < 1");
  const double w2 = 1.0 - r2;
  const double c = w2 * w2;  // w^4
  const double det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
  if (k == 2) return {c * det - 1.0, c * H(1, 1), c * H(0, 0), -2.0 * c * H(0, 1)};
  if (k != 1) throw DomainError("dirichlet2d supports k = 1 and k = 2");
  const double w = std::sqrt(w2);
  const Mat g = Mat::Identity(2, 2) - xi * xi.transpose() / (1.0 + w);
  const Mat G = g * g;
  const double s1 = w * (G(0, 0) * H(0, 0) + 2.0 * G(0, 1) * H(0, 1) + G(1, 1) * H(1, 1));
  const double s2 = c * det;
  const double a11 = w * G(0, 0), a22 = w * G(1, 1), a12 = 2.0 * w * G(0, 1);
  const double b11 = c * H(1, 1), b22 = c * H(0, 0), b12 = -2.0 * c * H(0, 1);
  const double q = s2 / s1;
  return {q - 0.5, (b11 - q * a11) / s1, (b22 - q * a22) / s1, (b12 - q * a12) / s1};
}

bool positive_definite(const Mat& H) { return H(0, 0) > 0.0 && H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0) > 0.0; }

const int kNbr[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};

}  // namespace

DomainSequence::DomainSequence(const HullDomain& D, int J, DomainParams p) : J_(J), p_(p) {
  if (D.dim() != 2) throw DomainError("domain sequence needs n = 2");
  if (J < 1) throw DomainError("need at least one domain");
  for (const auto& [gs, ge] : arc_gaps(D.parent())) {
    const double mid = 0.5 * (gs + ge);
    Edge e;
    e.normal = Vec(2);
    e.normal << std::cos(mid), std::sin(mid);
    e.tangent = Vec(2);
    e.tangent << -std::sin(mid), std::cos(mid);
    e.c = std::cos(0.5 * (ge - gs));
    edges_.push_back(e);
  }
  const auto pts = lattice(1, 0.02);
  if (pts.empty()) throw DomainError("offset domains collapse: Conv(F) is too thin");
  center_ = Vec::Zero(2);
  for (const auto& x : pts) center_ += x;
  center_ /= static_cast<double>(pts.size());
  if (!contains(1, center_)) throw DomainError("domain centre is not interior");
}

double DomainSequence::level(int j, const Vec& xi) const {
  const double s = std::ldexp(p_.smoothing, -j), o = std::ldexp(p_.offset, -j), b = std::ldexp(p_.bulge, -j);
  double terms[64];
  int m = 0;
  terms[m++] = xi.norm() - 1.0 + o;
  for (const auto& e : edges_) {
    const double t = xi.dot(e.tangent);
    terms[m++] = xi.dot(e.normal) + b * t * t - e.c + o;
    if (m == 64) break;
  }
  if (m == 1) return terms[0];
  const double mx = *std::max_element(terms, terms + m);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += std::exp((terms[i] - mx) / s);
  return mx + s * std::log(acc);
}

std::vector<Vec> DomainSequence::boundary_samples(int j, int m) const {
  std::vector<Vec> out;
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * kPi * i / m;
    Vec d(2);
    d << std::cos(a), std::sin(a);
    double lo = 0.0, hi = 2.5;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (level(j, center_ + mid * d) < 0.0 ? lo : hi) = mid;
    }
    out.push_back(center_ + 0.5 * (lo + hi) * d);
  }
  return out;
}

double DomainSequence::min_boundary_curvature(int j, int m) const {
  const double h = 1e-4;
  auto L = [&](double x, double y) {
    Vec v(2);
    v << x, y;
    return level(j, v);
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : boundary_samples(j, m)) {
    const double x = p[0], y = p[1];
    const double fx = (L(x + h, y) - L(x - h, y)) / (2 * h);
    const double fy = (L(x, y + h) - L(x, y - h)) / (2 * h);
    const double fxx = (L(x + h, y) - 2 * L(x, y) + L(x - h, y)) / (h * h);
    const double fyy = (L(x, y + h) - 2 * L(x, y) + L(x, y - h)) / (h * h);
    const double fxy = (L(x + h, y + h) - L(x + h, y - h) - L(x - h, y + h) + L(x - h, y - h)) / (4 * h * h);
    const double g = std::hypot(fx, fy);
    best = std::min(best, (fxx * fy * fy - 2 * fxy * fx * fy + fyy * fx * fx) / (g * g * g));
  }
  return best;
}

double DomainSequence::nesting_margin(int j, int m) const {
  if (j < 2 || j > J_) throw DomainError("nesting needs 2 <= j <= J");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : boundary_samples(j - 1, m)) best = std::min(best, -level(j, p));
  return best;
}

std::vector<Vec> DomainSequence::lattice(int j, double h) const {
  std::vector<Vec> out;
  const int m = static_cast<int>(std::floor(1.0 / h));
  for (int iy = -m; iy <= m; ++iy)
    for (int ix = -m; ix <= m; ++ix) {
      Vec xi(2);
      xi << ix * h, iy * h;
      if (contains(j, xi)) out.push_back(xi);
    }
  return out;
}

DomainSequence build_domains(const HullDomain& D, int J, const DomainParams& p) { return DomainSequence(D, J, p); }

Vec DiscreteSolution::node(int ix, int iy) const {
  Vec v(2);
  v << origin[0] + ix * h, origin[1] + iy * h;
  return v;
}

Vec DiscreteSolution::gradient(int ix, int iy) const {
  Vec g(2);
  g << (u[index(ix + 1, iy)] - u[index(ix - 1, iy)]) / (2 * h), (u[index(ix, iy + 1)] - u[index(ix, iy - 1)]) / (2 * h);
  return g;
}

Mat DiscreteSolution::hessian(int ix, int iy) const {
  const double c = u[index(ix, iy)];
  Mat H(2, 2);
  H(0, 0) = (u[index(ix + 1, iy)] - 2 * c + u[index(ix - 1, iy)]) / (h * h);
  H(1, 1) = (u[index(ix, iy + 1)] - 2 * c + u[index(ix, iy - 1)]) / (h * h);
  H(0, 1) = H(1, 0) = (u[index(ix + 1, iy + 1)] - u[index(ix - 1, iy + 1)] - u[index(ix + 1, iy - 1)] +
                       u[index(ix - 1, iy - 1)]) / (4 * h * h);
  return H;
}

bool DiscreteSolution::near_boundary(int ix, int iy) const {
  for (const auto& d : kNbr)
    if (kind[index(ix + d[0], iy + d[1])] == NodeKind::Ghost) return true;
  return false;
}

std::function<double(const Vec&)> boundary_data(const MoreauField& g) {
  return [&g](const Vec& xi) { return g.eval(xi).value; };
}

double dual_residual(const Vec& xi, const Mat& H, int k) { return residual_parts(xi, H, k).r; }

DiscreteSolution solve_dirichlet(const DomainSequence& dom, int j, const std::function<double(const Vec&)>& phi,
                                 int k, const SolveOptions& opt, const std::function<double(const Vec&)>& init) {
  if (j < 1 || j > dom.count()) throw DomainError("domain index out of range");
  if (k != 1 && k != 2) throw DomainError("dirichlet2d supports k = 1 and k = 2");
  DiscreteSolution s;
  s.j = j;
  s.k = k;
  s.h = opt.h;
  const auto bnd = dom.boundary_samples(j, 720);
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (const auto& p : bnd)
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  s.origin = Vec(2);
  for (int i = 0; i < 2; ++i) s.origin[i] = (std::floor(lo[i] / s.h) - 3) * s.h;
  s.nx = static_cast<int>(std::ceil((hi[0] - s.origin[0]) / s.h)) + 4;
  s.ny = static_cast<int>(std::ceil((hi[1] - s.origin[1]) / s.h)) + 4;
  s.kind.assign(static_cast<std::size_t>(s.nx) * s.ny, NodeKind::Outside);
  s.u.assign(s.kind.size(), kNaN);
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix)
      if (dom.contains(j, s.node(ix, iy))) s.kind[s.index(ix, iy)] = NodeKind::Interior;
  std::vector<int> unknown(s.kind.size(), -1);
  std::vector<std::pair<int, int>> nodes;
  for (int iy = 1; iy + 1 < s.ny; ++iy)
    for (int ix = 1; ix + 1 < s.nx; ++ix) {
      if (s.kind[s.index(ix, iy)] != NodeKind::Interior) continue;
      unknown[s.index(ix, iy)] = static_cast<int>(nodes.size());
      nodes.emplace_back(ix, iy);
      for (const auto& d : kNbr) {
        NodeKind& nk = s.kind[s.index(ix + d[0], iy + d[1])];
        if (nk == NodeKind::Outside) nk = NodeKind::Ghost;
      }
    }
  if (nodes.empty()) throw DomainError("grid has no interior nodes");
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix) {
      const int id = s.index(ix, iy);
      if (s.kind[id] == NodeKind::Ghost || (s.kind[id] == NodeKind::Interior && !init))
        s.u[id] = phi(s.node(ix, iy));
      else if (s.kind[id] == NodeKind::Interior)
        s.u[id] = init(s.node(ix, iy));
    }

  const int N = static_cast<int>(nodes.size());
  auto residuals = [&](const std::vector<double>& u, Vec& R, bool& admissible) {
    DiscreteSolution view = s;
    view.u = u;
    admissible = true;
    for (int i = 0; i < N; ++i) {
      const auto [ix, iy] = nodes[i];
      const Mat H = view.hessian(ix, iy);
      admissible = admissible && positive_definite(H);
      R[i] = residual_parts(view.node(ix, iy), H, k).r;
    }
  };
  Vec R(N);
  bool adm = false;
  residuals(s.u, R, adm);
  const double h2 = s.h * s.h;
  for (int it = 0;; ++it) {
    s.residual = R.lpNorm<Eigen::Infinity>();
    s.residual_history.push_back(s.residual);
    if (!std::isfinite(s.residual)) throw NumericError("non-finite residual in the initial iterate");
    if (s.residual < opt.tol) break;
    if (it >= opt.max_iter) break;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(N) * 9);
    for (int i = 0; i < N; ++i) {
      const auto [ix, iy] = nodes[i];
      const ResidualParts rp = residual_parts(s.node(ix, iy), s.hessian(ix, iy), k);
      auto add = [&](int dx, int dy, double v) {
        const int col = unknown[s.index(ix + dx, iy + dy)];
        if (col >= 0) trip.emplace_back(i, col, v);
      };
      add(0, 0, -2.0 * (rp.d11 + rp.d22) / h2);
      add(1, 0, rp.d11 / h2);
      add(-1, 0, rp.d11 / h2);
      add(0, 1, rp.d22 / h2);
      add(0, -1, rp.d22 / h2);
      add(1, 1, rp.d12 / (4 * h2));
      add(-1, -1, rp.d12 / (4 * h2));
      add(-1, 1, -rp.d12 / (4 * h2));
      add(1, -1, -rp.d12 / (4 * h2));
    }
    Eigen::SparseMatrix<double> Jm(N, N);
    Jm.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Jm);
    if (lu.info() != Eigen::Success) throw NumericError("singular Newton matrix");
    const Vec delta = lu.solve(-R);
    const double r0 = R.norm();
    bool accepted = false;
    double t = 1.0;
    std::vector<double> trial = s.u;
    Vec Rt(N);
    for (int half = 0; half <= opt.max_halvings; ++half, t *= 0.5) {
      for (int i = 0; i < N; ++i) trial[s.index(nodes[i].first, nodes[i].second)] = s.u[s.index(nodes[i].first, nodes[i].second)] + t * delta[i];
      bool tadm = false;
      residuals(trial, Rt, tadm);
      // Once the iterate is convex it must stay convex.
      if ((tadm || !adm) && std::isfinite(Rt.norm()) && Rt.norm() <= (1.0 - 1e-4 * t) * r0) {
        accepted = true;
        adm = tadm;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "Newton stagnated; residual history:";
      for (double r : s.residual_history) os << ' ' << r;
      throw NumericError(os.str());
    }
    s.u = trial;
    R = Rt;
  }
  if (!adm) throw NumericError("discrete solution lost convexity");
  double mind = std::numeric_limits<double>::infinity(), mindiag = mind;
  for (const auto& [ix, iy] : nodes) {
    const double c = s.u[s.index(ix, iy)];
    auto v = [&](int dx, int dy) { return s.u[s.index(ix + dx, iy + dy)]; };
    mind = std::min({mind, (v(1, 0) - 2 * c + v(-1, 0)) / h2, (v(0, 1) - 2 * c + v(0, -1)) / h2});
    mindiag = std::min({mindiag, (v(1, 1) - 2 * c + v(-1, -1)) / (2 * h2), (v(1, -1) - 2 * c + v(-1, 1)) / (2 * h2)});
  }
  s.min_second_difference = mind;
  s.min_diagonal_difference = mindiag;
  return s;
}

std::vector<GraphSample> legendre_back(const DiscreteSolution& sol) {
  std::vector<GraphSample> out;
  for (int iy = 1; iy + 1 < sol.ny; ++iy)
    for (int ix = 1; ix + 1 < sol.nx; ++ix) {
      if (sol.kind[sol.index(ix, iy)] != NodeKind::Interior) continue;
      const Mat H = sol.hessian(ix, iy);
      if (!positive_definite(H)) throw DomainError("legendre_back needs a convex solution");
      GraphSample g;
      g.xi = sol.node(ix, iy);
      g.x = sol.gradient(ix, iy);
      g.u = g.xi.dot(g.x) - sol.u[sol.index(ix, iy)];
      g.slope = g.xi.norm();
      const CurvatureReport c = graph_curvatures(g.x, g.xi, H.inverse(), sol.k);
      g.sigma_residual = c.residual / c.target;
      g.ix = ix;
      g.iy = iy;
      out.push_back(g);
    }
  return out;
}

double biconjugation_error(const DiscreteSolution& sol, const std::vector<GraphSample>& samples) {
  double worst = 0.0;
  for (const auto& a : samples) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& b : samples) best = std::max(best, a.xi.dot(b.x) - b.u);
    worst = std::max(worst, std::abs(best - sol.u[sol.index(a.ix, a.iy)]));
  }
  return worst;
}

std::vector<ExhaustionRow> exhaustion_report(const std::vector<DiscreteSolution>& sols) {
  std::vector<ExhaustionRow> rows;
  for (const auto& s : sols) {
    ExhaustionRow r{s.j, std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int iy = 1; iy + 1 < s.ny; ++iy)
      for (int ix = 1; ix + 1 < s.nx; ++ix) {
        if (s.kind[s.index(ix, iy)] != NodeKind::Interior) continue;
        const double g = s.gradient(ix, iy).norm();
        r.x_radius = std::max(r.x_radius, g);
        if (!s.near_boundary(ix, iy)) continue;
        r.min_grad = std::min(r.min_grad, g);
        r.max_grad = std::max(r.max_grad, g);
      }
    rows.push_back(r);
  }
  return rows;
}

bool gradient_trend_ok(const std::vector<ExhaustionRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].min_grad < rows[i - 1].min_grad) return false;
  return true;
}

std::string solution_csv(const DiscreteSolution& sol) {
  std::ostringstream os;
  os.precision(17);
  os << "ix,iy,xi1,xi2,kind,u\r\n";
  for (int iy = 0; iy < sol.ny; ++iy)
    for (int ix = 0; ix < sol.nx; ++ix) {
      const int id = sol.index(ix, iy);
      if (sol.kind[id] == NodeKind::Outside) continue;
      const Vec p = sol.node(ix, iy);
      os << ix << ',' << iy << ',' << p[0] << ',' << p[1] << ',' << (sol.kind[id] == NodeKind::Interior ? "interior" : "ghost")
         << ',' << sol.u[id] << "\r\n";
    }
  return os.str();
}

std::string graph_obj(const DiscreteSolution& sol, const std::vector<GraphSample>& samples) {
  std::ostringstream os;
  os.precision(12);
  std::map<int, int> vid;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& g = samples[i];
    os << "v " << g.x[0] << ' ' << g.x[1] << ' ' << g.u << '\n';
    vid[sol.index(g.ix, g.iy)] = static_cast<int>(i) + 1;
  }
  for (const auto& g : samples) {
    auto at = [&](int dx, int dy) {
      const auto it = vid.find(sol.index(g.ix + dx, g.iy + dy));
      return it == vid.end() ? 0 : it->second;
    };
    const int a = at(0, 0), b = at(1, 0), c = at(1, 1), d = at(0, 1);
    if (a && b && c && d) os << "f " << a << ' ' << b << ' ' << c << "\nf " << a << ' ' << c << ' ' << d << '\n';
  }
  return os.str();
}

}  // namespace sigmak
