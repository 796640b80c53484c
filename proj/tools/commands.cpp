#include "commands.hpp"

#include "sigmak/barriers.hpp"
#include "sigmak/convex_dual.hpp"
#include "sigmak/curvature.hpp"
#include "sigmak/dirichlet2d.hpp"
#include "sigmak/io.hpp"
#include "sigmak/perturbation.hpp"
#include "sigmak/profile.hpp"
#include "sigmak/semitrough.hpp"
#include "sigmak/sphere.hpp"
#include "sigmak/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

namespace sigmak::cli {

namespace {

using json = nlohmann::ordered_json;

json defaults() {
  return json::parse(R"({
    "n": 2,
    "k": 1,
    "seed": 1,
    "F": {"type": "half_sphere", "delta0": 0.3},
    "q": {"family": "zero"},
    "profile": {"y_max": 1000.0, "samples": 4096},
    "semitrough": {"extent": 4.0, "cells": 40, "radius": 10000.0, "directions": 50},
    "barriers": {"seeds": 2048, "super_seeds": 256, "directions": 100, "radii": [10.0, 100.0, 1000.0, 10000.0]},
    "calibrate": {"box": 1.0},
    "dual": {"seeds": 128, "restarts": 2, "gtol": 1e-8},
    "legendre": {"source": "hyperboloid", "h": 0.1, "margin": 0.05},
    "moreau": {"source": "hyperboloid", "j": [1, 2, 4, 8], "h": 0.1},
    "dirichlet": {"source": "subsolution", "J": 3, "h": 0.125},
    "verify": {"only": []}
  })");
}

// Objects whose user value replaces the default wholesale (validated separately).
bool replaced_wholesale(const std::string& key) { return key == "F" || key == "q"; }

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return !(a.is_number_integer() && b.is_number_float());
  return a.type() == b.type();
}

void merge(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path + " must be an object");
  for (const auto& [key, val] : user.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown setting " + where);
    json& slot = base[key];
    if (path.empty() && replaced_wholesale(key)) {
      if (!val.is_object()) throw ConfigError(where + " must be an object");
      slot = val;
    } else if (slot.is_object()) {
      merge(slot, val, where);
    } else {
      if (!same_kind(slot, val)) throw ConfigError(where + " has the wrong type");
      slot = val;
    }
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

Vec vec_of(const json& j, const char* key, int n, const std::string& where) {
  const auto v = get<std::vector<double>>(j, key, where);
  if (static_cast<int>(v.size()) != n) throw ConfigError(where + "." + key + " must have " + std::to_string(n) + " entries");
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = v[i];
  return out;
}

struct Run {
  json cfg;
  std::string out;
  int n = 2, k = 1;
  std::uint64_t seed = 1;
  std::string command;

  std::string path(const std::string& name) const { return out + "/" + name; }
  void write(const std::string& name, const std::string& content) const {
    write_file(path(name), content);
    std::printf("wrote %s\n", path(name).c_str());
  }
};

LightlikeSet make_F(const Run& r) {
  const json& F = r.cfg["F"];
  // The plain set form {"n", "delta0", "caps"} needs no type.
  const std::string type = F.contains("type") || !F.contains("caps") ? get<std::string>(F, "type", "F") : "caps";
  if (F.contains("n") && get<int>(F, "n", "F") != r.n) throw ConfigError("F.n differs from n");
  const double delta0 = F.contains("delta0") ? get<double>(F, "delta0", "F") : 0.3;
  try {
    if (type == "half_sphere") return half_sphere(r.n, delta0);
    if (type == "caps") {
      std::vector<GeodesicCap> caps;
      if (!F.contains("caps") || !F["caps"].is_array() || F["caps"].empty()) throw ConfigError("F.caps must be a non-empty list");
      for (const auto& c : F["caps"]) {
        const Vec center = vec_of(c, "center", r.n, "F.caps[]");
        caps.emplace_back(Direction::normalized(center), get<double>(c, "radius", "F.caps[]"));
      }
      return LightlikeSet(r.n, delta0, caps);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid F: ") + e.what());
  }
  throw ConfigError("F.type must be half_sphere or caps");
}

Perturbation make_q(const Run& r, const LightlikeSet& F) {
  const json& q = r.cfg["q"];
  const std::string fam = get<std::string>(q, "family", "q");
  if (fam == "zero") return Perturbation::zero(F);
  if (fam != "cap_bump" && fam != "cosine_cap") throw ConfigError("q.family must be zero, cap_bump or cosine_cap");
  const Vec center = vec_of(q, "center", r.n, "q");
  const double radius = get<double>(q, "radius", "q"), c = get<double>(q, "c", "q");
  try {
    Perturbation P = fam == "cap_bump" ? Perturbation::cap_bump(F, center.normalized(), radius, c)
                                       : Perturbation::cosine_cap(F, center.normalized(), radius, c);
    EstimateOptions eo;
    eo.seed = r.seed;
    const PerturbationConstants k = estimate_constants(P, eo);
    P.set_constants(k);
    P.set_M(choose_M(k));
    return P;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid q: ") + e.what());
  }
}

ProfileSolution make_profile(const Run& r, int k) {
  const json& p = r.cfg["profile"];
  return solve_profile(ProfileParams::make(r.n, k), p["y_max"].get<double>(), p["samples"].get<int>());
}

void validate(const Run& r) {
  if (r.n < 2 || r.n > 4) throw ConfigError("n must lie in [2, 4]");
  if (r.k < 1 || r.k > r.n) throw ConfigError("k must lie in [1, n]");
  const json& p = r.cfg["profile"];
  if (p["y_max"].get<double>() < 10.0) throw ConfigError("profile.y_max must be at least 10");
  if (p["samples"].get<int>() < 100) throw ConfigError("profile.samples must be at least 100");
  for (const char* sec : {"legendre", "moreau", "dirichlet"}) {
    const std::string s = r.cfg[sec]["source"].get<std::string>();
    if (s != "hyperboloid" && s != "subsolution" && s != "supersolution")
      throw ConfigError(std::string(sec) + ".source must be hyperboloid, subsolution or supersolution");
    if (!(r.cfg[sec]["h"].get<double>() > 0.0)) throw ConfigError(std::string(sec) + ".h must be positive");
  }
  if (r.cfg["dirichlet"]["J"].get<int>() < 1) throw ConfigError("dirichlet.J must be at least 1");
  if (r.cfg["barriers"]["directions"].get<int>() < 1) throw ConfigError("barriers.directions must be positive");
  for (const auto& j : r.cfg["moreau"]["j"])
    if (!j.is_number_integer() || j.get<int>() < 1) throw ConfigError("moreau.j entries must be positive integers");
  make_F(r);
}

std::string pass(bool ok) { return ok ? "pass" : "fail"; }

std::string row(std::initializer_list<std::string> f) { return csv_row(std::vector<std::string>(f)); }

int cmd_profile(const Run& r) {
  const ProfileSolution s = make_profile(r, r.k);
  r.write("profile.csv", profile_csv(s));
  const double l = s.params().l;
  double fi = 0.0;
  for (std::size_t i = 0; i < s.table_t().size(); ++i) fi = std::max(fi, s.first_integral_residual(i));
  const double e40 = std::abs(s.eval(-40.0).f - l);
  const double g10 = asymptotic_gap(s, 10.0), g100 = asymptotic_gap(s, 100.0);
  const double slope = std::log(g100 / g10) / std::log(10.0);
  int bad = 0;
  const auto ys = s.table_y();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double t = s.table_t()[i];
    const bool upper = t > 1.0 ? asymptotic_gap(s, t) > 0.0 : ys[i] < std::sqrt(1.0 + t * t);
    if (!(ys[i] > std::max(l, t)) || !upper) ++bad;
  }
  std::string csv = row({"check", "value", "bound", "status"});
  csv += row({"first_integral_residual", format_double(fi), "1e-10", pass(fi <= 1e-10)});
  csv += row({"|f(-40) - l|", format_double(e40), "1e-06", pass(e40 < 1e-6)});
  csv += row({"nodes_outside_bounds", std::to_string(bad), "0", pass(bad == 0)});
  csv += row({"tail_log_slope", format_double(slope), format_double(-(r.n + 1)) + " +- 0.5", pass(std::abs(slope + r.n + 1) <= 0.5)});
  r.write("profile_checks.csv", csv);
  const bool ok = fi <= 1e-10 && bad == 0 && std::abs(slope + r.n + 1) <= 0.5;
  std::printf("l = %.17g, |f(-40) - l| = %.3g, first-integral residual %.3g, tail slope %.3f\n", l, e40, fi, slope);
  // f(-40) is reported but not counted when l = 0 (algebraic approach, see README).
  return ok && (e40 < 1e-6 || l == 0.0) ? kOk : kViolations;
}

int cmd_semitrough(const Run& r) {
  const ProfileSolution s = make_profile(r, r.k);
  const json& c = r.cfg["semitrough"];
  const double ext = c["extent"].get<double>();
  const int m = c["cells"].get<int>();
  std::ostringstream obj;
  obj.precision(12);
  obj << "# standard semitrough over [-" << ext << ", " << ext << "]^2, remaining coordinates 0\n";
  for (int iy = 0; iy <= m; ++iy)
    for (int ix = 0; ix <= m; ++ix) {
      Vec x = Vec::Zero(r.n);
      x[0] = -ext + 2 * ext * ix / m;
      x[1] = -ext + 2 * ext * iy / m;
      obj << "v " << x[0] << ' ' << x[1] << ' ' << eval_standard(s, x).value << '\n';
    }
  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix < m; ++ix) {
      const int a = iy * (m + 1) + ix + 1, b = a + 1, d = a + m + 1, e = d + 1;
      obj << "f " << a << ' ' << b << ' ' << e << "\nf " << a << ' ' << e << ' ' << d << '\n';
    }
  r.write("semitrough.obj", obj.str());

  std::vector<std::string> head{"cap_radius"};
  for (int i = 0; i < r.n; ++i) head.push_back("theta" + std::to_string(i + 1));
  for (const char* h : {"measured", "predicted", "limit", "perpendicular"}) head.emplace_back(h);
  std::string csv = csv_row(head);
  const double rad = c["radius"].get<double>();
  double worst = 0.0;
  for (double cap : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const Semitrough st(s, GeodesicCap(Direction(unit_vector(r.n, 0)), cap));
    for (const Vec& d : sphere_points(r.n, c["directions"].get<int>())) {
      const LimitGap g = limit_gap(st, Direction::normalized(d), rad);
      worst = std::max(worst, std::abs(g.measured - g.predicted));
      std::vector<std::string> f{format_double(cap)};
      for (int i = 0; i < r.n; ++i) f.push_back(format_double(d[i]));
      for (double v : {g.measured, g.predicted, g.limit}) f.push_back(format_double(v));
      f.push_back(g.perpendicular ? "1" : "0");
      csv += csv_row(f);
    }
  }
  r.write("limit_gaps.csv", csv);
  std::printf("max |measured - predicted| at r = %g: %.3g\n", rad, worst);
  return worst <= 1e-2 ? kOk : kViolations;
}

BarrierSettings barrier_settings(const Run& r, bool dual) {
  BarrierSettings s;
  const json& b = r.cfg["barriers"];
  s.seeds = b["seeds"].get<int>();
  s.super_seeds = b["super_seeds"].get<int>();
  if (dual) {
    s.seeds = r.cfg["dual"]["seeds"].get<int>();
    s.search.restarts = r.cfg["dual"]["restarts"].get<int>();
  }
  return s;
}

std::vector<Vec> sample_dirs(int n, int count, std::uint64_t seed) {
  std::vector<Vec> out;
  std::uint64_t state = seed;
  for (int i = 0; i < count; ++i) out.push_back(random_unit(n, state));
  return out;
}

int cmd_barriers(const Run& r) {
  const ProfileSolution s = make_profile(r, r.k);
  const LightlikeSet F = make_F(r);
  const BarrierField B(s, make_q(r, F), barrier_settings(r, false));
  auto dirs = sample_dirs(r.n, r.cfg["barriers"]["directions"].get<int>(), r.seed);
  for (const auto& d : perpendicular_directions(HullDomain(F))) dirs.push_back(d.coords());
  const auto rows = ordering_report(B, dirs, r.cfg["barriers"]["radii"].get<std::vector<double>>());
  r.write("ordering.csv", ordering_csv(rows));
  int bad = 0;
  for (const auto& row : rows)
    if (!row.violations.empty()) ++bad;
  std::printf("M = %g, delta = %g, %zu rows, %d with violations, max ordering violation %.3g\n", B.M(), B.delta(), rows.size(),
              bad, max_ordering_violation(rows));
  return bad == 0 ? kOk : kViolations;
}

int cmd_calibrate(const Run& r) {
  const ProfileSolution s = make_profile(r, r.k);
  const LightlikeSet F = make_F(r);
  BarrierField B(s, make_q(r, F), barrier_settings(r, false));
  const double b = r.cfg["calibrate"]["box"].get<double>();
  CalibrationOptions opt;
  opt.seed = r.seed;
  const CalibrationReport rep = calibrate_cutoff(B, Box{-b * Vec::Ones(r.n), b * Vec::Ones(r.n)}, opt);
  const auto& c = rep.constants;
  json j{{"lambda", c.lambda}, {"M1", c.M1}, {"R0", c.R0}, {"R1", c.R1}, {"c0", c.c0},
         {"min_super_margin", rep.min_super_margin}, {"max_lipschitz", rep.max_lipschitz}, {"candidates", rep.candidates}};
  r.write("cutoff.json", j.dump(2) + "\n");
  std::printf("lambda %g, M1 %g, R0 %g, R1 %g, c0 %g\n", c.lambda, c.M1, c.R0, c.R1, c.c0);
  return kOk;
}

// Owns whatever the source function refers to.
struct DualSetup {
  std::unique_ptr<ProfileSolution> profile;
  std::unique_ptr<BarrierField> barrier;
  std::unique_ptr<DualField> dual;
};

DualSetup make_dual(const Run& r, const std::string& source) {
  DualSetup d;
  DualOptions opt;
  if (source == "hyperboloid") {
    const LightlikeSet S(r.n, 0.3, {GeodesicCap(Direction(unit_vector(r.n, 0)), kPi / 2),
                                   GeodesicCap(Direction(-unit_vector(r.n, 0)), kPi / 2)});
    d.dual = std::make_unique<DualField>(
        [](const Vec& x) {
          ValueGrad v;
          v.value = std::sqrt(1.0 + x.squaredNorm());
          v.grad = x / v.value;
          return v;
        },
        HullDomain(S), opt);
    return d;
  }
  d.profile = std::make_unique<ProfileSolution>(make_profile(r, r.k));
  const LightlikeSet F = make_F(r);
  d.barrier = std::make_unique<BarrierField>(*d.profile, make_q(r, F), barrier_settings(r, true));
  opt.gtol = r.cfg["dual"]["gtol"].get<double>();
  const BarrierField* B = d.barrier.get();
  ConvexSource u = source == "subsolution" ? ConvexSource([B](const Vec& x) { return B->subsolution_grad(x); })
                                           : ConvexSource([B](const Vec& x) { return B->supersolution_grad(x); });
  d.dual = std::make_unique<DualField>(u, HullDomain(F), opt);
  return d;
}

int cmd_legendre(const Run& r) {
  const json& c = r.cfg["legendre"];
  const DualSetup d = make_dual(r, c["source"].get<std::string>());
  const auto grid = hull_grid(d.dual->domain(), c["margin"].get<double>(), c["h"].get<double>());
  std::vector<std::string> head;
  for (int i = 0; i < r.n; ++i) head.push_back("xi" + std::to_string(i + 1));
  head.emplace_back("ustar");
  for (int i = 0; i < r.n; ++i) head.push_back("x" + std::to_string(i + 1));
  head.emplace_back("converged");
  std::string csv = csv_row(head);
  int unconverged = 0;
  for (const Vec& xi : grid) {
    const LegendreResult L = d.dual->legendre(xi);
    std::vector<std::string> f;
    for (int i = 0; i < r.n; ++i) f.push_back(format_double(xi[i]));
    f.push_back(format_double(L.value));
    for (int i = 0; i < r.n; ++i) f.push_back(format_double(L.x0[i]));
    f.push_back(L.converged ? "1" : "0");
    if (!L.converged) ++unconverged;
    csv += csv_row(f);
  }
  r.write("legendre.csv", csv);
  std::printf("%zu grid points, %d unconverged\n", grid.size(), unconverged);
  return unconverged == 0 ? kOk : kViolations;
}

int cmd_moreau(const Run& r) {
  const json& c = r.cfg["moreau"];
  const DualSetup d = make_dual(r, c["source"].get<std::string>());
  std::string csv = row({"j", "eps", "min_gap", "max_gap", "max_grad_gap", "max_operator_excess", "tried", "critical_points",
                         "points", "status"});
  bool ok = true;
  for (int j : c["j"].get<std::vector<int>>()) {
    const auto grid = hull_grid(d.dual->domain(), 0.5 / (j + 1), c["h"].get<double>());
    const EpsilonSelection s = select_epsilon(*d.dual, j, r.k, grid);
    const bool pj = s.min_gap >= 0.0 && s.max_gap < 1.0 / j && s.max_grad_gap < 1.0 / j && s.max_operator_excess <= 1e-8;
    ok = ok && pj;
    csv += csv_row({std::to_string(j), format_double(s.eps), format_double(s.min_gap), format_double(s.max_gap),
                    format_double(s.max_grad_gap), format_double(s.max_operator_excess), std::to_string(s.tried),
                    std::to_string(s.critical_points), std::to_string(grid.size()), pass(pj)});
    std::printf("j = %d: eps %g, gap [%.3g, %.3g], |Dg - Du*| %.3g\n", j, s.eps, s.min_gap, s.max_gap, s.max_grad_gap);
  }
  r.write("moreau.csv", csv);
  return ok ? kOk : kViolations;
}

int cmd_dirichlet(const Run& r) {
  if (r.n != 2) throw ConfigError("dirichlet needs n = 2");
  if (r.k > 2) throw ConfigError("dirichlet needs k = 1 or 2");
  const json& c = r.cfg["dirichlet"];
  const std::string source = c["source"].get<std::string>();
  const int J = c["J"].get<int>();
  SolveOptions so;
  so.h = c["h"].get<double>();
  const DualSetup d = make_dual(r, source);
  const DomainSequence ds(d.dual->domain(), J);
  std::vector<DiscreteSolution> sols;
  json log = json::array();
  bool ok = true;
  for (int j = 1; j <= J; ++j) {
    std::function<double(const Vec&)> phi;
    std::unique_ptr<MoreauField> M;
    double eps = 0.0;
    if (source == "hyperboloid") {
      phi = [](const Vec& xi) { return -std::sqrt(1.0 - xi.squaredNorm()); };
    } else {
      eps = select_epsilon(*d.dual, j, r.k, hull_grid(d.dual->domain(), 0.5 / (j + 1), 0.25)).eps;
      M = std::make_unique<MoreauField>(*d.dual, eps, j);
      phi = boundary_data(*M);
    }
    sols.push_back(solve_dirichlet(ds, j, phi, r.k, so));
    const DiscreteSolution& s = sols.back();
    const auto samples = legendre_back(s);
    double sr = 0.0, slope = 0.0;
    for (const auto& q : samples) {
      sr = std::max(sr, q.sigma_residual);
      slope = std::max(slope, q.slope);
    }
    ok = ok && sr < 1e-3 && slope < 1.0;
    r.write("solution_j" + std::to_string(j) + ".csv", solution_csv(s));
    r.write("graph_j" + std::to_string(j) + ".obj", graph_obj(s, samples));
    log.push_back({{"j", j}, {"eps", eps}, {"residuals", s.residual_history}, {"sigma_residual", sr}, {"max_slope", slope},
                   {"min_axis_second_difference", s.min_second_difference},
                   {"min_diagonal_second_difference", s.min_diagonal_difference}});
    std::printf("j = %d: Newton residual %.3g after %zu steps, sigma residual %.3g, max |Du| %.3f\n", j, s.residual,
                s.residual_history.size() - 1, sr, slope);
  }
  const auto rows = exhaustion_report(sols);
  std::string csv = row({"j", "min_grad", "max_grad", "x_radius"});
  json stats = json::array();
  for (const auto& e : rows) {
    csv += csv_row({std::to_string(e.j), format_double(e.min_grad), format_double(e.max_grad), format_double(e.x_radius)});
    stats.push_back({{"j", e.j}, {"min_grad", e.min_grad}, {"max_grad", e.max_grad}});
  }
  r.write("exhaustion.csv", csv);
  const bool trend = gradient_trend_ok(rows);
  r.write("convergence.json", json{{"solves", log}, {"boundary_gradient", stats}, {"trend_ok", trend}}.dump(2) + "\n");
  return ok && (J < 2 || trend) ? kOk : kViolations;
}

int cmd_verify(const Run& r, const Overrides& o) {
  VerifyOptions vo;
  vo.seed = r.seed;
  vo.only = o.only.empty() ? r.cfg["verify"]["only"].get<std::vector<int>>() : o.only;
  for (int id : vo.only)
    if (id < 1 || id > kCriterionCount) throw ConfigError("no criterion " + std::to_string(id));
  vo.log = [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
  const auto results = run_criteria(vo);
  json out = json::array();
  bool fail = false;
  for (const auto& c : results) {
    std::printf("%s criterion %d: %s (%.1f s)\n", status_name(c.status), c.id, c.title.c_str(), c.seconds);
    json checks = json::array();
    for (const auto& k : c.checks)
      checks.push_back({{"name", k.name}, {"ok", k.ok}, {"unattainable", k.unattainable}, {"detail", k.detail}});
    out.push_back({{"id", c.id}, {"title", c.title}, {"status", status_name(c.status)}, {"seconds", c.seconds}, {"checks", checks}});
    fail = fail || c.status == Status::Fail;
  }
  r.write("verify.json", out.dump(2) + "\n");
  return fail ? kViolations : kOk;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const CalibrationError*>(&e)) return "calibration";
  if (dynamic_cast<const OutsideConeError*>(&e)) return "outside_cone";
  if (dynamic_cast<const ConditioningError*>(&e)) return "conditioning";
  if (dynamic_cast<const InfeasibleError*>(&e)) return "infeasible";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const StateError*>(&e)) return "state";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  return "runtime";
}

}  // namespace

int run(const std::string& command, const Overrides& o) {
  Run r;
  r.command = command;
  r.out = o.out_dir;
  try {
    r.cfg = defaults();
    if (!o.config_path.empty()) {
      json user;
      try {
        user = json::parse(read_file(o.config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
      }
      merge(r.cfg, user, "");
    }
    if (o.n) r.cfg["n"] = *o.n;
    if (o.k) r.cfg["k"] = *o.k;
    if (o.seed) r.cfg["seed"] = *o.seed;
    if (o.J) r.cfg["dirichlet"]["J"] = *o.J;
    if (o.h) r.cfg[command == "dirichlet" ? "dirichlet" : command]["h"] = *o.h;
    if (o.source) r.cfg[command]["source"] = *o.source;
    r.n = r.cfg["n"].get<int>();
    r.k = r.cfg["k"].get<int>();
    r.seed = r.cfg["seed"].get<std::uint64_t>();
    validate(r);
    write_file(r.path("config.json"), r.cfg.dump(2) + "\n");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const IoError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  }

  try {
    if (command == "profile") return cmd_profile(r);
    if (command == "semitrough") return cmd_semitrough(r);
    if (command == "barriers") return cmd_barriers(r);
    if (command == "calibrate") return cmd_calibrate(r);
    if (command == "legendre") return cmd_legendre(r);
    if (command == "moreau") return cmd_moreau(r);
    if (command == "dirichlet") return cmd_dirichlet(r);
    if (command == "verify-all") return cmd_verify(r, o);
    std::fprintf(stderr, "unknown command %s\n", command.c_str());
    return kConfigError;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    const json diag{{"command", command}, {"error", error_kind(e)}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", diag.dump(2).c_str());
    try {
      write_file(r.path("diagnostic.json"), diag.dump(2) + "\n");
    } catch (const IoError&) {
    }
    return kNumericError;
  }
}

}  // namespace sigmak::cli
