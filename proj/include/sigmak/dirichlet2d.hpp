#pragma once

#include "sigmak/common.hpp"
#include "sigmak/convex_dual.hpp"
#include "sigmak/sphere.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sigmak {

struct DomainParams {
  double offset = 0.5;     // inward offset 2^{-j} * offset
  double smoothing = 0.2;  // log-sum-exp scale 2^{-j} * smoothing
  double bulge = 0.25;     // chord edges curved by 2^{-j} * bulge
};

// Nested smooth strictly convex domains inside Conv(F), n = 2. Each is the
// sublevel set {level_j < 0} of a log-sum-exp of the offset constraints
// |xi| <= 1 and one chord half-plane per gap of F.
class DomainSequence {
 public:
  DomainSequence(const HullDomain& D, int J, DomainParams p = {});

  int count() const { return J_; }
  const DomainParams& params() const { return p_; }
  double level(int j, const Vec& xi) const;
  bool contains(int j, const Vec& xi) const { return level(j, xi) < 0.0; }
  // A point well inside every domain.
  const Vec& center() const { return center_; }
  // Boundary points found by bisection along m rays from center().
  std::vector<Vec> boundary_samples(int j, int m) const;
  // Smallest boundary curvature over m samples.
  double min_boundary_curvature(int j, int m) const;
  // min over boundary samples of domain j-1 of -level_j (positive when nested).
  double nesting_margin(int j, int m) const;
  // Lattice points of spacing h inside domain j.
  std::vector<Vec> lattice(int j, double h) const;

 private:
  struct Edge {
    Vec normal, tangent;
    double c;
  };
  int J_;
  DomainParams p_;
  std::vector<Edge> edges_;
  Vec center_;
};

DomainSequence build_domains(const HullDomain& D, int J, const DomainParams& p = {});

enum class NodeKind { Outside, Interior, Ghost };

struct DiscreteSolution {
  int j = 0, k = 0;
  double h = 0.0;
  Vec origin;  // lower-left node
  int nx = 0, ny = 0;
  std::vector<NodeKind> kind;  // row-major, index iy * nx + ix
  std::vector<double> u;       // values at interior and ghost nodes (NaN outside)
  std::vector<double> residual_history;
  double residual = 0.0;         // final max |residual|
  double min_second_difference = 0.0;   // along the axes
  double min_diagonal_difference = 0.0;  // along the two diagonals

  Vec node(int ix, int iy) const;
  int index(int ix, int iy) const { return iy * nx + ix; }
  // Central-difference gradient and 9-point Hessian at an interior node.
  Vec gradient(int ix, int iy) const;
  Mat hessian(int ix, int iy) const;
  bool near_boundary(int ix, int iy) const;
};

struct SolveOptions {
  double h = 1.0 / 24;
  double tol = 1e-10;
  int max_iter = 60;
  int max_halvings = 40;
};

// Residual of the dual equation at xi for a Hessian H: k = 2 uses
// (1 - |xi|^2)^2 det H - 1, k = 1 uses sigma_2(A) / sigma_1(A) - 1/2 with
// A = w* gamma* H gamma*.
double dual_residual(const Vec& xi, const Mat& H, int k);

// phi = g restricted to the ghost band of a grid.
std::function<double(const Vec&)> boundary_data(const MoreauField& g);

// Damped Newton for the dual Dirichlet problem on domain j with data phi on
// the ghost band; init gives the first iterate (phi when empty).
DiscreteSolution solve_dirichlet(const DomainSequence& dom, int j, const std::function<double(const Vec&)>& phi,
                                 int k, const SolveOptions& opt = {},
                                 const std::function<double(const Vec&)>& init = {});

struct GraphSample {
  Vec x;        // Du*(xi)
  double u;     // xi.x - u*(xi)
  Vec xi;
  double sigma_residual;  // |sigma_k(kappa) - binom(2, k)| / binom(2, k) of the reconstructed graph
  double slope;           // |Du| = |xi|
  int ix, iy;
};

// Discrete Legendre transform at interior nodes; DomainError if a Hessian is not
// positive definite.
std::vector<GraphSample> legendre_back(const DiscreteSolution& sol);

// max over interior nodes of |max_m (xi_i.x_m - u_m) - u*_i|.
double biconjugation_error(const DiscreteSolution& sol, const std::vector<GraphSample>& samples);

struct ExhaustionRow {
  int j;
  double min_grad, max_grad;  // |Du*| on near-boundary nodes
  double x_radius;            // largest |x| among reconstructed samples
};
std::vector<ExhaustionRow> exhaustion_report(const std::vector<DiscreteSolution>& sols);
bool gradient_trend_ok(const std::vector<ExhaustionRow>& rows);

std::string solution_csv(const DiscreteSolution& sol);
// Mesh of reconstructed graph over grid cells whose corners are all interior.
std::string graph_obj(const DiscreteSolution& sol, const std::vector<GraphSample>& samples);

}  // namespace sigmak
