#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hitchin/bundle.hpp"

namespace hitchin::solver {

struct SolverConfig {
  double tol = 1e-8;          // sup-norm of the frame residual
  double damping = 1.0;       // initial Newton step length
  int max_iter = 50;
  std::vector<double> schedule = radius_schedule();
  double obs_radius = 0.25;
  int obs_rings = 16;
  double exhaust_tol = 1e-3;  // declared convergence threshold for d_m
  bool compat = false;        // project iterates onto the kappa-fixed locus of S
  Mat S;                      // pairing used when compat is set (antidiagonal if empty)
  bool det_normalize = true;  // re-project det H = 1 after each step
  bool deterministic = true;
  int nr = 32, nt = 64;
  double grading = 0.5;

  // r_m = 1 - 2^{-m}(1 - r0), m = first..first+stages-1.
  static std::vector<double> radius_schedule(double r0 = 0.5, int stages = 6, int first = 0);
};

struct SolveReport {
  double residual = 0.0;   // recomputed from the returned field (symmetric part in compat mode)
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
  double det_drift = 0.0;
  double compat_defect = 0.0;
  // compat mode only: the part of the residual the compatible locus cannot absorb (O(h^2))
  double asym_residual = 0.0;
  std::string message;
};

using BoundaryFn = std::function<Mat(cplx)>;

// Frame residual G^{-1}(F + [theta, theta^*]) at every node (zero on the boundary ring).
// Discretization: the Laplacian part uses the Riemannian logarithm
// Log_G(G') = G^{1/2} log(G^{-1/2} G' G^{-1/2}) G^{1/2} on each stencil edge, so it is
// exactly the scalar Laplacian of log H for commuting (diagonal) fields, plus the
// centred curl term -(i/4)(G_y G^{-1} G_x - G_x G^{-1} G_y).
std::vector<Mat> hitchin_residual(const MetricField& H, const HiggsField& A);
double sup_norm(const std::vector<Mat>& field);

// Dirichlet problem: boundary ring fixed to `boundary`, interior started from `initial`
// (or from `boundary` when empty).
std::pair<MetricField, SolveReport> solve_dirichlet(const HiggsField& A, const BoundaryFn& boundary,
                                                    GridPtr grid, const SolverConfig& cfg,
                                                    const MetricField* initial = nullptr);

// Scalar Toda system 1/4 Lap w_k = |gamma_k|^2 exp(2 w_k - w_{k-1} - w_{k+1}), w_0 = w_n = 0.
struct TodaSolution {
  GridPtr grid;
  std::vector<std::vector<double>> w;  // w[k-1][node], k = 1..n-1
  SolveReport report;
};
using TodaBoundaryFn = std::function<std::vector<double>(cplx)>;
// Called with (iteration, w) before every Newton step and once at the end.
using TodaObserver = std::function<void(int, const std::vector<std::vector<double>>&)>;
TodaSolution solve_toda_chain(const std::vector<Poly>& gamma, const TodaBoundaryFn& w_boundary,
                              GridPtr grid, const SolverConfig& cfg,
                              const std::vector<std::vector<double>>* initial = nullptr,
                              const TodaObserver& observer = {});
// Adds the link `wrap` from e_{n-1} to e_0 (the cyclic field with Q_n = wrap).
TodaSolution solve_toda_cyclic(const std::vector<Poly>& gamma, const Poly& wrap, const TodaBoundaryFn& w_boundary,
                               GridPtr grid, const SolverConfig& cfg,
                               const std::vector<std::vector<double>>* initial = nullptr,
                               const TodaObserver& observer = {});
// Diagonal metric h_k = exp(-(w_k - w_{k-1})).
MetricField toda_to_metric(const TodaSolution& t);
// w_k = -log(Delta_k(G)).
std::vector<double> metric_to_toda(const Mat& G);
std::vector<double> toda_residual(const TodaSolution& t, const std::vector<Poly>& gamma, const Poly* wrap = nullptr);

// Observation disk |z| <= obs_radius: the centre plus `rings` circles of `nt` points each.
struct ObsGrid {
  double radius = 0.25;
  int rings = 16, nt = 64;
  std::vector<cplx> points;
  static ObsGrid make(double radius, int rings, int nt);
};
std::vector<Mat> restrict_to(const MetricField& H, const ObsGrid& obs);
// sup |s(H1, H2) - id|_{H1} over paired samples.
double sup_distance(const std::vector<Mat>& H1, const std::vector<Mat>& H2);

struct ExhaustResult {
  ObsGrid obs;
  std::vector<Mat> field;         // last stage on the observation disk
  std::vector<double> radii;
  std::vector<std::vector<Mat>> stage_fields;  // every stage on the observation disk
  std::vector<double> d;          // d_m between consecutive stages
  std::vector<SolveReport> stages;
  MetricField last;               // last stage on its own grid
  bool converged = false;         // last d_m below cfg.tol
  bool all_stages_converged = false;
  std::string message;
};
// Boundary data defaults to h_X when `boundary` is empty.
ExhaustResult exhaust(const HiggsField& A, const BoundaryFn& boundary, const SolverConfig& cfg);

struct EnergyStats {
  std::vector<double> e;  // 2n |theta|^2_{h, g_X}
  double inf = 0.0, sup = 0.0;
};
EnergyStats energy_density(const MetricField& H, const HiggsField& A);

struct UniquenessResult {
  double distance = 0.0;               // at the last stage
  double limit_distance = 0.0;         // extrapolated to R -> 1 from the last three stages
  std::vector<double> stage_distance;  // per schedule radius
  ExhaustResult a, b;
};
UniquenessResult uniqueness_probe(const HiggsField& A, const BoundaryFn& boundary_a, const BoundaryFn& boundary_b,
                                  const SolverConfig& cfg);

struct SubharmonicityReport {
  bool ok = true;
  double min_lap_tr = 0.0, min_lap_logtr = 0.0;
  std::vector<int> violations;
};
SubharmonicityReport subharmonicity_check(const MetricField& H1, const MetricField& H2, double tol);

struct MaxPrincipleReport {
  bool holds = true;
  bool cooperative = true, fully_coupled = true, supersolution = true, subsolution = true, conclusion = true;
  int witness_node = -1;
  int witness_component = -1;
  std::string failure;
};
// System (1/2) Lap_{g_X} u_k + sum_{j != k} c_{kj}(u_j - u_k) >= 0 with tridiagonal coupling
// c_k = c_{k,k-1} = c_{k,k+1} (the domination system), plus the conclusion sup u <= sup_boundary u.
MaxPrincipleReport maximum_principle_check(const std::vector<std::vector<double>>& u,
                                           const std::vector<std::vector<double>>& c, const Grid& grid,
                                           double tol);

// Margins v_k and coupling c_k of the domination system against a diagonal reference h_ref
// with graded links gamma_k.
struct DominationSystem {
  std::vector<std::vector<double>> v, c;
};
DominationSystem domination_system(const MetricField& H, const MetricField& H_ref, const std::vector<Poly>& gamma);

struct FirstMinorProbe {
  double b = 0.0, sup_s = 0.0, sup_s_inv = 0.0;
};
FirstMinorProbe first_minor_domination_probe(const MetricField& H);

}  // namespace hitchin::solver
