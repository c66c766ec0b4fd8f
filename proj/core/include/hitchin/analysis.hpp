#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hitchin/solver.hpp"

// Potential theory on the unit disk in the Euclidean convention |dz|^2 = 2.
namespace hitchin::analysis {

// log|(1 - conj(z) xi) / (z - xi)|; +infinity when z == xi.
double green(cplx z, cplx xi);

// (1/2pi) int_0^{2pi} log|z - r e^{it}| dt by tanh-sinh quadrature started at arg z, so the
// only possible singularity sits at the endpoints.
double mean_log_circle(cplx z, double r, double* error_estimate = nullptr);

enum class FormTag { power_p, abs_poly_sq, custom };

struct DiskFunction {
  FormTag tag = FormTag::custom;
  double p = 0.0;                        // power_p: (1 - |z|^2)^p
  Poly alpha;                            // abs_poly_sq: |alpha(z)|^2
  std::function<double(cplx)> custom;
  bool radial = false;                   // custom evaluators depending on |z| only

  double operator()(cplx z) const;
  static DiskFunction power(double p);
  static DiskFunction abs_poly_sq(Poly alpha);
  static DiskFunction from(std::function<double(cplx)> f, bool radial = false);
};

enum class Verdict { in_Ab, in_A_not_Ab_evidence, not_in_A_evidence, inconclusive };
const char* to_string(Verdict v);

struct ClassReport {
  Verdict verdict = Verdict::inconclusive;
  bool exact = false;                  // decided by a closed-form rule
  std::vector<double> levels;          // truncation radii rho_m = 1 - 2^{-m}
  std::vector<double> mass;            // int_{|xi|<rho_m} f (1 - |xi|^2)
  std::vector<double> potential;       // max over the z-sample of int_{|xi|<rho_m} G(z, xi) f(xi)
  std::string note;
};

struct ClassOptions {
  int levels = 12;
  std::vector<cplx> z_sample = {0.0, 0.5, 0.9, 0.99};
  double growth = 0.10;    // divergence: relative growth above this for `streak` levels
  int streak = 4;
  double leveling = 0.01;  // boundedness: extrapolated tail below this fraction of the value
};

ClassReport class_membership(const DiskFunction& f, const ClassOptions& opt = {});

// Classification of a sequence of truncated integrals, shared with kraus_necessity_check.
enum class Trend { bounded, divergent, unclear };
Trend classify_trend(const std::vector<double>& values, const ClassOptions& opt);

struct CurvatureSolution {
  GridPtr grid;
  std::vector<double> u;
  solver::SolveReport report;
  bool monotone = true;        // Newton iterates decreased pointwise from the supersolution
  double max_increase = 0.0;   // largest pointwise increase between iterates
};
// 1/4 Lap u = |alpha|^2 e^{2u} with Dirichlet data, started from the constant supersolution
// max(boundary).
CurvatureSolution solve_curvature(const Poly& alpha, GridPtr grid, const solver::SolverConfig& cfg,
                                  const std::function<double(cplx)>& boundary);

struct KrausReport {
  double M = 0.0;                  // sup |u| on the grid
  double bound = 0.0;              // 2M * 2pi
  std::vector<double> levels;      // truncation radii of the source integral
  std::vector<double> potential;   // sup_z int_{|xi|<level} G_R(z, xi) f(xi)
  bool holds = false;
};
// f sampled on the same grid as u (f = Lap u >= 0). Uses the Green function of the grid disk.
KrausReport kraus_necessity_check(const Grid& grid, const std::vector<double>& u, const std::vector<double>& f,
                                  double tol = 1e-6, int z_stride = 4);

struct PerturbationData {
  std::function<Mat(cplx)> theta0, phi, xi, dxi;  // dxi = d(xi)/dz
  std::function<Mat(cplx)> h1;                     // G of the background metric
  bool radial = false;                             // all four norms depend on |z| only
};
struct PerturbationReport {
  ClassReport commutator, phi_sq, dbar_xi, xi_sq;
  bool existence = false;          // all four in A
  bool mutually_bounded = false;   // all four in A^b
  bool inconclusive = false;
};
PerturbationReport perturbed_existence_conditions(const PerturbationData& d, const ClassOptions& opt = {});

struct ChainConditionReport {
  bool hypothesis = false;
  std::string message;
  int N = 0;                       // n(n^2 - 1)/6
  Poly alpha;
  std::vector<double> r;           // i(n - i)/2
  double coefficient = 0.0;        // 1 / max r_i
  ClassReport alpha_class;         // |alpha f|^2 with f = 1
};
ChainConditionReport chain_necessary_condition(const std::vector<Poly>& gamma);

}  // namespace hitchin::analysis
