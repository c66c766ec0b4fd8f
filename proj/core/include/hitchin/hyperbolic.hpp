#pragma once

#include <vector>

#include "hitchin/bundle.hpp"

namespace hitchin::hyperbolic {

// g_X = lambda(z) |dz|^2 with lambda = 4 (1 - |z|^2)^-2, curvature -1.
double lambda(cplx z);
// Hermitian length |d/dz|^2 of the anticanonical frame, lambda / 2.
double anticanonical_weight(cplx z);
// Gaussian curvature of g_X from a discrete Laplacian of log lambda, per interior node.
std::vector<double> discrete_curvature(const Grid& grid);

double a_kn(int k, int n);

// h_X = diag(a_{k,n} |d/dz|^{-(n+1-2k)}) in the frame e_k = dz^{(n+1-2k)/2}.
Mat hx_metric(int n, cplx z);
MetricField hx_field(GridPtr grid, int n);

// |theta|^2_{h, g_X}: tr(A H^-1 A^* H) |dz|^2_{g_X} with |dz|^2_{g_X} = 2 / lambda.
double higgs_norm_sq(const Mat& A, const Mat& G, cplx z);

struct MobiusMap {
  cplx a = 0.0;
  double phi = 0.0;

  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  // Continuous square root of the derivative on the disk.
  cplx sqrt_derivative(cplx z) const;
  MobiusMap inverse() const;
};
// (m1 o m2)(z) = m1(m2(z)).
MobiusMap compose(const MobiusMap& m1, const MobiusMap& m2);

// q_j o m * (m')^j; exact as polynomials only for rotations, so the general case is
// returned as a field evaluator.
DifferentialTuple rotate(const DifferentialTuple& q, double phi);
std::function<Mat(cplx)> mobius_pullback_higgs(const DifferentialTuple& q, const MobiusMap& m);

// Pulled-back metric in the frame e_k = dz^{(n+1-2k)/2}. Source values are interpolated
// bilinearly in (r, theta); nodes whose image leaves the source disk are listed in
// `extrapolated` and filled from the outermost ring.
MetricField mobius_pullback(const MetricField& H, const MobiusMap& m, std::vector<int>* extrapolated = nullptr);
// Same, with a closed-form source metric.
Mat mobius_pullback(const std::function<Mat(cplx)>& h, const MobiusMap& m, cplx z);

// Bilinear (r, theta) interpolation of a grid field at an arbitrary point.
Mat interpolate(const MetricField& H, cplx z, bool* extrapolated = nullptr);

}  // namespace hitchin::hyperbolic
