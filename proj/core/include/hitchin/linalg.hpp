#pragma once

#include <random>
#include <string>
#include <vector>

#include "hitchin/types.hpp"

// Executable versions of the finite-dimensional estimates behind domination and uniqueness.
// |M| is the max-entry norm; |.|_h is the operator norm of the metric G (h(u, v) = v^* G u).
namespace hitchin::linalg {

double max_abs(const Mat& M);
// max_k |A_{k+1,k}|^{-1}
double tilde_norm(const Mat& A);
double h_norm(const Vec& v, const Mat& G);
double h_operator_norm(const Mat& M, const Mat& G);

// Inverse of an upper-triangular matrix through the alternating chain expansion
// (P^{-1})_{ij} = sum over i = i_0 < ... < i_m = j of (-1)^m prod P_{i_p i_p}^{-1} prod P_{i_p i_{p+1}}.
Mat triangular_inverse(const Mat& P);

struct TriangularFrameData {
  Mat P, A;
  double c = 0.0, d = 0.0, e = 0.0;
};

struct BoundReport {
  bool hypotheses = false;
  std::string failure;
  std::vector<double> diag_low, diag_up;  // bounds on |P_ii|
  RMat bound_P, bound_Pinv;               // entrywise bounds on |P_ij|, |(P^{-1})_ij|
  double C = 0.0;
  double worst_ratio = 0.0;               // max of observed / bound over all checked entries
  bool holds = false;
};
BoundReport verify_bound_main(const TriangularFrameData& data);

// Upper-triangular P with positive diagonal and P^* G P = I.
Mat gram_schmidt_P(const Mat& G);

// |v ^ f v ^ ... ^ f^{n-1} v|_h; G defaults to the identity.
double omega_cyclic(const Mat& f, const Vec& v, const Mat& G = Mat());
// rho / (2 n (1 + A)^{n(n-1)/2})
double cyclic_perturbation_radius(int n, double A, double rho);

struct CyclicReport {
  int samples = 0, failures = 0, omega_violations = 0;
  double eps0 = 0.0;
  double min_ratio = 0.0;  // min |omega(f_1, v)| / (rho |v|^n / 2)
};
// Samples f_1 with |f - f_1|_h = fraction * eps0 and checks |omega(f_1, v)| > rho |v|^n / 2.
CyclicReport verify_cyclic_perturbation(const Mat& f, const Vec& v, const Mat& G, double A, double rho, int samples,
                                        std::mt19937_64& rng, double fraction = 0.99);

struct OrthogonalityReport {
  bool ill_conditioned = false;
  int clusters = 0;
  double defect = 0.0;  // max |u^T S v| / |S| over unit u in V_a, v in V_b, a != b
};
OrthogonalityReport eigenspace_orthogonality_defect(const Mat& f, const Mat& S, double gap = 1e-6);

// Frame data: f(e_k) = e_{k+1} + upper-triangular part, S f symmetric, |f|_h <= A,
// |e_1 ^ ... ^ e_n|_h >= rho |e_1|_h^n.
struct CompatTriple {
  int n = 0;
  Mat G, S, f;
  double A = 0.0, rho = 0.0;
};

struct ClosenessReport {
  double eps = 0.0, eps0 = 0.0, eps1 = 0.0, C1 = 0.0, distance = 0.0;
  bool preconditions = false, in_regime = false, holds = false;
  std::string message;
};
ClosenessReport closeness_verify(const CompatTriple& t, const Mat& G, const Mat& G2);

// Random admissible instances for the property suites.
TriangularFrameData random_triangular_frame(int n, std::mt19937_64& rng);
CompatTriple random_compat_triple(int n, std::mt19937_64& rng);
// A second compatible metric whose commutator defect is target * eps1 (to first order).
Mat random_compatible_neighbour(const CompatTriple& t, double target, std::mt19937_64& rng);
// Geodesic midpoint projection onto metrics compatible with S.
Mat project_compatible(const Mat& G, const Mat& S);

}  // namespace hitchin::linalg
