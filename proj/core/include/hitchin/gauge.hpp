#pragma once

#include <random>
#include <vector>

#include "hitchin/rational.hpp"

// Holomorphic gauge normalization of upper-triangular-plus-subdiagonal Higgs fields to
// companion form, in exact arithmetic.
namespace hitchin::gauge {

using exact::CQ;
using exact::QPoly;
using exact::QPolyMatrix;

// Throws HypothesisError unless entries below the subdiagonal vanish, the subdiagonal is
// made of nonzero constants and the trace vanishes identically.
void check_shape(const QPolyMatrix& theta);

struct Rescaled {
  QPolyMatrix theta;        // unit subdiagonal
  std::vector<CQ> g_diag;   // g = diag(g_diag), theta' = g theta g^{-1}
};
Rescaled rescale_subdiagonal(const QPolyMatrix& theta);

struct Normalized {
  std::vector<QPoly> q;     // q[j - 2] = Q_j, j = 2..n
  QPolyMatrix g;            // g theta g^{-1} = companion
  QPolyMatrix companion;
  bool charpoly_check = false;
};
Normalized normalize_to_companion(const QPolyMatrix& theta);
// Floating-point input, converted exactly to rationals first.
Normalized normalize_to_companion(const PolyMatrix& theta);

// Companion matrix with unit subdiagonal and Q_j on the (j-1)-th superdiagonal.
QPolyMatrix companion(const std::vector<QPoly>& q);

// Random instance with small Gaussian-rational coefficients and polynomial degree <= max_degree.
QPolyMatrix random_instance(int n, std::mt19937_64& rng, int max_degree = 2);

}  // namespace hitchin::gauge
