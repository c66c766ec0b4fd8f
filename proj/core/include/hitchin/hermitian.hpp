#pragma once

#include <vector>

#include "hitchin/types.hpp"

// Small dense Hermitian helpers shared by the solver and the linear-algebra verifiers.
namespace hitchin::herm {

struct Eig {
  RVec values;
  Mat vectors;
};
Eig eig(const Mat& M);

Mat sqrt(const Mat& M);
Mat inv_sqrt(const Mat& M);
Mat log(const Mat& M);
Mat exp(const Mat& X);
Mat apply(const Eig& e, double (*f)(double));

// Frechet derivative of the matrix logarithm at M = U diag(l) U^* in direction D.
Mat dlog(const Eig& e, const Mat& D);

// Geometric mean A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
Mat geometric_mean(const Mat& A, const Mat& B);

// Real coordinates of a Hermitian matrix: diagonal, then (Re, Im) of each a<b entry.
int dim(int n);
void coords(const Mat& M, double* out);
Mat from_coords(const double* x, int n);
const std::vector<Mat>& basis(int n);

}  // namespace hitchin::herm
