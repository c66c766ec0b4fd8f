#pragma once

#include <random>

#include "hitchin/poly.hpp"

namespace testing_support {

using hitchin::cplx;
using hitchin::Mat;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline cplx random_cplx(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

inline Mat random_rect(int rows, int cols, double scale = 1.0) {
  Mat M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = random_cplx(scale);
  return M;
}

inline Mat random_mat(int n, double scale = 1.0) { return random_rect(n, n, scale); }

// Hermitian positive definite with eigenvalues in [lo, hi].
inline Mat random_pd(int n, double lo = 0.5, double hi = 2.0) {
  const Mat Q = random_mat(n).householderQr().householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(lo, hi);
  const Mat G = Q * d.cast<cplx>().asDiagonal() * Q.adjoint();
  return 0.5 * (G + G.adjoint());
}

inline hitchin::Poly random_poly(int degree, double scale = 1.0) {
  std::vector<cplx> c;
  for (int k = 0; k <= degree; ++k) c.push_back(random_cplx(scale));
  return hitchin::Poly(c);
}

inline cplx random_disk_point(double rmax = 0.9) {
  return std::polar(rmax * std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 6.283185307179586));
}

}  // namespace testing_support
