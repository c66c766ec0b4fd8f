#include "hitchin/hermitian.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace hitchin::herm {

Eig eig(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.adjoint()));
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat apply(const Eig& e, double (*f)(double)) {
  RVec v = e.values;
  for (int i = 0; i < v.size(); ++i) v(i) = f(v(i));
  return e.vectors * v.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

Mat sqrt(const Mat& M) { return apply(eig(M), [](double x) { return std::sqrt(x); }); }
Mat inv_sqrt(const Mat& M) { return apply(eig(M), [](double x) { return 1.0 / std::sqrt(x); }); }
Mat log(const Mat& M) { return apply(eig(M), [](double x) { return std::log(x); }); }
Mat exp(const Mat& X) { return apply(eig(X), [](double x) { return std::exp(x); }); }

Mat dlog(const Eig& e, const Mat& D) {
  const int n = static_cast<int>(e.values.size());
  Mat T = e.vectors.adjoint() * D * e.vectors;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = e.values(i), b = e.values(j);
      double g;
      if (std::abs(a - b) > 1e-10 * std::max(a, b))
        g = (std::log(a) - std::log(b)) / (a - b);
      else
        g = 2.0 / (a + b);
      T(i, j) *= g;
    }
  return e.vectors * T * e.vectors.adjoint();
}

Mat geometric_mean(const Mat& A, const Mat& B) {
  const Eig ea = eig(A);
  const Mat s = apply(ea, [](double x) { return std::sqrt(x); });
  const Mat si = apply(ea, [](double x) { return 1.0 / std::sqrt(x); });
  const Mat mid = sqrt(si * B * si);
  const Mat g = s * mid * s;
  return 0.5 * (g + g.adjoint());
}

int dim(int n) { return n * n; }

void coords(const Mat& M, double* out) {
  const int n = static_cast<int>(M.rows());
  int k = 0;
  for (int a = 0; a < n; ++a) out[k++] = M(a, a).real();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      out[k++] = M(a, b).real();
      out[k++] = M(a, b).imag();
    }
}

Mat from_coords(const double* x, int n) {
  Mat M = Mat::Zero(n, n);
  int k = 0;
  for (int a = 0; a < n; ++a) M(a, a) = x[k++];
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const cplx v(x[k], x[k + 1]);
      k += 2;
      M(a, b) = v;
      M(b, a) = std::conj(v);
    }
  return M;
}

const std::vector<Mat>& basis(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Mat>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Mat> B;
  std::vector<double> x(static_cast<size_t>(dim(n)), 0.0);
  for (int k = 0; k < dim(n); ++k) {
    x[static_cast<size_t>(k)] = 1.0;
    B.push_back(from_coords(x.data(), n));
    x[static_cast<size_t>(k)] = 0.0;
  }
  return cache.emplace(n, std::move(B)).first->second;
}

}  // namespace hitchin::herm
