#include "hitchin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hitchin/hermitian.hpp"

namespace hitchin::linalg {

double max_abs(const Mat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

double tilde_norm(const Mat& A) {
  double t = 0.0;
  for (int k = 0; k + 1 < A.rows(); ++k) t = std::max(t, 1.0 / std::abs(A(k + 1, k)));
  return t;
}

double h_norm(const Vec& v, const Mat& G) { return std::sqrt(std::max(0.0, (v.adjoint() * G * v)(0, 0).real())); }

double h_operator_norm(const Mat& M, const Mat& G) {
  const Mat S = herm::sqrt(G);
  const Mat Si = herm::inv_sqrt(G);
  Eigen::JacobiSVD<Mat> svd(S * M * Si);
  return svd.singularValues()(0);
}

Mat triangular_inverse(const Mat& P) {
  const int n = static_cast<int>(P.rows());
  if (P.cols() != n) throw std::invalid_argument("triangular_inverse: matrix is not square");
  for (int i = 0; i < n; ++i) {
    if (P(i, i) == 0.0) throw std::invalid_argument("triangular_inverse: zero diagonal entry");
    for (int j = 0; j < i; ++j)
      if (P(i, j) != 0.0) throw std::invalid_argument("triangular_inverse: matrix is not upper triangular");
  }
  // Grouping the chains by their first step: X_ij = -P_ii^{-1} sum_{i<k<=j} P_ik X_kj.
  Mat X = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    X(j, j) = 1.0 / P(j, j);
    for (int i = j - 1; i >= 0; --i) {
      cplx s = 0.0;
      for (int k = i + 1; k <= j; ++k) s += P(i, k) * X(k, j);
      X(i, j) = -s / P(i, i);
    }
  }
  return X;
}

BoundReport verify_bound_main(const TriangularFrameData& data) {
  BoundReport rep;
  const Mat& P = data.P;
  const Mat& A = data.A;
  const int n = static_cast<int>(P.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < i && P(i, j) != 0.0) rep.failure = "P is not upper triangular";
      if (i > j + 1 && A(i, j) != 0.0) rep.failure = "A has entries below the subdiagonal";
      if (i == j + 1 && A(i, j) == 0.0) rep.failure = "A has a vanishing subdiagonal entry";
      if (i == j && P(i, i) == 0.0) rep.failure = "P has a vanishing diagonal entry";
    }
  if (!rep.failure.empty()) return rep;
  const Mat Pinv = triangular_inverse(P);
  const double slack = 1e-12;
  if (max_abs(Pinv * A * P) > data.c * (1.0 + slack)) rep.failure = "|P^{-1} A P| <= c fails";
  else if (std::abs(P(0, 0)) < data.d * (1.0 - slack)) rep.failure = "|P_11| >= d fails";
  else if (std::abs(P.determinant()) > data.e * (1.0 + slack)) rep.failure = "|det P| <= e fails";
  if (!rep.failure.empty()) return rep;
  rep.hypotheses = true;

  const double a = max_abs(A);
  const double at = tilde_norm(A);
  const double ct = data.c * at;
  const double d = data.d, e = data.e;

  // Diagonal: |P_kk| <= ct |P_{k+1,k+1}| from the subdiagonal of P^{-1} A P, then the
  // determinant bound distributed over the remaining factors.
  rep.diag_low.resize(static_cast<size_t>(n));
  rep.diag_up.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    rep.diag_low[static_cast<size_t>(i)] = d * std::pow(ct, -i);
    const double m = n - i;
    rep.diag_up[static_cast<size_t>(i)] = std::pow(e * std::pow(d, -i), 1.0 / m) *
                                          std::pow(ct, i * (i - 1) / (2.0 * m)) * std::pow(ct, (n - 1 - i) / 2.0);
  }
  const auto& low = rep.diag_low;
  const auto& up = rep.diag_up;

  RMat Bp = RMat::Zero(n, n), Bq = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Bp(i, i) = up[static_cast<size_t>(i)];
    Bq(i, i) = 1.0 / low[static_cast<size_t>(i)];
  }
  // Off-diagonal entries by induction on the gap t = j - i, using the (i, j-1) entry of
  // P^{-1} A P solved for P_ij; every other term involves smaller gaps or row i-1.
  for (int t = 1; t < n; ++t) {
    for (int i = 0; i + t < n; ++i) {
      const int j = i + t, col = j - 1;
      double tsum = 0.0;
      for (int l = i; l <= col; ++l)
        for (int k = std::max(l - 1, i); k <= col; ++k) tsum += Bq(i, l) * a * Bp(k, col);
      double chain = 0.0;
      for (int k = i + 1; k < j; ++k) chain += Bp(i, k) * Bq(k, j);
      chain /= low[static_cast<size_t>(i)];
      const double prev = i > 0 ? a * Bp(i - 1, col) / low[static_cast<size_t>(i)] : 0.0;
      Bp(i, j) = up[static_cast<size_t>(i)] * up[static_cast<size_t>(j)] * at / low[static_cast<size_t>(j - 1)] *
                 (data.c + tsum + a * up[static_cast<size_t>(j - 1)] * chain + prev);
    }
    for (int i = 0; i + t < n; ++i) {
      const int j = i + t;
      double s = 0.0;
      for (int k = i + 1; k <= j; ++k) s += Bp(i, k) * (k == j ? 1.0 / low[static_cast<size_t>(j)] : Bq(k, j));
      Bq(i, j) = s / low[static_cast<size_t>(i)];
    }
  }
  rep.bound_P = Bp;
  rep.bound_Pinv = Bq;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) rep.C = std::max(rep.C, Bp(i, j) + Bq(i, j));

  rep.holds = true;
  for (int i = 0; i < n; ++i) {
    const double pi = std::abs(P(i, i));
    rep.worst_ratio = std::max({rep.worst_ratio, pi / up[static_cast<size_t>(i)], low[static_cast<size_t>(i)] / pi});
    for (int j = i; j < n; ++j) {
      const double p = std::abs(P(i, j)), q = std::abs(Pinv(i, j));
      rep.worst_ratio = std::max({rep.worst_ratio, p / Bp(i, j), q / Bq(i, j), (p + q) / rep.C});
    }
  }
  rep.holds = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

Mat gram_schmidt_P(const Mat& G) {
  Eigen::LLT<Mat> llt(0.5 * (G + G.adjoint()));
  if (llt.info() != Eigen::Success) throw PDViolation("gram_schmidt_P: metric is not positive definite", -1);
  const Mat R = llt.matrixU();
  return R.triangularView<Eigen::Upper>().solve(Mat::Identity(G.rows(), G.cols()));
}

double omega_cyclic(const Mat& f, const Vec& v, const Mat& G) {
  const int n = static_cast<int>(f.rows());
  Mat K(n, n);
  Vec w = v;
  for (int k = 0; k < n; ++k) {
    K.col(k) = w;
    w = f * w;
  }
  const double vol = G.size() ? std::sqrt(std::abs(G.determinant().real())) : 1.0;
  return std::abs(K.determinant()) * vol;
}

double cyclic_perturbation_radius(int n, double A, double rho) {
  return rho / (2.0 * n * std::pow(1.0 + A, n * (n - 1) / 2.0));
}

namespace {

Mat random_complex(int r, int c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  Mat M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = cplx(N(rng), N(rng));
  return M;
}

}  // namespace

CyclicReport verify_cyclic_perturbation(const Mat& f, const Vec& v, const Mat& G0, double A, double rho, int samples,
                                        std::mt19937_64& rng, double fraction) {
  const int n = static_cast<int>(f.rows());
  const Mat G = G0.size() ? G0 : Mat::Identity(n, n);
  CyclicReport rep;
  rep.eps0 = cyclic_perturbation_radius(n, A, rho);
  const double vn = std::pow(h_norm(v, G), n);
  const double threshold = rho * vn / 2.0;
  rep.min_ratio = INFINITY;
  for (int s = 0; s < samples; ++s) {
    Mat E = random_complex(n, n, rng);
    E *= fraction * rep.eps0 / h_operator_norm(E, G);
    const Mat f1 = f + E;
    const double om = omega_cyclic(f1, v, G);
    const double cap = std::pow(h_operator_norm(f1, G), n * (n - 1) / 2.0) * vn;
    if (om > cap * (1.0 + 1e-10) + 1e-300) ++rep.omega_violations;
    rep.min_ratio = std::min(rep.min_ratio, om / threshold);
    if (!(om > threshold)) ++rep.failures;
    ++rep.samples;
  }
  return rep;
}

OrthogonalityReport eigenspace_orthogonality_defect(const Mat& f, const Mat& S, double gap) {
  const int n = static_cast<int>(f.rows());
  OrthogonalityReport rep;
  Eigen::ComplexSchur<Mat> schur(f);
  std::vector<cplx> ev(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) ev[static_cast<size_t>(k)] = schur.matrixT()(k, k);
  const double scale = std::max(1.0, std::abs(*std::max_element(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return std::abs(a) < std::abs(b);
  })));
  // Eigenvalues closer than the gap cannot be separated into eigenspaces reliably.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (std::abs(ev[static_cast<size_t>(a)] - ev[static_cast<size_t>(b)]) < gap * scale) rep.ill_conditioned = true;
  rep.clusters = n;
  if (rep.ill_conditioned) return rep;

  // V_a = range of prod_{b != a} (f - lambda_b).
  std::vector<Mat> basis(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    Mat M = Mat::Identity(n, n);
    for (int k = 0; k < n; ++k)
      if (k != c) M = (f - ev[static_cast<size_t>(k)] * Mat::Identity(n, n)) * M;
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU);
    basis[static_cast<size_t>(c)] = svd.matrixU().leftCols(1);
  }
  const double snorm = max_abs(S);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        const Mat C = basis[static_cast<size_t>(a)].transpose() * S * basis[static_cast<size_t>(b)];
        Eigen::JacobiSVD<Mat> svd(C);
        rep.defect = std::max(rep.defect, svd.singularValues()(0) / snorm);
      }
  return rep;
}

Mat project_compatible(const Mat& G, const Mat& S) {
  Mat t = S * G.conjugate().inverse() * S.conjugate();
  t = 0.5 * (t + t.adjoint());
  return herm::geometric_mean(G, t);
}

ClosenessReport closeness_verify(const CompatTriple& t, const Mat& G, const Mat& G2) {
  ClosenessReport rep;
  const int n = t.n;
  rep.eps0 = cyclic_perturbation_radius(n, t.A, t.rho);
  rep.eps1 = 0.5 * std::pow(10.0 * n, -3.0) * rep.eps0;
  rep.C1 = n / rep.eps1;

  auto in_class = [&](const Mat& H) {
    const Mat M = t.S.inverse() * H.conjugate();
    const double compat = (M * M.conjugate() - Mat::Identity(n, n)).norm();
    const double vol = std::sqrt(std::abs(H.determinant().real()));
    const double e1 = std::sqrt(H(0, 0).real());
    return compat <= 1e-8 && vol >= t.rho * std::pow(e1, n) * (1.0 - 1e-12) &&
           h_operator_norm(t.f, H) <= t.A * (1.0 + 1e-12);
  };
  rep.preconditions = in_class(G) && in_class(G2) && ((t.S * t.f).transpose() - t.S * t.f).norm() <= 1e-10 * (1.0 + t.S.norm());
  if (!rep.preconditions) {
    rep.message = "metrics outside the admissible class";
    return rep;
  }
  const Mat s = G.partialPivLu().solve(G2);
  rep.eps = h_operator_norm(s * t.f - t.f * s, G);
  rep.distance = h_operator_norm(s - Mat::Identity(n, n), G);
  rep.in_regime = rep.eps < rep.eps1;
  if (!rep.in_regime) {
    rep.message = "out of regime";
    return rep;
  }
  rep.holds = rep.distance <= rep.C1 * rep.eps + 1e-12;
  return rep;
}

TriangularFrameData random_triangular_frame(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.3, 3.0), ph(0.0, 2.0 * kPi), sub(0.3, 2.0);
  std::normal_distribution<double> N(0.0, 1.0);
  TriangularFrameData d;
  for (;;) {
    d.P = Mat::Zero(n, n);
    d.A = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      d.P(i, i) = std::polar(mag(rng), ph(rng));
      for (int j = i + 1; j < n; ++j) d.P(i, j) = cplx(N(rng), N(rng));
      for (int j = std::max(0, i - 1); j < n; ++j)
        d.A(i, j) = j == i - 1 ? std::polar(sub(rng), ph(rng)) : cplx(N(rng), N(rng));
    }
    Eigen::JacobiSVD<Mat> svd(d.P);
    const auto& sv = svd.singularValues();
    if (sv(0) / sv(n - 1) <= 1e6) break;
  }
  d.c = max_abs(triangular_inverse(d.P) * d.A * d.P);
  d.d = std::abs(d.P(0, 0));
  d.e = std::abs(d.P.determinant());
  return d;
}

namespace {

Mat antidiagonal(int n) {
  Mat S = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) S(i, n - 1 - i) = 1.0;
  return S;
}

}  // namespace

CompatTriple random_compat_triple(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 0.5);
  CompatTriple t;
  t.n = n;
  t.S = antidiagonal(n);
  // Persymmetric Toeplitz companion-shaped f, conjugated by a unipotent S-orthogonal g.
  Mat f = Mat::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) f(k + 1, k) = 1.0;
  for (int j = 0; j < n; ++j) {
    const cplx v(N(rng), N(rng));
    for (int r = 0; r + j < n; ++r) f(r, r + j) = v;
  }
  Mat X = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) X(i, j) = cplx(N(rng), N(rng));
  X = 0.5 * (X - t.S * X.transpose() * t.S);
  Mat g = Mat::Identity(n, n), term = Mat::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    term = term * X / static_cast<double>(k);
    g += term;
  }
  t.f = g * f * g.inverse();
  Mat H = random_complex(n, n, rng, 0.3);
  t.G = project_compatible(herm::exp(0.5 * (H + H.adjoint())), t.S);
  // Slack so that nearby metrics stay in the admissible class.
  t.A = 1.01 * h_operator_norm(t.f, t.G);
  t.rho = 0.99 * std::sqrt(std::abs(t.G.determinant().real())) / std::pow(t.G(0, 0).real(), n / 2.0);
  return t;
}

Mat random_compatible_neighbour(const CompatTriple& t, double target, std::mt19937_64& rng) {
  const int n = t.n;
  Mat K = random_complex(n, n, rng);
  K = 0.5 * (K + K.adjoint());
  const Mat Sq = herm::sqrt(t.G);
  auto make = [&](double delta) { return project_compatible(Sq * herm::exp(delta * K) * Sq, t.S); };
  const double probe = 1e-4;
  const Mat Gp = make(probe);
  const Mat s = t.G.partialPivLu().solve(Gp);
  const double eps = h_operator_norm(s * t.f - t.f * s, t.G);
  const double eps1 = 0.5 * std::pow(10.0 * n, -3.0) * cyclic_perturbation_radius(n, t.A, t.rho);
  return eps > 0.0 ? make(probe * target * eps1 / eps) : Gp;
}

}  // namespace hitchin::linalg
