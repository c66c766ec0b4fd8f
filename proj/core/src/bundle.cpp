#include "hitchin/bundle.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace hitchin {

DifferentialTuple::DifferentialTuple(int rank, std::vector<Poly> coeffs) : n(rank), q(std::move(coeffs)) {
  if (rank < 2) throw std::invalid_argument("rank must be at least 2");
  q.resize(static_cast<size_t>(rank - 1));
}

bool DifferentialTuple::is_zero() const {
  for (const auto& p : q)
    if (!p.is_zero()) return false;
  return true;
}

Mat companion_higgs(const DifferentialTuple& q, cplx z) {
  const int n = q.n;
  Mat A = Mat::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) A(k + 1, k) = 1.0;
  for (int j = 2; j <= n; ++j) {
    const cplx v = q.Q(j)(z);
    for (int r = 0; r + j - 1 < n; ++r) A(r, r + j - 1) = v;
  }
  return A;
}

HiggsField companion_field(const DifferentialTuple& q) {
  const int n = q.n;
  PolyMatrix m(n, n);
  for (int k = 0; k + 1 < n; ++k) m(k + 1, k) = Poly::constant(1.0);
  for (int j = 2; j <= n; ++j)
    for (int r = 0; r + j - 1 < n; ++r) m(r, r + j - 1) = q.Q(j);
  return HiggsField(std::move(m), HiggsShape::companion);
}

std::vector<cplx> charpoly_coeffs(const Mat& A) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
  const int n = static_cast<int>(A.rows());
  std::vector<cplx> c(static_cast<size_t>(n) + 1, cplx(0.0));
  c[0] = 1.0;
  Mat M = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<size_t>(k - 1)] * Mat::Identity(n, n);
    c[static_cast<size_t>(k)] = -(A * M).trace() / static_cast<double>(k);
  }
  return c;
}

namespace {

// kappa_j(n): coefficient of Q_j in c_j for the companion shape.
std::vector<cplx> companion_kappa(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<cplx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> kappa(static_cast<size_t>(n) + 1, cplx(0.0));
  for (int j = 2; j <= n; ++j) {
    DifferentialTuple e(n);
    e.Q(j) = Poly::constant(1.0);
    kappa[static_cast<size_t>(j)] = charpoly_coeffs(companion_higgs(e, 0.0))[static_cast<size_t>(j)];
  }
  cache.emplace(n, kappa);
  return kappa;
}

}  // namespace

std::vector<cplx> charpoly_invariants(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  if (n < 2) return {};
  const auto c = charpoly_coeffs(A);
  const auto kappa = companion_kappa(n);
  DifferentialTuple partial(n);
  std::vector<cplx> p;
  for (int j = 2; j <= n; ++j) {
    const cplx lower = charpoly_coeffs(companion_higgs(partial, 0.0))[static_cast<size_t>(j)];
    const cplx pj = (c[static_cast<size_t>(j)] - lower) / kappa[static_cast<size_t>(j)];
    partial.Q(j) = Poly::constant(pj);
    p.push_back(pj);
  }
  return p;
}

PairingMatrix PairingMatrix::antidiagonal(int n) {
  PairingMatrix P{Mat::Zero(n, n)};
  for (int i = 0; i < n; ++i) P.S(i, n - 1 - i) = 1.0;
  return P;
}

PairingMatrix PairingMatrix::identity(int n) { return PairingMatrix{Mat::Identity(n, n)}; }

void MetricField::validate(double tol) const {
  for (size_t p = 0; p < H.size(); ++p) {
    const Mat& G = H[p];
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    if ((G - G.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
      throw PDViolation("metric not Hermitian at node " + std::to_string(p), static_cast<int>(p));
    Eigen::LLT<Mat> llt(G);
    if (llt.info() != Eigen::Success)
      throw PDViolation("metric not positive definite at node " + std::to_string(p), static_cast<int>(p));
    if (det_normalized) {
      const double d = G.determinant().real();
      if (std::abs(d - 1.0) > std::max(tol, 1e-8))
        throw PDViolation("det H != 1 at node " + std::to_string(p), static_cast<int>(p));
    }
  }
}

MetricField sample_metric(GridPtr grid, const std::function<Mat(cplx)>& h) {
  MetricField f;
  f.grid = grid;
  f.H.resize(static_cast<size_t>(grid->size()));
  for (int p = 0; p < grid->size(); ++p) f.H[static_cast<size_t>(p)] = h(grid->z(p));
  return f;
}

HiggsField HolomorphicChain::field() const {
  const int n = length();
  PolyMatrix m(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const bool zero = i < static_cast<int>(zero_set.size()) && zero_set[static_cast<size_t>(i)];
    m(i + 1, i) = zero ? Poly() : links[static_cast<size_t>(i)];
  }
  return HiggsField(std::move(m), HiggsShape::chain);
}

HolomorphicChain build_graded_chain(const HiggsField& A) {
  const int n = A.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < i; ++j)
      if (!A.poly(i, j).is_zero())
        throw HypothesisError("field has a nonzero entry below the subdiagonal at (" + std::to_string(i + 1) +
                              "," + std::to_string(j + 1) + ")");
  HolomorphicChain ch;
  ch.ranks.assign(static_cast<size_t>(n), 1);
  for (int i = 0; i + 1 < n; ++i) ch.links.push_back(A.poly(i + 1, i));
  ch.zero_set.assign(static_cast<size_t>(n > 0 ? n - 1 : 0), false);
  return ch;
}

std::vector<double> leading_minors(const Mat& G, int node) {
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success)
    throw PDViolation("non-positive leading minor at node " + std::to_string(node), node);
  const Mat L = llt.matrixL();
  std::vector<double> d;
  double acc = 1.0;
  for (int k = 0; k < G.rows(); ++k) {
    const double l = L(k, k).real();
    if (!(l > 0.0)) throw PDViolation("non-positive leading minor at node " + std::to_string(node), node);
    acc *= l * l;
    d.push_back(acc);
  }
  return d;
}

std::vector<std::vector<double>> weak_domination_margins(const MetricField& H, const MetricField& H_ref) {
  if (H.H.size() != H_ref.H.size()) throw std::invalid_argument("metric fields live on different grids");
  const int n = H.rank();
  std::vector<std::vector<double>> v(static_cast<size_t>(n - 1), std::vector<double>(H.H.size()));
  for (size_t p = 0; p < H.H.size(); ++p) {
    const auto a = leading_minors(H.H[p], static_cast<int>(p));
    const auto b = leading_minors(H_ref.H[p], static_cast<int>(p));
    for (int k = 0; k + 1 < n; ++k)
      v[static_cast<size_t>(k)][p] = std::log(a[static_cast<size_t>(k)] / b[static_cast<size_t>(k)]);
  }
  return v;
}

double compatibility_defect(const Mat& G, const Mat& S) {
  const Mat M = S.partialPivLu().solve(G);
  const int n = static_cast<int>(G.rows());
  return (M * M.conjugate() - Mat::Identity(n, n)).norm();
}

std::vector<double> compatibility_defect(const MetricField& H, const PairingMatrix& S) {
  std::vector<double> d(H.H.size());
  for (size_t p = 0; p < H.H.size(); ++p) d[p] = compatibility_defect(H.H[p], S.S);
  return d;
}

MutualBoundedness mutual_boundedness(const Mat& G1, const Mat& G2) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(G2, G1, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.maxCoeff(), 1.0 / ev.minCoeff()};
}

MutualBoundedness mutual_boundedness_report(const MetricField& H1, const MetricField& H2) {
  if (H1.H.size() != H2.H.size()) throw std::invalid_argument("metric fields live on different grids");
  MutualBoundedness r{0.0, 0.0};
  for (size_t p = 0; p < H1.H.size(); ++p) {
    Eigen::LLT<Mat> llt(H1.H[p]);
    if (llt.info() != Eigen::Success) throw PDViolation("singular H1 at node " + std::to_string(p), static_cast<int>(p));
    const auto m = mutual_boundedness(H1.H[p], H2.H[p]);
    r.sup_s = std::max(r.sup_s, m.sup_s);
    r.sup_s_inv = std::max(r.sup_s_inv, m.sup_s_inv);
  }
  return r;
}

}  // namespace hitchin
