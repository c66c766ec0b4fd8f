#include "hitchin/gauge.hpp"

#include <stdexcept>
#include <string>

namespace hitchin::gauge {

void check_shape(const QPolyMatrix& theta) {
  const int n = theta.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < i; ++j)
      if (!theta(i, j).is_zero()) throw HypothesisError("entry below the subdiagonal is nonzero");
  for (int k = 0; k + 1 < n; ++k) {
    const QPoly& s = theta(k + 1, k);
    if (s.is_zero() || !s.is_constant()) throw HypothesisError("subdiagonal entries must be nonzero constants");
  }
  if (!theta.trace().is_zero()) throw HypothesisError("trace does not vanish identically");
}

Rescaled rescale_subdiagonal(const QPolyMatrix& theta) {
  check_shape(theta);
  const int n = theta.n;
  Rescaled out;
  out.g_diag.assign(static_cast<size_t>(n), CQ(1));
  for (int k = 0; k + 1 < n; ++k)
    out.g_diag[static_cast<size_t>(k + 1)] = out.g_diag[static_cast<size_t>(k)] / theta(k + 1, k).c[0];
  out.theta = QPolyMatrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.theta(i, j) = (out.g_diag[static_cast<size_t>(i)] / out.g_diag[static_cast<size_t>(j)]) * theta(i, j);
  return out;
}

QPolyMatrix companion(const std::vector<QPoly>& q) {
  const int n = static_cast<int>(q.size()) + 1;
  QPolyMatrix m(n);
  for (int k = 0; k + 1 < n; ++k) m(k + 1, k) = QPoly::constant(CQ(1));
  for (int j = 2; j <= n; ++j)
    for (int r = 0; r + j - 1 < n; ++r) m(r, r + j - 1) = q[static_cast<size_t>(j - 2)];
  return m;
}

namespace {

// (I + F)^{-1} for strictly upper-triangular F.
QPolyMatrix unipotent_inverse(const QPolyMatrix& F) {
  const int n = F.n;
  QPolyMatrix inv = QPolyMatrix::identity(n), term = QPolyMatrix::identity(n);
  QPolyMatrix negF(n);
  for (size_t k = 0; k < F.e.size(); ++k) negF.e[k] = -F.e[k];
  for (int k = 1; k < n; ++k) {
    term = term * negF;
    inv = inv + term;
  }
  return inv;
}

}  // namespace

Normalized normalize_to_companion(const QPolyMatrix& theta_in) {
  const int n = theta_in.n;
  Rescaled rs = rescale_subdiagonal(theta_in);
  QPolyMatrix theta = rs.theta;
  QPolyMatrix g(n);
  for (int i = 0; i < n; ++i) g(i, i) = QPoly::constant(rs.g_diag[static_cast<size_t>(i)]);

  Normalized out;
  // Stage j0 makes the j0-th superdiagonal constant along the band, equal to its mean, with
  // g = I + F supported on superdiagonal j0 + 1; lower bands are untouched.
  for (int j0 = 0; j0 + 1 < n; ++j0) {
    const int len = n - j0;
    QPoly sum;
    for (int r = 0; r < len; ++r) sum = sum + theta(r, r + j0);
    const QPoly q = CQ(exact::Q(1, len)) * sum;
    if (j0 == 0 && !q.is_zero()) throw HypothesisError("trace does not vanish identically");
    if (j0 > 0) out.q.push_back(q);
    QPolyMatrix step = QPolyMatrix::identity(n), F(n);
    QPoly x;
    for (int r = 0; r + 1 < len; ++r) {
      x = x + q - theta(r, r + j0);
      F(r, r + j0 + 1) = x;
    }
    step = step + F;
    theta = step * theta * unipotent_inverse(F);
    g = step * g;
    for (int r = 0; r < len; ++r)
      if (!(theta(r, r + j0) == q))
        throw std::logic_error("gauge stage " + std::to_string(j0) + " failed to equalize the band");
  }
  out.q.push_back(theta(0, n - 1));
  out.g = g;
  out.companion = companion(out.q);
  if (!(theta == out.companion)) throw std::logic_error("normalized field is not in companion form");
  out.charpoly_check = exact::charpoly(theta_in) == exact::charpoly(out.companion);
  return out;
}

Normalized normalize_to_companion(const PolyMatrix& theta) {
  return normalize_to_companion(QPolyMatrix::from(theta));
}

QPolyMatrix random_instance(int n, std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), deg(0, max_degree);
  auto rnd = [&] { return CQ(exact::Q(num(rng), den(rng)), exact::Q(num(rng), den(rng))); };
  auto poly = [&] {
    std::vector<CQ> c(static_cast<size_t>(deg(rng)) + 1);
    for (auto& x : c) x = rnd();
    return QPoly(std::move(c));
  };
  QPolyMatrix m(n);
  for (int k = 0; k + 1 < n; ++k) {
    CQ s;
    while (s.is_zero()) s = rnd();
    m(k + 1, k) = QPoly::constant(s);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = poly();
  QPoly tr;
  for (int i = 0; i + 1 < n; ++i) tr = tr + m(i, i);
  m(n - 1, n - 1) = -tr;
  return m;
}

}  // namespace hitchin::gauge
