#include "hitchin/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace hitchin::exact {

namespace {

Q exact_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite coefficient");
  int e = 0;
  const double m = std::frexp(x, &e);
  // m has at most 53 significant bits.
  const auto mi = static_cast<long long>(std::ldexp(m, 53));
  Q r(mi);
  e -= 53;
  const Q two(2);
  Q p(1);
  for (int k = 0; k < std::abs(e); ++k) p *= two;
  return e >= 0 ? Q(r * p) : Q(r / p);
}

}  // namespace

CQ CQ::from_double(cplx z) { return CQ(exact_double(z.real()), exact_double(z.imag())); }

cplx CQ::to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }

CQ CQ::inverse() const {
  const Q d = re * re + im * im;
  if (d == 0) throw std::domain_error("division by zero");
  return CQ(re / d, -im / d);
}

std::string CQ::str() const {
  if (im == 0) return re.str();
  return "(" + re.str() + (im < 0 ? "-" : "+") + Q(boost::multiprecision::abs(im)).str() + "i)";
}

CQ operator+(const CQ& a, const CQ& b) { return CQ(a.re + b.re, a.im + b.im); }
CQ operator-(const CQ& a, const CQ& b) { return CQ(a.re - b.re, a.im - b.im); }
CQ operator-(const CQ& a) { return CQ(-a.re, -a.im); }
CQ operator*(const CQ& a, const CQ& b) { return CQ(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re); }
CQ operator/(const CQ& a, const CQ& b) { return a * b.inverse(); }
bool operator==(const CQ& a, const CQ& b) { return a.re == b.re && a.im == b.im; }

QPoly::QPoly(std::vector<CQ> coeffs) : c(std::move(coeffs)) { normalize(); }

void QPoly::normalize() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

QPoly QPoly::constant(const CQ& a) { return QPoly(std::vector<CQ>{a}); }

QPoly QPoly::from(const Poly& p) {
  std::vector<CQ> c;
  for (const cplx& x : p.c) c.push_back(CQ::from_double(x));
  return QPoly(std::move(c));
}

CQ QPoly::operator()(const CQ& z) const {
  CQ acc;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly QPoly::to_poly() const {
  std::vector<cplx> out;
  for (const auto& x : c) out.push_back(x.to_cplx());
  return Poly(out);
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<CQ> c(std::max(a.c.size(), b.c.size()));
  for (size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a) {
  QPoly r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<CQ> c(a.c.size() + b.c.size() - 1);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) c[i + j] = c[i + j] + a.c[i] * b.c[j];
  return QPoly(std::move(c));
}

QPoly operator*(const CQ& s, const QPoly& a) { return QPoly::constant(s) * a; }

bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }

QPolyMatrix QPolyMatrix::identity(int size) {
  QPolyMatrix m(size);
  for (int i = 0; i < size; ++i) m(i, i) = QPoly::constant(CQ(1));
  return m;
}

QPolyMatrix QPolyMatrix::from(const PolyMatrix& p) {
  if (p.rows != p.cols) throw std::invalid_argument("square matrix expected");
  QPolyMatrix m(p.rows);
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) m(i, j) = QPoly::from(p(i, j));
  return m;
}

QPoly QPolyMatrix::trace() const {
  QPoly t;
  for (int i = 0; i < n; ++i) t = t + (*this)(i, i);
  return t;
}

PolyMatrix QPolyMatrix::to_poly() const {
  PolyMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j).to_poly();
  return m;
}

Mat QPolyMatrix::eval(cplx z) const { return to_poly().eval(z); }

QPolyMatrix operator+(const QPolyMatrix& a, const QPolyMatrix& b) {
  QPolyMatrix r(a.n);
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = a.e[k] + b.e[k];
  return r;
}

QPolyMatrix operator-(const QPolyMatrix& a, const QPolyMatrix& b) {
  QPolyMatrix r(a.n);
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = a.e[k] - b.e[k];
  return r;
}

QPolyMatrix operator*(const QPolyMatrix& a, const QPolyMatrix& b) {
  QPolyMatrix r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < a.n; ++j)
        if (!b(k, j).is_zero()) r(i, j) = r(i, j) + a(i, k) * b(k, j);
    }
  return r;
}

bool operator==(const QPolyMatrix& a, const QPolyMatrix& b) { return a.n == b.n && a.e == b.e; }

std::vector<QPoly> charpoly(const QPolyMatrix& A) {
  // Faddeev-LeVerrier over Q(i)[z]: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
  const int n = A.n;
  std::vector<QPoly> c(static_cast<size_t>(n) + 1);
  c[0] = QPoly::constant(CQ(1));
  QPolyMatrix M(n);
  for (int k = 1; k <= n; ++k) {
    M = A * M;
    for (int i = 0; i < n; ++i) M(i, i) = M(i, i) + c[static_cast<size_t>(k - 1)];
    c[static_cast<size_t>(k)] = CQ(Q(-1, k)) * (A * M).trace();
  }
  return c;
}

}  // namespace hitchin::exact
