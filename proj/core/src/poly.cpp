#include "hitchin/poly.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin {

Poly Poly::monomial(cplx a, int k) {
  Poly p;
  p.c.assign(static_cast<size_t>(k) + 1, cplx(0.0));
  p.c[static_cast<size_t>(k)] = a;
  return p;
}

cplx Poly::operator()(cplx z) const {
  cplx acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly Poly::derivative() const {
  Poly d;
  for (size_t k = 1; k < c.size(); ++k) d.c.push_back(static_cast<double>(k) * c[k]);
  return d;
}

int Poly::degree() const {
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (c[static_cast<size_t>(k)] != cplx(0.0)) return k;
  return -1;
}

bool Poly::is_zero(double tol) const {
  return std::all_of(c.begin(), c.end(), [tol](cplx a) { return std::abs(a) <= tol; });
}

Poly Poly::trimmed(double tol) const {
  Poly p = *this;
  while (!p.c.empty() && std::abs(p.c.back()) <= tol) p.c.pop_back();
  return p;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), cplx(0.0));
  for (size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + cplx(-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, cplx(0.0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Poly operator*(cplx s, const Poly& a) {
  Poly r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

Poly pow(const Poly& a, int k) {
  Poly r = Poly::constant(1.0);
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

Mat PolyMatrix::eval(cplx z) const {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j)(z);
  return m;
}

PolyMatrix PolyMatrix::derivative() const {
  PolyMatrix d(rows, cols);
  for (size_t k = 0; k < e.size(); ++k) d.e[k] = e[k].derivative();
  return d;
}

}  // namespace hitchin
