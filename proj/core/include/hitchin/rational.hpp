#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "hitchin/poly.hpp"

// Exact Gaussian-rational arithmetic and polynomial matrices over Q(i)[z].
namespace hitchin::exact {

using Q = boost::multiprecision::cpp_rational;

struct CQ {
  Q re, im;

  CQ() = default;
  CQ(Q r, Q i = 0) : re(std::move(r)), im(std::move(i)) {}
  CQ(long r) : re(r) {}
  static CQ from_double(cplx z);  // exact binary value of each component

  bool is_zero() const { return re == 0 && im == 0; }
  cplx to_cplx() const;
  CQ inverse() const;
  std::string str() const;
};

CQ operator+(const CQ& a, const CQ& b);
CQ operator-(const CQ& a, const CQ& b);
CQ operator-(const CQ& a);
CQ operator*(const CQ& a, const CQ& b);
CQ operator/(const CQ& a, const CQ& b);
bool operator==(const CQ& a, const CQ& b);

struct QPoly {
  std::vector<CQ> c;  // c[k] multiplies z^k, no trailing zeros

  QPoly() = default;
  explicit QPoly(std::vector<CQ> coeffs);
  static QPoly constant(const CQ& a);
  static QPoly from(const Poly& p);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_constant() const { return c.size() <= 1; }
  CQ coeff(int k) const { return k < static_cast<int>(c.size()) ? c[static_cast<size_t>(k)] : CQ(); }
  CQ operator()(const CQ& z) const;
  Poly to_poly() const;
  void normalize();
};

QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const CQ& s, const QPoly& a);
bool operator==(const QPoly& a, const QPoly& b);

struct QPolyMatrix {
  int n = 0;
  std::vector<QPoly> e;

  QPolyMatrix() = default;
  explicit QPolyMatrix(int size) : n(size), e(static_cast<size_t>(size) * size) {}
  static QPolyMatrix identity(int size);
  static QPolyMatrix from(const PolyMatrix& m);

  QPoly& operator()(int i, int j) { return e[static_cast<size_t>(i) * n + j]; }
  const QPoly& operator()(int i, int j) const { return e[static_cast<size_t>(i) * n + j]; }
  QPoly trace() const;
  PolyMatrix to_poly() const;
  Mat eval(cplx z) const;
};

QPolyMatrix operator+(const QPolyMatrix& a, const QPolyMatrix& b);
QPolyMatrix operator-(const QPolyMatrix& a, const QPolyMatrix& b);
QPolyMatrix operator*(const QPolyMatrix& a, const QPolyMatrix& b);
bool operator==(const QPolyMatrix& a, const QPolyMatrix& b);

// Monic characteristic polynomial coefficients c_0 = 1, ..., c_n of det(t I - A), exactly.
std::vector<QPoly> charpoly(const QPolyMatrix& A);

}  // namespace hitchin::exact
