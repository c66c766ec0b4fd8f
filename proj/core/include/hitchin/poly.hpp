#pragma once

#include <vector>

#include "hitchin/types.hpp"

namespace hitchin {

// Polynomial in z with complex coefficients, c[k] multiplies z^k.
struct Poly {
  std::vector<cplx> c;

  Poly() = default;
  Poly(std::initializer_list<cplx> coeffs) : c(coeffs) {}
  explicit Poly(std::vector<cplx> coeffs) : c(std::move(coeffs)) {}

  static Poly constant(cplx a) { return Poly({a}); }
  static Poly monomial(cplx a, int k);

  cplx operator()(cplx z) const;
  Poly derivative() const;
  int degree() const;  // -1 for the zero polynomial
  bool is_zero(double tol = 0.0) const;
  Poly trimmed(double tol = 0.0) const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(cplx s, const Poly& a);
Poly pow(const Poly& a, int k);

// Dense matrix of polynomials, used where derivatives of a Higgs field are needed.
struct PolyMatrix {
  int rows = 0, cols = 0;
  std::vector<Poly> e;

  PolyMatrix() = default;
  PolyMatrix(int r, int c) : rows(r), cols(c), e(static_cast<size_t>(r) * c) {}
  Poly& operator()(int i, int j) { return e[static_cast<size_t>(i) * cols + j]; }
  const Poly& operator()(int i, int j) const { return e[static_cast<size_t>(i) * cols + j]; }
  Mat eval(cplx z) const;
  PolyMatrix derivative() const;
};

}  // namespace hitchin
