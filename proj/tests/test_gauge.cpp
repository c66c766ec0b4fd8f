#include <chrono>

#include "doctest.h"
#include "hitchin/bundle.hpp"
#include "hitchin/types.hpp"
#include "hitchin/gauge.hpp"
#include "support.hpp"

using namespace hitchin;
using namespace hitchin::gauge;
using namespace testing_support;
using exact::charpoly;

namespace {

QPoly qp(std::vector<CQ> c) { return QPoly(std::move(c)); }

// Inverse of an upper-triangular matrix with constant nonzero diagonal, by back substitution.
QPolyMatrix upper_inverse(const QPolyMatrix& g) {
  const int n = g.n;
  QPolyMatrix inv(n);
  for (int j = 0; j < n; ++j) {
    const CQ d = g(j, j).coeff(0).inverse();
    inv(j, j) = QPoly::constant(d);
    for (int i = j - 1; i >= 0; --i) {
      QPoly s;
      for (int k = i + 1; k <= j; ++k) s = s + g(i, k) * inv(k, j);
      inv(i, j) = -(g(i, i).coeff(0).inverse() * s);
    }
  }
  return inv;
}

bool is_unipotent_upper(const QPolyMatrix& g) {
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (i == j && !(g(i, j) == QPoly::constant(CQ(1)))) return false;
      if (i > j && !g(i, j).is_zero()) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("subdiagonal rescaling") {
  SUBCASE("unit subdiagonal gives the identity gauge") {
    const QPolyMatrix c = companion({qp({CQ(1), CQ(2)})});
    const auto r = rescale_subdiagonal(c);
    CHECK(r.theta == c);
    for (const CQ& d : r.g_diag) CHECK(d == CQ(1));
  }
  SUBCASE("n = 2 with r = c") {
    QPolyMatrix t(2);
    const CQ c(exact::Q(3, 2), exact::Q(-1, 4));
    t(0, 1) = qp({CQ(5)});
    t(1, 0) = QPoly::constant(c);
    const auto r = rescale_subdiagonal(t);
    REQUIRE(r.g_diag.size() == 2);
    // g = diag(1, 1/c) up to an overall scalar
    CHECK(r.g_diag[1] / r.g_diag[0] == c.inverse());
    CHECK(r.theta(1, 0) == QPoly::constant(CQ(1)));
    CHECK(r.theta(0, 1) == QPoly::constant(CQ(5) * c));
  }
  SUBCASE("property: random n = 4 constants agree with matrix conjugation") {
    for (int trial = 0; trial < 50; ++trial) {
      QPolyMatrix t = random_instance(4, rng(), 1);
      for (int k = 0; k < 3; ++k) t(k + 1, k) = QPoly::constant(CQ(exact::Q(1 + trial % 5, 2 + k), exact::Q(k, 3)));
      const auto r = rescale_subdiagonal(t);
      QPolyMatrix g(4), gi(4);
      for (int k = 0; k < 4; ++k) {
        g(k, k) = QPoly::constant(r.g_diag[static_cast<size_t>(k)]);
        gi(k, k) = QPoly::constant(r.g_diag[static_cast<size_t>(k)].inverse());
      }
      CHECK(g * t * gi == r.theta);
      for (int k = 0; k < 3; ++k) CHECK(r.theta(k + 1, k) == QPoly::constant(CQ(1)));
    }
  }
  SUBCASE("zero subdiagonal constant is rejected") {
    QPolyMatrix t = companion({QPoly{}, QPoly{}});
    t(2, 1) = QPoly{};
    CHECK_THROWS_AS(rescale_subdiagonal(t), HypothesisError);
  }
}

TEST_CASE("normalization to companion form") {
  SUBCASE("companion input is a fixed point") {
    const std::vector<QPoly> q{qp({CQ(1), CQ(0, 1)}), qp({CQ(0), CQ(0), CQ(exact::Q(1, 3))})};
    const auto r = normalize_to_companion(companion(q));
    CHECK(r.g == QPolyMatrix::identity(3));
    REQUIRE(r.q.size() == 2);
    CHECK(r.q[0] == q[0]);
    CHECK(r.q[1] == q[1]);
    CHECK(r.charpoly_check);
  }
  SUBCASE("n = 2 worked case") {
    const QPoly a = qp({CQ(1), CQ(exact::Q(-1, 2), 1)}), b = qp({CQ(0, 2), CQ(0), CQ(3)});
    QPolyMatrix t(2);
    t(0, 0) = a;
    t(0, 1) = b;
    t(1, 0) = QPoly::constant(CQ(1));
    t(1, 1) = -a;
    const auto r = normalize_to_companion(t);
    REQUIRE(r.q.size() == 1);
    CHECK(r.q[0] == a * a + b);
    QPolyMatrix g = QPolyMatrix::identity(2);
    g(0, 1) = -a;
    CHECK(r.g == g);
    CHECK(r.companion == companion({a * a + b}));
  }
  SUBCASE("non-zero trace is rejected") {
    QPolyMatrix t = companion({QPoly{}});
    t(0, 0) = QPoly::constant(CQ(1));
    CHECK_THROWS_AS(normalize_to_companion(t), HypothesisError);
  }
  SUBCASE("entries below the subdiagonal are rejected") {
    QPolyMatrix t = companion({QPoly{}, QPoly{}});
    t(2, 0) = QPoly::constant(CQ(1));
    CHECK_THROWS_AS(normalize_to_companion(t), HypothesisError);
  }
  SUBCASE("property: random instances, exact conjugation and characteristic polynomial") {
    const auto t0 = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = 2 + trial % 3;
      const QPolyMatrix th = random_instance(n, rng());
      const auto r = normalize_to_companion(th);
      CAPTURE(trial);
      REQUIRE(r.charpoly_check);
      // diag(g) is the rescaling only; the random instances have unit subdiagonal
      const auto res = rescale_subdiagonal(th);
      bool unit = true;
      for (const CQ& d : res.g_diag) unit = unit && d == res.g_diag[0];
      if (unit) CHECK(is_unipotent_upper(r.g));
      CHECK(r.g * th * upper_inverse(r.g) == r.companion);
      CHECK(charpoly(th) == charpoly(r.companion));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 30.0);
  }
  SUBCASE("property: n = 4 floating point charpoly and the bundle invariants agree") {
    for (int trial = 0; trial < 50; ++trial) {
      const QPolyMatrix th = random_instance(4, rng());
      const auto r = normalize_to_companion(th);
      for (int s = 0; s < 20; ++s) {
        const cplx z = random_disk_point(0.95);
        const auto c_in = charpoly_coeffs(th.eval(z)), c_out = charpoly_coeffs(r.companion.eval(z));
        for (size_t k = 0; k < c_in.size(); ++k) CHECK(std::abs(c_in[k] - c_out[k]) <= 1e-10 * (1.0 + std::abs(c_in[k])));
        const auto p = charpoly_invariants(th.eval(z));
        for (size_t j = 0; j < r.q.size(); ++j) {
          const cplx want = r.q[j].to_poly()(z);
          CHECK(std::abs(p[j] - want) <= 1e-10 * (1.0 + std::abs(want)));
        }
      }
    }
  }
  SUBCASE("floating point input") {
    PolyMatrix m(2, 2);
    m(0, 0) = Poly{0.5};
    m(1, 1) = Poly{-0.5};
    m(0, 1) = Poly{0.0, 1.0};
    m(1, 0) = Poly::constant(1.0);
    const auto r = normalize_to_companion(m);
    const Poly q2 = r.q[0].to_poly();
    CHECK(std::abs(q2(0.0) - 0.25) < 1e-15);
    CHECK(std::abs(q2(1.0) - 1.25) < 1e-15);
  }
}
