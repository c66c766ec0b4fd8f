#include <cmath>

#include "doctest.h"
#include "hitchin/analysis.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hitchin;
using namespace hitchin::analysis;
using namespace testing_support;

TEST_CASE("Green function") {
  CHECK(green(0.0, cplx(0.3, 0.4)) == doctest::Approx(-std::log(0.5)));
  CHECK(green(0.5, 0.25) == doctest::Approx(std::log(3.5)));
  CHECK(std::isinf(green(0.2, 0.2)));
  SUBCASE("property: symmetric and positive") {
    for (int trial = 0; trial < 500; ++trial) {
      const cplx z = random_disk_point(0.99), xi = random_disk_point(0.99);
      CHECK(green(z, xi) > 0.0);
      CHECK(green(z, xi) == doctest::Approx(green(xi, z)).epsilon(1e-12));
    }
  }
  SUBCASE("property: decreasing in |z - xi| along a radius") {
    for (int trial = 0; trial < 100; ++trial) {
      const cplx dir = std::polar(1.0, uniform(0.0, 6.28));
      const double a = uniform(0.0, 0.5);
      double prev = INFINITY;
      for (double t = a + 0.01; t < 0.99; t += 0.05) {
        const double g = green(a * dir, t * dir);
        CHECK(g < prev);
        prev = g;
      }
    }
  }
}

TEST_CASE("mean of log|z - r e^{it}| over a circle") {
  CHECK(std::abs(mean_log_circle(0.0, 1.0)) < 1e-12);
  CHECK(mean_log_circle(2.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(std::abs(mean_log_circle(0.3, 0.5) - std::log(0.5)) < 1e-6);
  SUBCASE("property: equals log max(|z|, r)") {
    int done = 0;
    while (done < 100) {
      const cplx z = random_disk_point(1.5);
      const double r = uniform(0.05, 1.5);
      if (std::abs(std::abs(z) - r) <= 0.05) continue;
      ++done;
      CHECK(std::abs(mean_log_circle(z, r) - std::log(std::max(std::abs(z), r))) < 1e-6);
    }
  }
}

TEST_CASE("class membership") {
  SUBCASE("property: exact rule for powers") {
    for (double p : {-2.5, -2.0, -1.9, -1.0, 0.0, 1.0}) {
      const auto r = class_membership(DiskFunction::power(p));
      CAPTURE(p);
      CHECK(r.exact);
      CHECK(r.levels.empty());
      CHECK(r.verdict == (p > -2.0 ? Verdict::in_Ab : Verdict::not_in_A_evidence));
    }
  }
  SUBCASE("|poly|^2 is in A^b") {
    const auto r = class_membership(DiskFunction::abs_poly_sq(Poly{1.0, 0.0, 3.0}));
    CHECK(r.exact);
    CHECK(r.verdict == Verdict::in_Ab);
  }
  SUBCASE("numerical evidence agrees with the exact rule away from p = -2") {
    auto custom = [](double p) {
      return DiskFunction::from([p](cplx z) { return std::pow(1.0 - std::norm(z), p); }, true);
    };
    const auto in = class_membership(custom(-1.0));
    CHECK_FALSE(in.exact);
    CHECK(in.verdict == Verdict::in_Ab);
    CHECK(in.levels.size() == 12);
    // int (1 - r^2)^{-1} (1 - r^2) over the disk is pi
    CHECK(in.mass.back() == doctest::Approx(kPi).epsilon(1e-3));
    CHECK(class_membership(custom(-3.0)).verdict == Verdict::not_in_A_evidence);
    CHECK(class_membership(DiskFunction::from([](cplx) { return 1.0; })).verdict == Verdict::in_Ab);
  }
  SUBCASE("trend classification") {
    const ClassOptions opt;
    std::vector<double> geometric;
    for (int k = 1; k <= 10; ++k) geometric.push_back(2.0 - std::ldexp(1.0, -k));
    CHECK(classify_trend(geometric, opt) == Trend::bounded);
    // the extrapolated tail 1/32 is still above 1% of the value
    geometric.resize(5);
    CHECK(classify_trend(geometric, opt) == Trend::unclear);
    CHECK(classify_trend({1.0, 2.0, 4.0, 8.0, 16.0, 32.0}, opt) == Trend::divergent);
  }
}

TEST_CASE("prescribed curvature equation") {
  solver::SolverConfig cfg;
  auto ustar = [](cplx z) { return -std::log(1.0 - std::norm(z)); };
  SUBCASE("alpha = 1 recovers -log(1 - |z|^2)") {
    auto g = make_grid(0.8, 32, 64);
    const auto s = solve_curvature(Poly::constant(1.0), g, cfg, ustar);
    CHECK(s.report.converged);
    double err = 0.0;
    for (int p = 0; p < g->size(); ++p) err = std::max(err, std::abs(s.u[static_cast<size_t>(p)] - ustar(g->z(p))));
    CHECK(err < 2e-3);
  }
  SUBCASE("alpha = 0 with zero data") {
    auto g = make_grid(0.8, 8, 16);
    const auto s = solve_curvature(Poly{}, g, cfg, [](cplx) { return 0.0; });
    for (double x : s.u) CHECK(std::abs(x) < 1e-12);
  }
  SUBCASE("alpha = z against the radial shooting oracle") {
    const double R = 0.8, uR = 0.3;
    auto g = make_grid(R, 48, 96);
    const auto s = solve_curvature(Poly::monomial(1.0, 1), g, cfg, [uR](cplx) { return uR; });
    REQUIRE(s.report.converged);
    std::vector<double> radii;
    for (int i = 0; i < g->nr(); ++i) radii.push_back(g->r(i));
    const auto w = oracle::radial_bvp([](double r, double u) { return r * r * std::exp(2.0 * u); }, R, uR, radii);
    double err = 0.0;
    for (int p = 0; p < g->size(); ++p) err = std::max(err, std::abs(s.u[static_cast<size_t>(p)] - w[static_cast<size_t>(g->ring(p))]));
    CHECK(err < 1e-4);
  }
  SUBCASE("property: iterates decrease from the supersolution") {
    auto g = make_grid(0.8, 16, 32);
    for (const Poly& a : {Poly::constant(1.0), Poly{0.5, 1.0}, Poly::monomial(2.0, 2)}) {
      const auto s = solve_curvature(a, g, cfg, ustar);
      CHECK(s.monotone);
      CHECK(s.max_increase <= 1e-9);
    }
  }
}

TEST_CASE("Kraus necessity bound") {
  SUBCASE("u = 0") {
    auto g = make_grid(0.9, 16, 32);
    const std::vector<double> zero(static_cast<size_t>(g->size()), 0.0);
    const auto r = kraus_necessity_check(*g, zero, zero);
    CHECK(r.holds);
    for (double v : r.potential) CHECK(v == 0.0);
  }
  SUBCASE("synthetic u = 1 - |z|^2, |Lap u| = 4") {
    auto g = make_grid(0.9, 24, 48);
    std::vector<double> u, f(static_cast<size_t>(g->size()), 4.0);
    for (int p = 0; p < g->size(); ++p) u.push_back(1.0 - std::norm(g->z(p)));
    const auto r = kraus_necessity_check(*g, u, f);
    CHECK(r.M == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.holds);
    // sup is attained at the centre: 4 * 2pi * R^2 / 4
    CHECK(r.potential.back() == doctest::Approx(2.0 * kPi * 0.81).epsilon(2e-2));
  }
  SUBCASE("curvature solution with alpha = 1") {
    auto g = make_grid(0.9, 24, 48);
    const auto s = solve_curvature(Poly::constant(1.0), g, solver::SolverConfig{},
                                   [](cplx z) { return -std::log(1.0 - std::norm(z)); });
    std::vector<double> f;
    for (double x : s.u) f.push_back(4.0 * std::exp(2.0 * x));
    const auto r = kraus_necessity_check(*g, s.u, f);
    CHECK(r.holds);
    CHECK(r.potential.back() <= r.bound);
  }
}

TEST_CASE("perturbed existence conditions") {
  auto zero = [](cplx) { return Mat(Mat::Zero(2, 2)); };
  auto link = [](std::function<cplx(cplx)> a) {
    return [a](cplx z) {
      Mat M = Mat::Zero(2, 2);
      M(1, 0) = a(z);
      return M;
    };
  };
  PerturbationData d;
  d.theta0 = zero;
  d.xi = zero;
  d.dxi = zero;
  d.h1 = [](cplx) { return Mat(Mat::Identity(2, 2)); };
  d.radial = true;
  SUBCASE("phi = xi = 0") {
    d.phi = zero;
    const auto r = perturbed_existence_conditions(d);
    CHECK(r.existence);
    CHECK(r.mutually_bounded);
  }
  SUBCASE("chain link alpha = 1 gives |phi|^2 = 2") {
    d.phi = link([](cplx) { return cplx(1.0); });
    const auto r = perturbed_existence_conditions(d);
    CHECK(r.phi_sq.verdict == Verdict::in_Ab);
    CHECK(r.phi_sq.mass.back() == doctest::Approx(2.0 * kPi / 2.0).epsilon(1e-3));
    CHECK(r.mutually_bounded);
  }
  SUBCASE("growth envelopes") {
    d.phi = link([](cplx z) { return cplx(std::pow(1.0 - std::norm(z), -0.5)); });
    CHECK(perturbed_existence_conditions(d).mutually_bounded);
    d.phi = link([](cplx z) { return cplx(std::pow(1.0 - std::norm(z), -1.5)); });
    const auto r = perturbed_existence_conditions(d);
    CHECK(r.phi_sq.verdict == Verdict::not_in_A_evidence);
    CHECK_FALSE(r.existence);
  }
}

TEST_CASE("chain necessary condition") {
  SUBCASE("n = 2 reduces to the curvature criterion") {
    const auto r = chain_necessary_condition({Poly{0.0, 2.0}});
    CHECK(r.hypothesis);
    CHECK(r.N == 1);
    CHECK((r.alpha - Poly{0.0, 2.0}).is_zero(1e-12));
  }
  SUBCASE("n = 3 with gamma = (z, z)") {
    const auto r = chain_necessary_condition({Poly::monomial(1.0, 1), Poly::monomial(1.0, 1)});
    CHECK(r.hypothesis);
    CHECK(r.N == 4);
    CHECK(r.alpha.degree() == 1);
    CHECK(std::abs(std::abs(r.alpha.c[1]) - 1.0) < 1e-12);
    REQUIRE(r.r.size() == 2);
    CHECK(r.r[0] == doctest::Approx(1.0));
    CHECK(r.coefficient == doctest::Approx(1.0));
    CHECK(r.alpha_class.verdict == Verdict::in_Ab);
  }
  SUBCASE("unit links") {
    const auto r = chain_necessary_condition({Poly::constant(1.0), Poly::constant(1.0), Poly::constant(1.0)});
    CHECK(r.hypothesis);
    CHECK(r.N == 10);
    CHECK(r.alpha_class.verdict == Verdict::in_Ab);
  }
  SUBCASE("non-factorable product") {
    const auto r = chain_necessary_condition({Poly{1.0, 1.0}, Poly::monomial(1.0, 1)});
    CHECK_FALSE(r.hypothesis);
    CHECK(r.message.find("not verified") != std::string::npos);
  }
}
