#include <cmath>

#include "doctest.h"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/solver.hpp"
#include "oracles.hpp"

using namespace hitchin;
using namespace hitchin::solver;

namespace {

double ustar(cplx z) { return -std::log(1.0 - std::norm(z)); }

BoundaryFn hx(int n) {
  return [n](cplx z) { return hyperbolic::hx_metric(n, z); };
}

double max_diff(const MetricField& a, const MetricField& b) {
  double d = 0.0;
  for (size_t p = 0; p < a.H.size(); ++p) d = std::max(d, (a.H[p] - b.H[p]).cwiseAbs().maxCoeff());
  return d;
}

// n = 2 chain with link 1 and the diagonal metric diag(e^{-u}, e^{u}).
MetricField chain_metric(GridPtr g, const std::function<double(cplx)>& u) {
  return sample_metric(g, [&](cplx z) {
    Mat G = Mat::Zero(2, 2);
    G(0, 0) = std::exp(-u(z));
    G(1, 1) = std::exp(u(z));
    return G;
  });
}

HiggsField nilpotent2() { return companion_field(DifferentialTuple(2)); }

}  // namespace

TEST_CASE("residual vanishes for the trivial rank-one bundle") {
  auto g = make_grid(0.8, 8, 16);
  PolyMatrix zero(1, 1);
  const MetricField H(g, 1);
  CHECK(sup_norm(hitchin_residual(H, HiggsField(zero, HiggsShape::general))) == 0.0);
}

TEST_CASE("h_X residual decreases at second order") {
  for (int n : {2, 3}) {
    std::vector<double> res;
    for (int level = 0; level < 3; ++level) {
      auto g = make_grid(0.7, 16 << level, 32 << level);
      res.push_back(sup_norm(hitchin_residual(hyperbolic::hx_field(g, n), companion_field(DifferentialTuple(n)))));
    }
    CAPTURE(n);
    CHECK(res[0] / res[1] > 3.0);
    CHECK(res[1] / res[2] > 3.0);
  }
}

TEST_CASE("chain metric built from u* has a second-order residual") {
  std::vector<double> res;
  for (int level = 0; level < 3; ++level) {
    auto g = make_grid(0.7, 16 << level, 32 << level);
    res.push_back(sup_norm(hitchin_residual(chain_metric(g, ustar), nilpotent2())));
  }
  CHECK(res[0] / res[1] > 3.0);
  CHECK(res[1] / res[2] > 3.0);
  CHECK(res[2] < 1e-3);
}

TEST_CASE("Dirichlet solve with h_X boundary and q = 0 reproduces h_X") {
  auto g = make_grid(0.8, 24, 48);
  SolverConfig cfg;
  auto [H, rep] = solve_dirichlet(nilpotent2(), hx(2), g, cfg);
  CHECK(rep.converged);
  CHECK(max_diff(H, hyperbolic::hx_field(g, 2)) < 5e-3);
}

TEST_CASE("n = 2, q2 = 0.1 matches the radial shooting oracle") {
  // diag(e^{-w}, e^{w}) is harmonic for [[0, q],[1, 0]] iff (1/4) Lap w = e^{2w} - |q|^2 e^{-2w}.
  const double R = 0.8, c = 0.1;
  auto g = make_grid(R, 64, 128);
  DifferentialTuple q(2);
  q.Q(2) = Poly::constant(c);
  SolverConfig cfg;
  auto [H, rep] = solve_dirichlet(companion_field(q), hx(2), g, cfg);
  REQUIRE(rep.converged);
  std::vector<double> radii;
  for (int i = 0; i < g->nr(); ++i) radii.push_back(g->r(i));
  const double wR = -std::log(hyperbolic::hx_metric(2, R)(0, 0).real());
  const auto w = oracle::radial_bvp([c](double, double u) { return std::exp(2 * u) - c * c * std::exp(-2 * u); }, R,
                                    wR, radii);
  double err = 0.0;
  for (int p = 0; p < g->size(); ++p)
    err = std::max(err, std::abs(-std::log(H.H[static_cast<size_t>(p)](0, 0).real()) - w[static_cast<size_t>(g->ring(p))]));
  CHECK(err < 1e-4);
}

TEST_CASE("Toda chain examples") {
  auto g = make_grid(0.8, 32, 64);
  SolverConfig cfg;
  SUBCASE("zero links and zero boundary") {
    auto t = solve_toda_chain({Poly{}, Poly{}}, [](cplx) { return std::vector<double>{0.0, 0.0}; }, g, cfg);
    for (const auto& wk : t.w)
      for (double x : wk) CHECK(x == doctest::Approx(0.0));
  }
  SUBCASE("n = 2, unit link recovers u*") {
    auto t = solve_toda_chain({Poly::constant(1.0)}, [](cplx z) { return std::vector<double>{ustar(z)}; }, g, cfg);
    CHECK(t.report.converged);
    double err = 0.0;
    for (int p = 0; p < g->size(); ++p) err = std::max(err, std::abs(t.w[0][static_cast<size_t>(p)] - ustar(g->z(p))));
    CHECK(err < 2e-3);
  }
  SUBCASE("n = 3, unit links recover h_X") {
    auto t = solve_toda_chain({Poly::constant(1.0), Poly::constant(1.0)},
                              [](cplx z) { return metric_to_toda(hyperbolic::hx_metric(3, z)); }, g, cfg);
    CHECK(t.report.converged);
    CHECK(max_diff(toda_to_metric(t), hyperbolic::hx_field(g, 3)) < 5e-3);
  }
}

TEST_CASE("Toda and matrix paths agree on diagonal-admissible inputs") {
  auto g = make_grid(0.8, 16, 32);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  SUBCASE("q = 0, n = 3") {
    auto [H, rep] = solve_dirichlet(companion_field(DifferentialTuple(3)), hx(3), g, cfg);
    auto t = solve_toda_chain({Poly::constant(1.0), Poly::constant(1.0)},
                              [](cplx z) { return metric_to_toda(hyperbolic::hx_metric(3, z)); }, g, cfg);
    CHECK(max_diff(H, toda_to_metric(t)) < 1e-6);
  }
  SUBCASE("cyclic n = 3, q = (0, z^2): the matrix solution stays diagonal") {
    DifferentialTuple q(3);
    q.Q(3) = Poly::monomial(1.0, 2);
    auto [H, rep] = solve_dirichlet(companion_field(q), hx(3), g, cfg);
    REQUIRE(rep.converged);
    double off = 0.0;
    for (const auto& G : H.H) off = std::max(off, (G - Mat(G.diagonal().asDiagonal())).cwiseAbs().maxCoeff());
    CHECK(off < 1e-8);
    auto t = solve_toda_cyclic({Poly::constant(1.0), Poly::constant(1.0)}, q.Q(3),
                               [](cplx z) { return metric_to_toda(hyperbolic::hx_metric(3, z)); }, g, cfg);
    CHECK(max_diff(H, toda_to_metric(t)) < 1e-6);
  }
}

TEST_CASE("solver keeps det H = 1 and compatibility") {
  auto g = make_grid(0.8, 16, 32);
  DifferentialTuple q(3);
  q.Q(2) = Poly::monomial(1.0, 1);
  q.Q(3) = Poly{0.2, 0.1};
  SolverConfig cfg;
  cfg.compat = true;
  auto [H, rep] = solve_dirichlet(companion_field(q), hx(3), g, cfg);
  CHECK(rep.converged);
  CHECK(rep.det_drift < 1e-10);
  CHECK(rep.compat_defect < 1e-8);
  CHECK(rep.asym_residual < 1e-4);
  for (const auto& G : H.H) CHECK(std::abs(G.determinant() - 1.0) < 1e-10);
}

TEST_CASE("Dirichlet solutions weakly dominate h_X and satisfy the energy bound") {
  auto g = make_grid(0.8, 16, 32);
  SolverConfig cfg;
  for (const Poly& q2 : {Poly::monomial(1.0, 1), Poly::constant(0.3), Poly::monomial(1.0, 2)}) {
    DifferentialTuple q(2);
    q.Q(2) = q2;
    auto [H, rep] = solve_dirichlet(companion_field(q), hx(2), g, cfg);
    REQUIRE(rep.converged);
    for (const auto& vk : weak_domination_margins(H, hyperbolic::hx_field(g, 2)))
      for (double v : vk) CHECK(v <= 1e-3);
    CHECK(energy_density(H, companion_field(q)).inf >= 2.0 - 1e-2);
  }
}

TEST_CASE("energy density of h_X equals n^2 (n^2 - 1) / 6") {
  auto g = make_grid(0.8, 8, 16);
  CHECK(energy_density(hyperbolic::hx_field(g, 2), companion_field(DifferentialTuple(2))).inf == doctest::Approx(2.0));
  const auto e3 = energy_density(hyperbolic::hx_field(g, 3), companion_field(DifferentialTuple(3)));
  CHECK(e3.inf == doctest::Approx(12.0));
  CHECK(e3.sup == doctest::Approx(12.0));
}

TEST_CASE("exhaustion with q = 0 is stationary at h_X") {
  SolverConfig cfg;
  cfg.nr = 16;
  cfg.nt = 32;
  cfg.schedule = SolverConfig::radius_schedule(0.5, 3);
  const auto r = exhaust(nilpotent2(), {}, cfg);
  CHECK(r.all_stages_converged);
  for (double d : r.d) CHECK(d < 5e-3);
}

TEST_CASE("uniqueness probe with identical boundaries returns zero distance") {
  SolverConfig cfg;
  cfg.nr = 12;
  cfg.nt = 24;
  cfg.schedule = SolverConfig::radius_schedule(0.5, 2);
  DifferentialTuple q(2);
  q.Q(2) = Poly::monomial(1.0, 1);
  const auto u = uniqueness_probe(companion_field(q), hx(2), hx(2), cfg);
  CHECK(u.distance < 1e-8);
}

TEST_CASE("subharmonicity check") {
  auto g = make_grid(0.8, 16, 32);
  SolverConfig cfg;
  DifferentialTuple q(2);
  q.Q(2) = Poly::monomial(1.0, 1);
  const HiggsField A = companion_field(q);
  auto [H1, r1] = solve_dirichlet(A, hx(2), g, cfg);
  SUBCASE("identical fields") {
    const auto rep = subharmonicity_check(H1, H1, 1e-8);
    CHECK(rep.ok);
    CHECK(std::abs(rep.min_lap_tr) < 1e-8);
  }
  SUBCASE("two genuine solutions") {
    auto [H2, r2] = solve_dirichlet(
        A, [](cplx z) {
          Mat G = hyperbolic::hx_metric(2, z);
          G(0, 0) *= std::exp(0.2);
          G(1, 1) *= std::exp(-0.2);
          return G;
        },
        g, cfg);
    CHECK(subharmonicity_check(H1, H2, 1e-6).ok);
  }
  SUBCASE("corrupted field") {
    MetricField H2 = H1;
    for (int p = 0; p < g->size(); ++p) {
      const double bump = 0.5 * std::exp(-std::norm(g->z(p) - cplx(0.3, 0.0)) / 0.01);
      H2.H[static_cast<size_t>(p)](0, 0) *= std::exp(bump);
      H2.H[static_cast<size_t>(p)](1, 1) *= std::exp(-bump);
    }
    const auto rep = subharmonicity_check(H1, H2, 1e-6);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());
  }
}

TEST_CASE("maximum principle check") {
  auto g = make_grid(0.8, 12, 24);
  const size_t N = static_cast<size_t>(g->size());
  SUBCASE("u = 0") {
    const std::vector<std::vector<double>> u(2, std::vector<double>(N, 0.0)), c(2, std::vector<double>(N, 1.0));
    CHECK(maximum_principle_check(u, c, *g, 1e-9).holds);
  }
  SUBCASE("interior spike without coupling") {
    std::vector<std::vector<double>> u(2, std::vector<double>(N, 0.0)), c(2, std::vector<double>(N, 0.0));
    u[0][static_cast<size_t>(g->index(3, 5))] = 1.0;
    const auto rep = maximum_principle_check(u, c, *g, 1e-9);
    CHECK_FALSE(rep.holds);
    CHECK(rep.witness_node >= 0);
  }
  SUBCASE("domination margins of a genuine solve") {
    DifferentialTuple q(3);
    q.Q(3) = Poly::monomial(1.0, 1);
    SolverConfig cfg;
    auto [H, rep] = solve_dirichlet(companion_field(q), hx(3), g, cfg);
    const auto sys = domination_system(H, hyperbolic::hx_field(g, 3), {Poly::constant(1.0), Poly::constant(1.0)});
    // the discrete inequality fails by O(h^2) on the outermost ring
    CHECK(maximum_principle_check(sys.v, sys.c, *g, 5e-3).holds);
  }
}

TEST_CASE("first minor probe") {
  auto g = make_grid(0.8, 12, 24);
  SUBCASE("h_X") {
    const auto p = first_minor_domination_probe(hyperbolic::hx_field(g, 2));
    CHECK(p.b == doctest::Approx(1.0));
    CHECK(p.sup_s == doctest::Approx(1.0));
    CHECK(p.sup_s_inv == doctest::Approx(1.0));
  }
  SUBCASE("blown-up first minor") {
    const auto H = sample_metric(g, [](cplx z) {
      Mat G = hyperbolic::hx_metric(2, z);
      const double s = 1.0 / (1.0 - std::norm(z) / 0.65);
      G(0, 0) *= s;
      G(1, 1) /= s;
      return G;
    });
    const auto p = first_minor_domination_probe(H);
    CHECK(p.b > 10.0);
    CHECK(p.sup_s > 10.0);
  }
}
