// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "hitchin/analysis.hpp"
#include "hitchin/gauge.hpp"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/linalg.hpp"
#include "hitchin/realforms.hpp"
#include "hitchin/solver.hpp"

using namespace hitchin;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", k, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

solver::BoundaryFn hx(int n) {
  return [n](cplx z) { return hyperbolic::hx_metric(n, z); };
}

DifferentialTuple tuple(int n, std::initializer_list<std::pair<int, Poly>> entries) {
  DifferentialTuple q(n);
  for (const auto& [j, p] : entries) q.Q(j) = p;
  return q;
}

const Poly z1 = Poly::monomial(1.0, 1);

void criterion1() {
  bool ok = true;
  std::ostringstream os;
  for (int n : {2, 3}) {
    std::vector<double> res;
    double worst_time = 0.0;
    for (int level = 0; level < 3; ++level) {
      const auto t0 = std::chrono::steady_clock::now();
      auto g = make_grid(0.7, 32 << level, 64 << level);
      res.push_back(solver::sup_norm(solver::hitchin_residual(hyperbolic::hx_field(g, n), companion_field(DifferentialTuple(n)))));
      worst_time = std::max(worst_time, seconds_since(t0));
    }
    const double r1 = res[0] / res[1], r2 = res[1] / res[2];
    ok = ok && r1 > 3.0 && r2 > 3.0 && res[2] <= 5e-4 && worst_time <= 60.0;
    os << fmt("n=%d residual %.2e -> %.2e -> %.2e (ratios %.2f, %.2f, %.1fs/level max); ", n, res[0], res[1], res[2],
              r1, r2, worst_time);
  }
  report(1, ok, os.str() + "h_X at R = 0.7");
}

void criterion2() {
  auto ustar = [](cplx z) { return -std::log(1.0 - std::norm(z)); };
  std::vector<double> err;
  bool conv = true;
  for (int level = 0; level < 3; ++level) {
    auto g = make_grid(0.9, 32 << level, 64 << level);
    const auto s = analysis::solve_curvature(Poly::constant(1.0), g, solver::SolverConfig{}, ustar);
    conv = conv && s.report.converged;
    double e = 0.0;
    for (int p = 0; p < g->size(); ++p) e = std::max(e, std::abs(s.u[static_cast<size_t>(p)] - ustar(g->z(p))));
    err.push_back(e);
  }
  const bool ok = conv && err[2] <= 1e-4 && err[0] / err[1] > 3.0 && err[1] / err[2] > 3.0;
  report(2, ok, fmt("alpha = 1, R = 0.9: max |u - u*| %.2e -> %.2e -> %.2e at 128x256", err[0], err[1], err[2]));
}

struct Run {
  std::string label;
  int n;
  DifferentialTuple q;
  MetricField H;
  solver::SolveReport rep;
};

std::vector<Run> domination_runs() {
  std::vector<Run> runs{{"n=2 q2=z", 2, tuple(2, {{2, z1}}), {}, {}},
                        {"n=2 q2=0.3", 2, tuple(2, {{2, Poly::constant(0.3)}}), {}, {}},
                        {"n=2 q2=z^2", 2, tuple(2, {{2, Poly::monomial(1.0, 2)}}), {}, {}},
                        {"n=3 q=(0,z)", 3, tuple(3, {{3, z1}}), {}, {}}};
  solver::SolverConfig cfg;
  for (auto& r : runs) {
    auto g = make_grid(0.8, 32, 64);
    std::tie(r.H, r.rep) = solver::solve_dirichlet(companion_field(r.q), hx(r.n), g, cfg);
  }
  return runs;
}

void criterion3(const std::vector<Run>& runs) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : runs) {
    double vmax = -INFINITY;
    for (const auto& vk : weak_domination_margins(r.H, hyperbolic::hx_field(r.H.grid, r.n)))
      for (double v : vk) vmax = std::max(vmax, v);
    ok = ok && r.rep.converged && vmax <= 1e-3;
    os << fmt("%s max v %.1e; ", r.label.c_str(), vmax);
  }
  report(3, ok, os.str() + "R = 0.8, 32x64");
}

void criterion4(const std::vector<Run>& runs) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : runs) {
    const double bound = r.n * r.n * (r.n * r.n - 1) / 6.0;
    const double inf = solver::energy_density(r.H, companion_field(r.q)).inf;
    ok = ok && inf >= bound - 1e-2;
    os << fmt("%s inf e %.4f (bound %g); ", r.label.c_str(), inf, bound);
  }
  // The q = 0 deviation peaks at the centre and is O(h^2); 96 rings bring it below 1e-3.
  for (int n : {2, 3}) {
    auto g = make_grid(0.8, 96, 192);
    const HiggsField A = companion_field(DifferentialTuple(n));
    auto [H, rep] = solver::solve_dirichlet(A, hx(n), g, solver::SolverConfig{});
    const auto e = solver::energy_density(H, A);
    const double bound = n * n * (n * n - 1) / 6.0;
    const double dev = std::max(std::abs(e.inf - bound), std::abs(e.sup - bound));
    ok = ok && rep.converged && dev <= 1e-3;
    os << fmt("n=%d q=0 |e - bound| %.1e at 96x192; ", n, dev);
  }
  report(4, ok, os.str() + "R = 0.8");
}

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  solver::SolverConfig cfg;
  cfg.nr = 64;
  cfg.nt = 128;
  cfg.schedule = solver::SolverConfig::radius_schedule(0.6, 5);
  cfg.obs_radius = 0.5;
  const double eps = 0.1;
  // exp(eps * diag(1, -1)) commutes with h_X and preserves det = 1 and the pairing.
  auto perturbed = [eps](cplx z) {
    Mat G = hyperbolic::hx_metric(2, z);
    G(0, 0) *= std::exp(eps);
    G(1, 1) *= std::exp(-eps);
    return G;
  };
  const auto u = solver::uniqueness_probe(companion_field(tuple(2, {{2, z1}})), hx(2), perturbed, cfg);
  auto decreasing = [](const std::vector<double>& d) {
    for (size_t m = 1; m < d.size(); ++m)
      if (!(d[m] < d[m - 1])) return false;
    return true;
  };
  const double t = seconds_since(t0);
  const bool ok = u.a.all_stages_converged && u.b.all_stages_converged && decreasing(u.a.d) && decreasing(u.b.d) &&
                  u.limit_distance <= 1e-3 && t <= 600.0;
  std::ostringstream os;
  os << "d_m(h_X):";
  for (double d : u.a.d) os << fmt(" %.1e", d);
  os << "; d_m(perturbed):";
  for (double d : u.b.d) os << fmt(" %.1e", d);
  os << fmt("; distance on |z| <= 0.5 at R = 0.975 %.1e, extrapolated limit %.1e; %.0fs", u.distance,
            u.limit_distance, t);
  report(5, ok, os.str());
}

void criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> rad(0.0, 1.5), ang(0.0, 2.0 * kPi), rr(0.05, 1.5);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const cplx z = std::polar(rad(rng), ang(rng));
    const double r = rr(rng);
    if (std::abs(std::abs(z) - r) <= 0.05) continue;
    ++done;
    worst = std::max(worst, std::abs(analysis::mean_log_circle(z, r) - std::log(std::max(std::abs(z), r))));
  }
  bool classes = true;
  for (double p : {-2.5, -2.0, -1.9, -1.0, 0.0}) {
    const auto c = analysis::class_membership(analysis::DiskFunction::power(p));
    const auto want = p > -2.0 ? analysis::Verdict::in_Ab : analysis::Verdict::not_in_A_evidence;
    classes = classes && c.exact && c.verdict == want;
  }
  const double gerr = std::abs(analysis::green(0.5, 0.25) - std::log(3.5));
  report(6, worst <= 1e-6 && classes && gerr <= 1e-12,
         fmt("mean_log_circle max error %.1e on 100 samples; power verdicts %s; |G(0.5, 0.25) - log 3.5| %.1e", worst,
             classes ? "exact" : "wrong", gerr));
}

void criterion7() {
  using namespace exact;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 3;
    const QPolyMatrix th = gauge::random_instance(n, rng);
    const auto r = gauge::normalize_to_companion(th);
    if (!r.charpoly_check || !(charpoly(th) == charpoly(r.companion))) ++bad;
  }
  const QPoly a({CQ(1), CQ(Q(-1, 2), 1)}), b({CQ(0, 2), CQ(0), CQ(3)});
  QPolyMatrix t(2);
  t(0, 0) = a;
  t(0, 1) = b;
  t(1, 0) = QPoly::constant(CQ(1));
  t(1, 1) = -a;
  const auto r = gauge::normalize_to_companion(t);
  QPolyMatrix g = QPolyMatrix::identity(2);
  g(0, 1) = -a;
  const bool worked = r.q.size() == 1 && r.q[0] == a * a + b && r.g == g;
  const double secs = seconds_since(t0);
  report(7, bad == 0 && worked && secs <= 30.0,
         fmt("%d/1000 instances with n <= 4 failed the exact charpoly check; n=2 worked case %s; %.1fs", bad,
             worked ? "matches" : "differs", secs));
}

void criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0), mag(0.5, 2.0), ph(0.0, 2.0 * kPi);
  double inv_err = 0.0;
  int inv_samples = 0;
  while (inv_samples < 10000) {
    const int n = 2 + inv_samples % 3;
    Mat P = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      P(i, i) = std::polar(mag(rng), ph(rng));
      for (int j = i + 1; j < n; ++j) P(i, j) = cplx(u(rng), u(rng));
    }
    const auto sv = P.jacobiSvd().singularValues();
    if (sv(0) / sv(n - 1) > 1e3) continue;
    ++inv_samples;
    const Mat direct = P.partialPivLu().inverse();
    inv_err = std::max(inv_err, (linalg::triangular_inverse(P) - direct).norm() / direct.norm());
  }
  int bound_fail = 0;
  for (int s = 0; s < 10000; ++s) {
    const auto r = linalg::verify_bound_main(linalg::random_triangular_frame(2 + s % 3, rng));
    if (!r.hypotheses || !r.holds) ++bound_fail;
  }
  int close_fail = 0, admissible = 0;
  std::uniform_real_distribution<double> target(0.01, 0.9);
  while (admissible < 10000) {
    const auto t = linalg::random_compat_triple(2 + admissible % 3, rng);
    const auto r = linalg::closeness_verify(t, t.G, linalg::random_compatible_neighbour(t, target(rng), rng));
    if (!r.preconditions || !r.in_regime) continue;
    ++admissible;
    if (!r.holds) ++close_fail;
  }
  const Mat J = companion_higgs(DifferentialTuple(4), 0.0);
  Vec e1 = Vec::Zero(4);
  e1(0) = 1.0;
  const auto cyc = linalg::verify_cyclic_perturbation(J, e1, Mat::Identity(4, 4), linalg::max_abs(J), 1.0, 10000, rng);
  const bool ok = inv_err <= 1e-10 && bound_fail == 0 && close_fail == 0 && cyc.failures == 0 && cyc.omega_violations == 0;
  report(8, ok,
         fmt("triangular inverse rel. error %.1e; bound counterexamples %d/10000; closeness counterexamples %d/10000; "
             "omega violations %d/10000",
             inv_err, bound_fail, close_fail, cyc.omega_violations));
}

void criterion9() {
  using namespace realforms;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rmat = [&](int r, int c) {
    Mat M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = cplx(u(rng), u(rng));
    return M;
  };
  auto rpoly = [&] { return Poly{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))}; };
  double block = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const int m = 1 + s % 4, n = m + s % 2;
    block = std::max(block, block_charpoly_defect(rmat(n, m), rmat(m, n)));
  }
  int disagree = 0;
  for (int s = 0; s < 1000; ++s) {
    Sp4Data d;
    d.mu = s % 4 == 1 ? Poly{} : rpoly();
    d.nu = s % 4 == 2 ? Poly{} : rpoly();
    d.q2 = rpoly();
    if (s % 4 == 3) {
      d.nu = Poly::constant(1.0);
      d.mu = d.q2 * d.q2;
    }
    if (sp4_regular_semisimple(d) != sp4_regular_semisimple_bruteforce(d, 100, 900 + static_cast<std::uint64_t>(s)))
      ++disagree;
  }
  Sp4Data zero;
  std::vector<double> res;
  for (int level = 0; level < 3; ++level) {
    auto g = make_grid(0.7, 16 << level, 32 << level);
    res.push_back(solver::sup_norm(
        solver::hitchin_residual(sample_metric(g, [](cplx z) { return sp4_closed_form(1.5, z); }), sp4_field(zero))));
  }
  SOData so;
  so.n = 2;
  so.mu = Poly::constant(1.0);
  const auto col = collier_solve(so, make_grid(0.8, 32, 64), solver::SolverConfig{}, false);
  const bool ok = block <= 1e-10 && disagree == 0 && res[0] / res[1] > 3.0 && res[1] / res[2] > 3.0 &&
                  col.chain_report.converged && col.chain_defect <= 1e-8;
  report(9, ok,
         fmt("block charpoly defect %.1e on 1000 pairs; Sp(4) RSS disagreements %d/1000; Gothen residual ratios %.2f, "
             "%.2f; Collier n=2 mu=1 chain residual %.1e, structure defect %.1e",
             block, disagree, res[0] / res[1], res[1] / res[2], col.chain_report.residual, col.chain_defect));
}

void criterion10(const std::vector<Run>& runs) {
  const Run& r3 = runs.back();
  GridPtr g = r3.H.grid;
  const HiggsField A = companion_field(r3.q);
  auto shifted = [](cplx z) {
    Mat G = hyperbolic::hx_metric(3, z);
    G(0, 0) *= std::exp(0.2);
    G(2, 2) *= std::exp(-0.2);
    return G;
  };
  auto [H2, rep2] = solver::solve_dirichlet(A, shifted, g, solver::SolverConfig{});
  const auto genuine = solver::subharmonicity_check(r3.H, H2, 1e-6);
  MetricField bad = H2;
  for (int p = 0; p < g->size(); ++p) {
    const double bump = 0.5 * std::exp(-std::norm(g->z(p) - cplx(0.3, 0.0)) / 0.01);
    bad.H[static_cast<size_t>(p)](0, 0) *= std::exp(bump);
    bad.H[static_cast<size_t>(p)](2, 2) *= std::exp(-bump);
  }
  const auto corrupted = solver::subharmonicity_check(r3.H, bad, 1e-6);

  const auto sys = solver::domination_system(r3.H, hyperbolic::hx_field(g, 3), {Poly::constant(1.0), Poly::constant(1.0)});
  // The discrete subsolution inequality holds up to O(h^2) on the outermost ring.
  const auto mp = solver::maximum_principle_check(sys.v, sys.c, *g, 1e-3);
  std::vector<std::vector<double>> u(2, std::vector<double>(static_cast<size_t>(g->size()), 0.0)), c = u;
  u[0][static_cast<size_t>(g->index(g->nr() / 2, 3))] = 1.0;
  const auto spike = solver::maximum_principle_check(u, c, *g, 1e-9);
  const bool ok = rep2.converged && genuine.ok && !corrupted.ok && mp.holds && !spike.holds;
  report(10, ok,
         fmt("subharmonicity genuine pair %s (min Lap tr %.1e), corrupted pair %s at %zu nodes; maximum principle on "
             "the n=3 domination system %s, interior-spike counterexample %s",
             genuine.ok ? "passes" : "fails", genuine.min_lap_tr, corrupted.ok ? "passes" : "flagged",
             corrupted.violations.size(), mp.holds ? "validated" : ("rejected: " + mp.failure).c_str(),
             spike.holds ? "accepted" : "rejected"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  auto guard = [](int k, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report(k, false, std::string("exception: ") + e.what());
    }
  };
  guard(1, criterion1);
  guard(2, criterion2);
  std::vector<Run> runs;
  try {
    runs = domination_runs();
  } catch (const std::exception& e) {
    for (int k : {3, 4, 10}) report(k, false, std::string("solve failed: ") + e.what());
  }
  if (!runs.empty()) {
    guard(3, [&] { criterion3(runs); });
    guard(4, [&] { criterion4(runs); });
  }
  guard(5, criterion5);
  guard(6, criterion6);
  guard(7, criterion7);
  guard(8, criterion8);
  guard(9, criterion9);
  if (!runs.empty()) guard(10, [&] { criterion10(runs); });
  std::printf("%d of 10 criteria failed (%.0fs)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
