#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "hitchin/analysis.hpp"
#include "hitchin/gauge.hpp"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/io.hpp"
#include "hitchin/linalg.hpp"
#include "hitchin/realforms.hpp"
#include "hitchin/solver.hpp"

namespace lab {

using nlohmann::json;
using namespace hitchin;

namespace {

solver::SolverConfig config(const JobSpec& job) {
  solver::SolverConfig cfg;
  cfg.tol = job.tol;
  cfg.max_iter = job.max_iter;
  if (!job.schedule.empty()) cfg.schedule = job.schedule;
  cfg.obs_radius = job.observe_radius;
  cfg.exhaust_tol = job.exhaust_tol;
  cfg.compat = job.compat;
  cfg.deterministic = job.deterministic;
  cfg.nr = job.nr;
  cfg.nt = job.nt;
  cfg.grading = job.grading;
  return cfg;
}

GridPtr make_grid(const JobSpec& job) { return std::make_shared<Grid>(job.radius, job.nr, job.nt, job.grading); }

Poly poly(const json& j, const char* what) {
  try {
    return io::parse_poly(j.dump());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

DifferentialTuple tuple(const JobSpec& job) {
  if (job.n < 2) throw UsageError("companion data needs n >= 2");
  try {
    DifferentialTuple t = io::parse_tuple(job.q.dump(), job.n);
    if (t.n != job.n) throw UsageError("tuple rank disagrees with --n");
    return t;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("q: ") + e.what());
  }
}

json report_json(const solver::SolveReport& r) { return json::parse(io::solve_report_json(r)); }

double max_of(const std::vector<double>& v) {
  double m = -INFINITY;
  for (const double x : v) m = std::max(m, x);
  return m;
}

std::vector<double> component_max(const std::vector<std::vector<double>>& v) {
  std::vector<double> out;
  for (const auto& row : v) out.push_back(max_of(row));
  return out;
}

// kappa-fixed direction diag((n + 1 - 2k) / (n - 1)), k = 1..n.
Mat perturbed_hx(int n, cplx z, double eps) {
  Mat G = hyperbolic::hx_metric(n, z);
  for (int k = 1; k <= n; ++k)
    G(k - 1, k - 1) *= std::exp(eps * (n + 1 - 2 * k) / std::max(1, n - 1));
  return G;
}

Outcome solve_hitchin(const JobSpec& job) {
  Outcome o;
  const auto q = tuple(job);
  const int n = q.n;
  auto grid = make_grid(job);
  auto cfg = config(job);
  const HiggsField A = companion_field(q);
  auto hx = [n](cplx z) { return hyperbolic::hx_metric(n, z); };

  MetricField H;
  solver::SolveReport rep;
  if (job.path == "toda") {
    for (int j = 2; j < n; ++j)
      if (!q.Q(j).is_zero(1e-14))
        throw HypothesisError("the Toda path needs q = 0 or a cyclic tuple (0, ..., 0, q_n)");
    std::vector<Poly> gamma(static_cast<size_t>(n - 1), Poly::constant(1.0));
    auto wb = [&](cplx z) { return solver::metric_to_toda(hx(z)); };
    auto t = q.Q(n).is_zero(1e-14) ? solver::solve_toda_chain(gamma, wb, grid, cfg)
                                   : solver::solve_toda_cyclic(gamma, q.Q(n), wb, grid, cfg);
    H = solver::toda_to_metric(t);
    rep = t.report;
  } else {
    std::tie(H, rep) = solver::solve_dirichlet(A, hx, grid, cfg);
  }
  const MetricField ref = hyperbolic::hx_field(grid, n);
  const auto energy = solver::energy_density(H, A);
  const auto margins = weak_domination_margins(H, ref);
  o.report["solve"] = report_json(rep);
  o.report["energy"] = {{"inf", energy.inf}, {"sup", energy.sup}, {"bound", n * n * (n * n - 1) / 6.0}};
  o.report["max_v"] = component_max(margins);
  o.report["compat_defect"] = max_of(compatibility_defect(H, PairingMatrix::antidiagonal(n)));
  o.artifacts["field.csv"] = io::metric_csv(H);
  o.artifacts["energy.dat"] = io::scalar_gnuplot(*grid, energy.e);
  o.exit_code = rep.converged ? kOk : kNotConverged;
  return o;
}

Outcome solve_chain(const JobSpec& job) {
  Outcome o;
  if (!job.links.is_array() || job.links.empty()) throw UsageError("solve-chain needs --links [p1, p2, ...]");
  std::vector<Poly> gamma;
  for (const auto& l : job.links) gamma.push_back(poly(l, "links"));
  const int n = static_cast<int>(gamma.size()) + 1;
  auto grid = make_grid(job);
  auto t = solver::solve_toda_chain(
      gamma, [n](cplx z) { return solver::metric_to_toda(hyperbolic::hx_metric(n, z)); }, grid, config(job));
  const MetricField H = solver::toda_to_metric(t);
  const auto cc = analysis::chain_necessary_condition(gamma);
  o.report["solve"] = report_json(t.report);
  o.report["max_v"] = component_max(weak_domination_margins(H, hyperbolic::hx_field(grid, n)));
  o.report["chain_condition"] = {{"hypothesis", cc.hypothesis}, {"message", cc.message}, {"N", cc.N},
                                 {"alpha", json::parse(io::poly_json(cc.alpha))},
                                 {"alpha_class", analysis::to_string(cc.alpha_class.verdict)}};
  o.artifacts["field.csv"] = io::metric_csv(H);
  o.exit_code = t.report.converged ? kOk : kNotConverged;
  return o;
}

Outcome solve_curvature(const JobSpec& job) {
  Outcome o;
  const Poly alpha = poly(job.alpha, "alpha");
  auto grid = make_grid(job);
  auto ustar = [](cplx z) { return -std::log(1.0 - std::norm(z)); };
  const auto s = analysis::solve_curvature(alpha, grid, config(job), ustar);
  o.report["solve"] = report_json(s.report);
  o.report["monotone"] = s.monotone;
  o.report["max_increase"] = s.max_increase;
  o.report["boundary"] = "-log(1 - |z|^2)";
  const Poly a = alpha.trimmed(1e-15);
  if (a.degree() == 0 && std::abs(a.c[0] - cplx(1.0)) < 1e-15) {
    double err = 0.0;
    for (int p = 0; p < grid->size(); ++p) err = std::max(err, std::abs(s.u[static_cast<size_t>(p)] - ustar(grid->z(p))));
    o.report["exact_error"] = err;
  }
  o.artifacts["u.dat"] = io::scalar_gnuplot(*grid, s.u);
  o.exit_code = s.report.converged ? kOk : kNotConverged;
  return o;
}

json exhaust_json(const solver::ExhaustResult& r) {
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back(report_json(s));
  bool decreasing = true;
  for (size_t m = 1; m < r.d.size(); ++m) decreasing = decreasing && r.d[m] < r.d[m - 1];
  return {{"radii", r.radii},           {"d", r.d},
          {"d_decreasing", decreasing}, {"converged", r.converged},
          {"all_stages_converged", r.all_stages_converged}, {"stages", stages},
          {"message", r.message}};
}

std::string dm_csv(const solver::ExhaustResult& r) {
  std::ostringstream os;
  os.precision(12);
  os << "m,radius,d_m\n";
  for (size_t m = 0; m < r.d.size(); ++m) os << m + 1 << ',' << r.radii[m + 1] << ',' << r.d[m] << '\n';
  return os.str();
}

Outcome exhaust(const JobSpec& job) {
  Outcome o;
  const auto q = tuple(job);
  auto cfg = config(job);
  const auto r = solver::exhaust(companion_field(q), {}, cfg);
  o.report["exhaust"] = exhaust_json(r);
  o.artifacts["dm.csv"] = dm_csv(r);
  if (r.last.grid) o.artifacts["field.csv"] = io::metric_csv(r.last);
  o.exit_code = r.all_stages_converged ? kOk : kNotConverged;
  return o;
}

Outcome uniqueness(const JobSpec& job) {
  Outcome o;
  const auto q = tuple(job);
  const int n = q.n;
  auto cfg = config(job);
  const double eps = job.eps;
  const auto u = solver::uniqueness_probe(
      companion_field(q), [n](cplx z) { return hyperbolic::hx_metric(n, z); },
      [n, eps](cplx z) { return perturbed_hx(n, z, eps); }, cfg);
  o.report["distance"] = u.distance;
  o.report["limit_distance"] = u.limit_distance;
  o.report["stage_distance"] = u.stage_distance;
  o.report["within_tolerance"] = u.limit_distance <= job.exhaust_tol;
  o.report["a"] = exhaust_json(u.a);
  o.report["b"] = exhaust_json(u.b);
  o.artifacts["dm.csv"] = dm_csv(u.a);
  o.exit_code = u.a.all_stages_converged && u.b.all_stages_converged ? kOk : kNotConverged;
  return o;
}

analysis::DiskFunction disk_function(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "power") return analysis::DiskFunction::power(std::stod(rest));
    if (kind == "abs_poly_sq") return analysis::DiskFunction::abs_poly_sq(io::parse_poly(rest));
    if (kind == "weighted") {
      // weighted:p:<poly> is (1 - |z|^2)^p |poly|^2, classified numerically.
      const auto c2 = rest.find(':');
      const double p = std::stod(rest.substr(0, c2));
      const Poly a = io::parse_poly(rest.substr(c2 + 1));
      return analysis::DiskFunction::from(
          [p, a](cplx z) { return std::pow(1.0 - std::norm(z), p) * std::norm(a(z)); }, a.degree() <= 0);
    }
  } catch (const std::exception& e) {
    throw UsageError("bad --f '" + spec + "': " + e.what());
  }
  throw UsageError("--f must be power:<p>, abs_poly_sq:<poly> or weighted:<p>:<poly>");
}

json class_json(const analysis::ClassReport& r) {
  return {{"verdict", analysis::to_string(r.verdict)}, {"exact", r.exact}, {"levels", r.levels},
          {"mass", r.mass}, {"potential", r.potential}, {"note", r.note}};
}

Outcome classify_ab(const JobSpec& job) {
  Outcome o;
  o.report["class"] = class_json(analysis::class_membership(disk_function(job.f)));
  return o;
}

json qmatrix_json(const exact::QPolyMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(json::parse(io::qpoly_json(m(i, j))));
    rows.push_back(row);
  }
  return rows;
}

Outcome gauge_normalize(const JobSpec& job) {
  Outcome o;
  exact::QPolyMatrix theta;
  try {
    theta = io::parse_qpoly_matrix(job.theta.dump());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("theta: ") + e.what());
  }
  const auto r = gauge::normalize_to_companion(theta);
  json q = json::object();
  for (size_t j = 0; j < r.q.size(); ++j) q[std::to_string(j + 2)] = json::parse(io::qpoly_json(r.q[j]));
  o.report["q"] = q;
  o.report["g"] = qmatrix_json(r.g);
  o.report["charpoly_check"] = r.charpoly_check ? "pass" : "fail";
  o.exit_code = r.charpoly_check ? kOk : kNotConverged;
  return o;
}

struct Stages {
  bool rss, graded, full;
};
Stages stages(const JobSpec& job) {
  if (!job.check_rss && !job.solve_graded && !job.solve_full) return {true, true, false};
  return {job.check_rss, job.solve_graded || job.solve_full, job.solve_full};
}

json realform_json(const realforms::RealFormSolve& s) {
  json j{{"graded", report_json(s.chain_report)}, {"graded_structure_defect", s.chain_defect}};
  if (s.full_done) {
    j["full"] = report_json(s.full_report);
    j["full_structure_defect"] = s.full_defect;
    j["domination_margin"] = s.domination_margin;
  }
  return j;
}

int realform_exit(const realforms::RealFormSolve& s) {
  const bool ok = s.chain_report.converged && (!s.full_done || s.full_report.converged);
  return ok ? kOk : kNotConverged;
}

Outcome collier(const JobSpec& job) {
  Outcome o;
  realforms::SOData d;
  d.n = job.n;
  d.hM = job.hM;
  d.mu = poly(job.mu, "mu");
  d.nu = poly(job.nu, "nu");
  if (job.q.is_array()) {
    for (const auto& x : job.q) d.q.push_back(poly(x, "q"));
  } else if (!job.q.empty()) {
    throw UsageError("collier expects --q as a list [q2, q4, ...]");
  }
  if (static_cast<int>(d.q.size()) > d.n - 1) throw UsageError("collier takes at most n - 1 differentials");
  d.q.resize(static_cast<size_t>(std::max(0, d.n - 1)));
  const Stages st = stages(job);
  if (st.rss) {
    const auto r = realforms::so_regular_semisimple(d, 64, job.seed);
    const auto ex = realforms::so_existence_condition(d, job.envelope);
    o.report["rss"] = {{"found", r.found}, {"witness", {r.witness.real(), r.witness.imag()}}, {"samples", r.samples},
                       {"label", r.label}};
    o.report["existence"] = {{"nonzero_mu", ex.nonzero}, {"in_A", ex.in_A}, {"message", ex.message},
                             {"weight", class_json(ex.weight)}};
    if (!ex.nonzero) {
      o.exit_code = kHypothesis;
      return o;
    }
  }
  if (st.graded) {
    const auto s = realforms::collier_solve(d, make_grid(job), config(job), st.full);
    o.report["solve"] = realform_json(s);
    o.artifacts["graded.csv"] = io::metric_csv(s.chain_metric);
    if (s.full_done) o.artifacts["full.csv"] = io::metric_csv(s.full);
    o.exit_code = realform_exit(s);
  }
  return o;
}

Outcome gothen(const JobSpec& job) {
  Outcome o;
  realforms::Sp4Data d;
  d.hL = job.hL;
  d.mu = poly(job.mu, "mu");
  d.nu = poly(job.nu, "nu");
  d.q2 = poly(job.q2, "q2");
  const Stages st = stages(job);
  if (st.rss) {
    o.report["rss"] = {{"polynomial_test", realforms::sp4_regular_semisimple(d)},
                       {"sampled", realforms::sp4_regular_semisimple_bruteforce(d, 100, job.seed)}};
  }
  auto grid = make_grid(job);
  if (d.mu.is_zero(1e-14) && d.nu.is_zero(1e-14) && d.q2.is_zero(1e-14)) {
    const auto H = sample_metric(grid, [&](cplx z) { return realforms::sp4_closed_form(d.hL, z); });
    o.report["closed_form_residual"] = solver::sup_norm(solver::hitchin_residual(H, realforms::sp4_field(d)));
  }
  if (st.graded) {
    const auto s = realforms::gothen_solve(d, grid, config(job), st.full);
    o.report["solve"] = realform_json(s);
    o.artifacts["graded.csv"] = io::metric_csv(s.chain_metric);
    if (s.full_done) o.artifacts["full.csv"] = io::metric_csv(s.full);
    o.exit_code = realform_exit(s);
  }
  return o;
}

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Outcome verify_linalg(const JobSpec& job) {
  Outcome o;
  std::mt19937_64 rng(job.seed);
  int failures = 0, skipped = 0;
  double worst = 0.0;
  json counterexample;
  if (job.suite == "triangular") {
    for (int s = 0; s < job.samples; ++s) {
      const auto d = linalg::random_triangular_frame(2 + s % 3, rng);
      const Mat inv = d.P.inverse();
      const double rel = linalg::max_abs(linalg::triangular_inverse(d.P) - inv) / linalg::max_abs(inv);
      const auto r = linalg::verify_bound_main(d);
      if (!r.hypotheses) {
        ++skipped;
        continue;
      }
      worst = std::max(worst, r.worst_ratio);
      if (rel > 1e-10 || !r.holds) {
        if (failures++ == 0)
          counterexample = {{"P", matrix_json(d.P)}, {"A", matrix_json(d.A)}, {"c", d.c}, {"d", d.d}, {"e", d.e},
                            {"inverse_error", rel}, {"worst_ratio", r.worst_ratio}};
      }
    }
  } else if (job.suite == "cyclic") {
    for (int s = 0; s < job.samples; ++s) {
      const int n = 2 + s % 3;
      const auto t = linalg::random_compat_triple(n, rng);
      Vec v = Vec::Zero(n);
      v(0) = 1.0;
      const auto r = linalg::verify_cyclic_perturbation(t.f, v, t.G, t.A, t.rho, 1, rng);
      worst = std::max(worst, r.min_ratio > 0 ? 1.0 / r.min_ratio : INFINITY);
      if (r.failures > 0 || r.omega_violations > 0) {
        if (failures++ == 0)
          counterexample = {{"f", matrix_json(t.f)}, {"G", matrix_json(t.G)}, {"A", t.A}, {"rho", t.rho},
                            {"omega_violations", r.omega_violations}};
      }
    }
  } else {
    std::uniform_real_distribution<double> target(0.01, 0.9);
    for (int s = 0; s < job.samples; ++s) {
      const auto t = linalg::random_compat_triple(2 + s % 3, rng);
      const Mat G2 = linalg::random_compatible_neighbour(t, target(rng), rng);
      const auto r = linalg::closeness_verify(t, t.G, G2);
      if (!r.preconditions || !r.in_regime) {
        ++skipped;
        continue;
      }
      worst = std::max(worst, r.distance / (r.C1 * r.eps));
      if (!r.holds && failures++ == 0)
        counterexample = {{"G", matrix_json(t.G)}, {"G2", matrix_json(G2)}, {"S", matrix_json(t.S)},
                          {"f", matrix_json(t.f)}, {"eps", r.eps}, {"distance", r.distance}, {"C1", r.C1}};
    }
  }
  o.report["verdict"] = failures == 0 ? "pass" : "fail";
  o.report["samples"] = job.samples;
  o.report["skipped"] = skipped;
  o.report["failures"] = failures;
  o.report["worst_ratio"] = worst;
  if (failures) o.report["counterexample"] = counterexample;
  o.exit_code = failures == 0 ? kOk : kNotConverged;
  return o;
}

Outcome dispatch(const JobSpec& job) {
  const std::string& c = job.command;
  if (c == "solve-hitchin") return solve_hitchin(job);
  if (c == "solve-chain") return solve_chain(job);
  if (c == "solve-curvature") return solve_curvature(job);
  if (c == "exhaust") return exhaust(job);
  if (c == "uniqueness") return uniqueness(job);
  if (c == "classify-ab") return classify_ab(job);
  if (c == "gauge-normalize") return gauge_normalize(job);
  if (c == "collier") return collier(job);
  if (c == "gothen") return gothen(job);
  if (c == "verify") return verify_linalg(job);
  throw UsageError("unknown command: " + c);
}

const char* status_name(int code) {
  switch (code) {
    case kOk: return "ok";
    case kUsage: return "usage_error";
    case kNotConverged: return "not_converged";
    default: return "hypothesis_violation";
  }
}

}  // namespace

Outcome run(const JobSpec& job) {
  Outcome o;
  try {
    job.validate();
    o = dispatch(job);
  } catch (const UsageError& e) {
    o = {};
    o.exit_code = kUsage;
    o.report["error"] = e.what();
  } catch (const HypothesisError& e) {
    o = {};
    o.exit_code = kHypothesis;
    o.report["error"] = e.what();
  } catch (const PDViolation& e) {
    o = {};
    o.exit_code = kNotConverged;
    o.report["error"] = e.what();
    o.report["node"] = e.node();
  } catch (const std::invalid_argument& e) {
    o = {};
    o.exit_code = kUsage;
    o.report["error"] = e.what();
  } catch (const std::exception& e) {
    o = {};
    o.exit_code = kNotConverged;
    o.report["error"] = e.what();
  }
  o.report["job"] = job.to_json();
  o.report["status"] = status_name(o.exit_code);
  o.report["exit_code"] = o.exit_code;
  return o;
}

void write_artifacts(const Outcome& o, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / "report.json") << o.report.dump(2) << '\n';
  for (const auto& [name, body] : o.artifacts) std::ofstream(fs::path(dir) / name) << body;
}

int worker_count() {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HITCHIN_LAB_THREADS")) {
    try {
      const int k = std::stoi(env);
      if (k >= 1) return std::min(k, hw);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

}  // namespace lab
