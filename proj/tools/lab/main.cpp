#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "sweep.hpp"

namespace {

using nlohmann::json;

// Raw flag text, resolved into the JobSpec after parsing.
struct Raw {
  std::string q, links, alpha, theta, mu, nu, q2, grid, job;
  std::optional<double> envelope;
};

void solver_flags(CLI::App* c, lab::JobSpec& s, Raw& raw) {
  c->add_option("--radius", s.radius, "Disk radius for a single solve");
  c->add_option("--grid", raw.grid, "Grid size NRxNT");
  c->add_option("--grading", s.grading, "Radial grading in (0, 1]; 1 is uniform");
  c->add_option("--tol", s.tol, "Residual tolerance");
  c->add_option("--max-iter", s.max_iter, "Newton iteration cap");
  c->add_option("--schedule", s.schedule, "Exhaustion radii")->delimiter(',');
  c->add_option("--observe-radius", s.observe_radius, "Observation disk radius");
  c->add_option("--exhaust-tol", s.exhaust_tol, "Declared threshold for d_m");
  c->add_flag("--compat", s.compat, "Project iterates onto metrics compatible with the pairing");
  c->add_option("--path", s.path, "Solver path")->check(CLI::IsMember({"toda", "matrix"}));
  c->add_flag("!--parallel", s.deterministic, "Allow non-deterministic parallel sweeps");
}

void common_flags(CLI::App* c, lab::JobSpec& s) {
  c->add_option("--out", s.out, "Artifact directory");
  c->add_option("--seed", s.seed, "Random seed");
}

int emit(const lab::Outcome& o, const std::string& out) {
  std::cout << o.report.dump(2) << '\n';
  if (!out.empty()) lab::write_artifacts(o, out);
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for harmonic metrics of Higgs bundles on the disk", "hitchin-lab"};
  app.require_subcommand(1);
  lab::JobSpec s;
  Raw raw;

  auto* sh = app.add_subcommand("solve-hitchin", "Dirichlet problem for a companion Higgs field with h_X boundary data");
  auto* sc = app.add_subcommand("solve-chain", "Toda solve for a holomorphic chain of line bundles");
  auto* cu = app.add_subcommand("solve-curvature", "Prescribed curvature equation 1/4 Lap u = |alpha|^2 e^{2u}");
  auto* ex = app.add_subcommand("exhaust", "Exhaustion by growing disks");
  auto* un = app.add_subcommand("uniqueness", "Two exhaustions from different boundary data");
  auto* cl = app.add_subcommand("classify-ab", "Membership of a function in the classes A and A^b");
  auto* ga = app.add_subcommand("gauge-normalize", "Exact normalization to companion form");
  auto* co = app.add_subcommand("collier", "SO(n, n+1) family");
  auto* go = app.add_subcommand("gothen", "Sp(4, R) family");
  auto* ve = app.add_subcommand("verify", "Randomized verification suites");
  auto* sw = app.add_subcommand("sweep", "Run a parameter grid of jobs");
  auto* re = app.add_subcommand("report", "Summarize the artifacts in a directory");
  auto* rn = app.add_subcommand("run", "Run a JobSpec file");

  for (auto* c : {sh, ex, un}) {
    c->add_option("--n", s.n, "Rank")->required();
    c->add_option("--q", raw.q, "Differentials as JSON {\"2\": [...], ...} or a file");
  }
  for (auto* c : {sh, sc, cu, ex, un, co, go}) solver_flags(c, s, raw);
  for (auto* c : {sh, sc, cu, ex, un, cl, ga, co, go, ve}) common_flags(c, s);
  un->add_option("--eps", s.eps, "Size of the boundary perturbation");
  sc->add_option("--links", raw.links, "Chain links as a JSON array of polynomials")->required();
  cu->add_option("--alpha", raw.alpha, "Polynomial alpha as JSON");
  cl->add_option("--f", s.f, "power:<p>, abs_poly_sq:<poly> or weighted:<p>:<poly>")->required();
  ga->add_option("--theta", raw.theta, "Higgs field as JSON or a file")->required();

  co->add_option("--n", s.n, "n of SO(n, n+1)")->required();
  co->add_option("--q", raw.q, "JSON list [q2, q4, ..., q_{2n-2}]");
  co->add_option("--hM", s.hM, "Flat metric constant on M");
  co->add_option("--envelope", raw.envelope, "Exponent replacing 2n in the existence weight");
  go->add_option("--q2", raw.q2, "Quadratic differential");
  go->add_option("--hL", s.hL, "Flat metric constant on L");
  for (auto* c : {co, go}) {
    c->add_option("--mu", raw.mu, "Polynomial mu");
    c->add_option("--nu", raw.nu, "Polynomial nu");
    c->add_flag("--check-rss", s.check_rss, "Regular-semisimplicity and existence checks");
    c->add_flag("--solve-graded", s.solve_graded, "Solve the graded chain");
    c->add_flag("--solve-full", s.solve_full, "Solve the full field from the graded metric");
  }

  ve->add_option("target", s.target, "What to verify")->required()->check(CLI::IsMember({"linalg"}));
  ve->add_option("--suite", s.suite, "Suite")->required()->check(CLI::IsMember({"triangular", "cyclic", "closeness"}));
  ve->add_option("--samples", s.samples, "Number of samples");

  std::string sweep_spec, sweep_out, report_dir;
  sw->add_option("--spec", sweep_spec, "Sweep spec JSON or file")->required();
  sw->add_option("--out", sweep_out, "Directory for per-job artifacts and sweep.csv");
  re->add_option("dir", report_dir, "Artifact directory")->required();
  rn->add_option("job", raw.job, "JobSpec JSON or file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : lab::kUsage;
  }

  try {
    if (sw->parsed()) {
      const auto r = lab::run_sweep(lab::json_arg(sweep_spec), sweep_out);
      std::cout << r.csv;
      return r.failed == 0 ? lab::kOk : lab::kNotConverged;
    }
    if (re->parsed()) {
      std::cout << lab::render_report(report_dir);
      return lab::kOk;
    }
    if (rn->parsed()) {
      json j = lab::json_arg(raw.job);
      // A saved report replays the job it embeds.
      if (j.is_object() && j.contains("job") && j.contains("status")) j = j["job"];
      const auto job = lab::JobSpec::from_json(j);
      return emit(lab::run(job), job.out);
    }
    s.command = app.get_subcommands().front()->get_name();
    if (!raw.q.empty()) s.q = lab::json_arg(raw.q);
    if (!raw.links.empty()) s.links = lab::json_arg(raw.links);
    if (!raw.alpha.empty()) s.alpha = lab::json_arg(raw.alpha);
    if (!raw.theta.empty()) s.theta = lab::json_arg(raw.theta);
    if (!raw.mu.empty()) s.mu = lab::json_arg(raw.mu);
    if (!raw.nu.empty()) s.nu = lab::json_arg(raw.nu);
    if (!raw.q2.empty()) s.q2 = lab::json_arg(raw.q2);
    if (!raw.grid.empty()) std::tie(s.nr, s.nt) = lab::parse_grid(raw.grid);
    s.envelope = raw.envelope;
    s.validate();
  } catch (const lab::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lab::kUsage;
  }
  return emit(lab::run(s), s.out);
}
