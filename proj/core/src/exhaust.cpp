#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hitchin/hermitian.hpp"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/solver.hpp"

namespace hitchin::solver {

ObsGrid ObsGrid::make(double radius, int rings, int nt) {
  if (radius <= 0.0 || rings < 1 || nt < 1) throw std::invalid_argument("bad observation grid");
  ObsGrid o;
  o.radius = radius;
  o.rings = rings;
  o.nt = nt;
  o.points.push_back(0.0);
  const double dth = 2.0 * kPi / nt;
  for (int k = 1; k <= rings; ++k)
    for (int j = 0; j < nt; ++j) o.points.push_back(std::polar(radius * k / rings, dth * j));
  return o;
}

namespace {

// Cubic Lagrange interpolation along the diameter through angle theta_j, using the
// reflected nodes at -r_i from the antipodal ray.
Mat along_ray(const MetricField& H, int j, double rho) {
  const Grid& g = *H.grid;
  const int nr = g.nr();
  const int K = 2 * nr;
  auto coord = [&](int k) { return k < nr ? -g.r(nr - 1 - k) : g.r(k - nr); };
  auto value = [&](int k) -> const Mat& {
    const int node = k < nr ? g.index(nr - 1 - k, j + g.nt() / 2) : g.index(k - nr, j);
    return H.H[static_cast<size_t>(node)];
  };
  int k = 0;
  while (k + 1 < K - 1 && coord(k + 1) <= rho) ++k;
  const int lo = std::clamp(k - 1, 0, K - 4);
  Mat out = Mat::Zero(H.rank(), H.rank());
  for (int a = lo; a < lo + 4; ++a) {
    double w = 1.0;
    for (int b = lo; b < lo + 4; ++b)
      if (b != a) w *= (rho - coord(b)) / (coord(a) - coord(b));
    out += w * value(a);
  }
  return out;
}

}  // namespace

std::vector<Mat> restrict_to(const MetricField& H, const ObsGrid& obs) {
  const Grid& g = *H.grid;
  if (obs.radius > g.radius()) throw std::invalid_argument("observation disk exceeds the solve disk");
  std::vector<Mat> out;
  out.reserve(obs.points.size());
  const bool shared = g.nt() % obs.nt == 0;
  const int stride = shared ? g.nt() / obs.nt : 0;
  for (size_t p = 0; p < obs.points.size(); ++p) {
    Mat M;
    if (p == 0 && shared) {
      M = along_ray(H, 0, 0.0);
    } else if (shared) {
      const int ring = static_cast<int>((p - 1) / static_cast<size_t>(obs.nt)) + 1;
      const int j = static_cast<int>((p - 1) % static_cast<size_t>(obs.nt));
      M = along_ray(H, j * stride, obs.radius * ring / obs.rings);
    } else {
      M = hyperbolic::interpolate(H, obs.points[p]);
    }
    out.push_back(0.5 * (M + M.adjoint()));
  }
  return out;
}

double sup_distance(const std::vector<Mat>& H1, const std::vector<Mat>& H2) {
  if (H1.size() != H2.size()) throw std::invalid_argument("sup_distance: sample counts differ");
  double d = 0.0;
  for (size_t p = 0; p < H1.size(); ++p) {
    const Mat Si = herm::inv_sqrt(H1[p]);
    const auto e = herm::eig(Si * H2[p] * Si);
    d = std::max(d, (e.values.array() - 1.0).abs().maxCoeff());
  }
  return d;
}

ExhaustResult exhaust(const HiggsField& A, const BoundaryFn& boundary, const SolverConfig& cfg) {
  if (cfg.schedule.empty()) throw std::invalid_argument("empty radius schedule");
  if (cfg.obs_radius >= cfg.schedule.front())
    throw std::invalid_argument("observation radius must be smaller than the first schedule radius");
  const int n = A.n;
  const BoundaryFn bnd = boundary ? boundary : BoundaryFn([n](cplx z) { return hyperbolic::hx_metric(n, z); });

  ExhaustResult res;
  res.obs = ObsGrid::make(cfg.obs_radius, cfg.obs_rings, cfg.nt);
  res.all_stages_converged = true;
  for (double R : cfg.schedule) {
    auto grid = make_grid(R, cfg.nr, cfg.nt, cfg.grading);
    auto [H, rep] = solve_dirichlet(A, bnd, grid, cfg);
    res.radii.push_back(R);
    res.stages.push_back(rep);
    if (!rep.converged) {
      res.all_stages_converged = false;
      res.message = "stage at radius " + std::to_string(R) + " did not converge: " + rep.message;
      res.last = std::move(H);
      break;
    }
    res.stage_fields.push_back(restrict_to(H, res.obs));
    if (res.stage_fields.size() > 1)
      res.d.push_back(sup_distance(res.stage_fields[res.stage_fields.size() - 2], res.stage_fields.back()));
    res.last = std::move(H);
  }
  if (!res.stage_fields.empty()) res.field = res.stage_fields.back();
  res.converged = res.all_stages_converged && !res.d.empty() && res.d.back() < cfg.exhaust_tol;
  if (res.message.empty() && !res.converged) res.message = "successive distances above the declared tolerance";
  return res;
}

EnergyStats energy_density(const MetricField& H, const HiggsField& A) {
  EnergyStats s;
  const Grid& g = *H.grid;
  s.e.resize(static_cast<size_t>(g.size()));
  s.inf = INFINITY;
  s.sup = -INFINITY;
  for (int p = 0; p < g.size(); ++p) {
    const cplx z = g.z(p);
    const double e = 2.0 * A.n * hyperbolic::higgs_norm_sq(A(z), H.H[static_cast<size_t>(p)], z);
    s.e[static_cast<size_t>(p)] = e;
    s.inf = std::min(s.inf, e);
    s.sup = std::max(s.sup, e);
  }
  return s;
}

UniquenessResult uniqueness_probe(const HiggsField& A, const BoundaryFn& boundary_a, const BoundaryFn& boundary_b,
                                  const SolverConfig& cfg) {
  UniquenessResult u;
  u.a = exhaust(A, boundary_a, cfg);
  u.b = exhaust(A, boundary_b, cfg);
  const size_t m = std::min(u.a.stage_fields.size(), u.b.stage_fields.size());
  for (size_t k = 0; k < m; ++k) u.stage_distance.push_back(sup_distance(u.a.stage_fields[k], u.b.stage_fields[k]));
  u.distance = u.stage_distance.empty() ? INFINITY : u.stage_distance.back();
  u.limit_distance = u.distance;
  if (m >= 3) {
    // Aitken delta-squared on the last three stages, kept only for a convergent, decreasing tail.
    const double d0 = u.stage_distance[m - 3], d1 = u.stage_distance[m - 2], d2 = u.stage_distance[m - 1];
    const double den = d2 - 2.0 * d1 + d0;
    if (d2 < d1 && d1 < d0 && den > 0.0) u.limit_distance = std::max(0.0, d2 - (d2 - d1) * (d2 - d1) / den);
  }
  return u;
}

}  // namespace hitchin::solver
