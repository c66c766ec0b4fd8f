#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hitchin/hyperbolic.hpp"
#include "hitchin/solver.hpp"

namespace hitchin::solver {

SubharmonicityReport subharmonicity_check(const MetricField& H1, const MetricField& H2, double tol) {
  if (H1.grid != H2.grid && (H1.grid->nr() != H2.grid->nr() || H1.grid->nt() != H2.grid->nt() ||
                             H1.grid->radius() != H2.grid->radius()))
    throw std::invalid_argument("subharmonicity_check needs both fields on the same grid");
  const Grid& g = *H1.grid;
  std::vector<double> tr(static_cast<size_t>(g.size())), logtr(tr.size());
  for (int p = 0; p < g.size(); ++p) {
    const double t = H1.H[static_cast<size_t>(p)].partialPivLu().solve(H2.H[static_cast<size_t>(p)]).trace().real();
    tr[static_cast<size_t>(p)] = t;
    logtr[static_cast<size_t>(p)] = std::log(t);
  }
  SubharmonicityReport rep;
  rep.min_lap_tr = INFINITY;
  rep.min_lap_logtr = INFINITY;
  for (int p = 0; p < g.interior_size(); ++p) {
    const int i = g.ring(p), j = p % g.nt();
    const double a = g.laplacian(tr, i, j);
    const double b = g.laplacian(logtr, i, j);
    rep.min_lap_tr = std::min(rep.min_lap_tr, a);
    rep.min_lap_logtr = std::min(rep.min_lap_logtr, b);
    if (a < -tol || b < -tol) rep.violations.push_back(p);
  }
  rep.ok = rep.violations.empty();
  return rep;
}

MaxPrincipleReport maximum_principle_check(const std::vector<std::vector<double>>& u,
                                           const std::vector<std::vector<double>>& c, const Grid& grid,
                                           double tol) {
  MaxPrincipleReport rep;
  const int K = static_cast<int>(u.size());
  if (static_cast<int>(c.size()) != K) throw std::invalid_argument("u and c have different component counts");
  auto fail = [&](bool& flag, const std::string& what, int node, int comp) {
    if (flag) {
      flag = false;
      if (rep.failure.empty()) {
        rep.failure = what;
        rep.witness_node = node;
        rep.witness_component = comp;
      }
    }
  };
  auto at = [](const std::vector<std::vector<double>>& f, int k, int p) {
    return k < 0 || k >= static_cast<int>(f.size()) ? 0.0 : f[static_cast<size_t>(k)][static_cast<size_t>(p)];
  };

  for (int k = 0; k < K; ++k)
    for (int p = 0; p < grid.interior_size(); ++p)
      if (c[static_cast<size_t>(k)][static_cast<size_t>(p)] < -tol) fail(rep.cooperative, "coupling coefficient negative", p, k);

  for (int k = 0; k + 1 < K; ++k) {
    bool down = false, up = false;
    for (int p = 0; p < grid.interior_size(); ++p) {
      up = up || c[static_cast<size_t>(k)][static_cast<size_t>(p)] > tol;
      down = down || c[static_cast<size_t>(k + 1)][static_cast<size_t>(p)] > tol;
    }
    if (!(up && down)) {
      const auto& weak = c[static_cast<size_t>(up ? k + 1 : k)];
      const int p = static_cast<int>(std::min_element(weak.begin(), weak.begin() + grid.interior_size()) - weak.begin());
      fail(rep.fully_coupled, "components " + std::to_string(k) + " and " + std::to_string(k + 1) + " are not coupled", p,
           up ? k + 1 : k);
    }
  }

  // L u_k = (1/2) Lap_{g_X} u_k + c_k (u_{k-1} - 2 u_k + u_{k+1}) with u_0 = u_n = 0.
  for (int p = 0; p < grid.interior_size(); ++p) {
    const int i = grid.ring(p), j = p % grid.nt();
    const double half_lap_scale = 1.0 / (2.0 * hyperbolic::lambda(grid.z(p)));
    for (int k = 0; k < K; ++k) {
      const double ck = c[static_cast<size_t>(k)][static_cast<size_t>(p)];
      const double Lu = half_lap_scale * grid.laplacian(u[static_cast<size_t>(k)], i, j) +
                        ck * (at(u, k - 1, p) - 2.0 * at(u, k, p) + at(u, k + 1, p));
      if (Lu < -tol) fail(rep.subsolution, "data are not a subsolution", p, k);
      const double Lpsi = ck * ((k > 0 ? 1.0 : 0.0) - 2.0 + (k + 1 < K ? 1.0 : 0.0));
      if (Lpsi > tol) fail(rep.supersolution, "psi = 1 is not a supersolution", p, k);
    }
  }

  double bound = 0.0;
  for (int k = 0; k < K; ++k)
    for (int p = grid.interior_size(); p < grid.size(); ++p) bound = std::max(bound, at(u, k, p));
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < grid.interior_size(); ++p)
      if (at(u, k, p) > bound + tol) fail(rep.conclusion, "interior maximum exceeds the boundary maximum", p, k);

  rep.holds = rep.cooperative && rep.supersolution && rep.subsolution && rep.conclusion;
  return rep;
}

DominationSystem domination_system(const MetricField& H, const MetricField& H_ref, const std::vector<Poly>& gamma) {
  const Grid& g = *H.grid;
  const int n = H.rank();
  if (static_cast<int>(gamma.size()) != n - 1) throw std::invalid_argument("need n - 1 links");
  DominationSystem sys;
  sys.v = weak_domination_margins(H, H_ref);
  sys.c.assign(static_cast<size_t>(n - 1), std::vector<double>(static_cast<size_t>(g.size()), 0.0));
  for (int p = 0; p < g.size(); ++p) {
    auto D = leading_minors(H_ref.H[static_cast<size_t>(p)], p);
    D.insert(D.begin(), 1.0);  // D[k] = Delta_k, Delta_0 = 1
    const cplx z = g.z(p);
    const double lam = hyperbolic::lambda(z);
    auto v = [&](int k) { return k <= 0 || k >= n ? 0.0 : sys.v[static_cast<size_t>(k - 1)][static_cast<size_t>(p)]; };
    for (int k = 1; k < n; ++k) {
      const double x = v(k - 1) - 2.0 * v(k) + v(k + 1);
      const double phi = std::abs(x) < 1e-12 ? 1.0 : std::expm1(x) / x;
      sys.c[static_cast<size_t>(k - 1)][static_cast<size_t>(p)] =
          2.0 / lam * std::norm(gamma[static_cast<size_t>(k - 1)](z)) * D[static_cast<size_t>(k + 1)] *
          D[static_cast<size_t>(k - 1)] / (D[static_cast<size_t>(k)] * D[static_cast<size_t>(k)]) * phi;
    }
  }
  return sys;
}

FirstMinorProbe first_minor_domination_probe(const MetricField& H) {
  FirstMinorProbe out;
  const Grid& g = *H.grid;
  const int n = H.rank();
  for (int p = 0; p < g.size(); ++p) {
    const Mat hx = hyperbolic::hx_metric(n, g.z(p));
    const Mat& G = H.H[static_cast<size_t>(p)];
    out.b = std::max(out.b, G(0, 0).real() / hx(0, 0).real());
    const auto mb = mutual_boundedness(hx, G);
    out.sup_s = std::max(out.sup_s, mb.sup_s);
    out.sup_s_inv = std::max(out.sup_s_inv, mb.sup_s_inv);
  }
  return out;
}

}  // namespace hitchin::solver
