#include "hitchin/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hitchin::analysis {

namespace bq = boost::math::quadrature;

double green(cplx z, cplx xi) {
  if (z == xi) return std::numeric_limits<double>::infinity();
  return std::log(std::abs((1.0 - std::conj(z) * xi) / (z - xi)));
}

double mean_log_circle(cplx z, double r, double* error_estimate) {
  if (!(r > 0.0)) throw std::invalid_argument("mean_log_circle needs r > 0");
  const double t0 = std::arg(z);
  // Integrate over the offset s from arg z on [0, 2pi]. For tanh-sinh, xc is the signed
  // distance to the nearer endpoint, so -xc is the offset modulo 2pi without cancellation.
  auto f = [&](double, double xc) {
    const double d = std::abs(z - std::polar(r, t0 - xc));
    return d > 0.0 ? std::log(d) : 0.0;
  };
  bq::tanh_sinh<double> ts;
  double err = 0.0;
  const double v = ts.integrate(f, 0.0, 2.0 * kPi, 1e-12, &err);
  if (error_estimate) *error_estimate = err;
  return v / (2.0 * kPi);
}

double DiskFunction::operator()(cplx z) const {
  switch (tag) {
    case FormTag::power_p:
      return std::pow(1.0 - std::norm(z), p);
    case FormTag::abs_poly_sq:
      return std::norm(alpha(z));
    case FormTag::custom:
      return custom(z);
  }
  return 0.0;
}

DiskFunction DiskFunction::power(double p) {
  DiskFunction f;
  f.tag = FormTag::power_p;
  f.p = p;
  f.radial = true;
  return f;
}

DiskFunction DiskFunction::abs_poly_sq(Poly alpha) {
  DiskFunction f;
  f.tag = FormTag::abs_poly_sq;
  f.alpha = std::move(alpha);
  f.radial = f.alpha.degree() <= 0;
  return f;
}

DiskFunction DiskFunction::from(std::function<double(cplx)> fn, bool radial) {
  DiskFunction f;
  f.custom = std::move(fn);
  f.radial = radial;
  return f;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::in_Ab:
      return "in_Ab";
    case Verdict::in_A_not_Ab_evidence:
      return "in_A_not_Ab_evidence";
    case Verdict::not_in_A_evidence:
      return "not_in_A_evidence";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Trend classify_trend(const std::vector<double>& v, const ClassOptions& opt) {
  const size_t m = v.size();
  if (m >= static_cast<size_t>(opt.streak) + 1) {
    bool grows = true;
    for (size_t k = m - static_cast<size_t>(opt.streak); k < m; ++k)
      grows = grows && v[k - 1] > 0.0 && v[k] > (1.0 + opt.growth) * v[k - 1];
    if (grows) return Trend::divergent;
  }
  if (m < 3) return Trend::unclear;
  const double scale = std::max(1e-300, std::abs(v[m - 1]));
  const double d1 = v[m - 1] - v[m - 2], d0 = v[m - 2] - v[m - 3];
  if (std::abs(d1) <= 1e-14 * std::max(1.0, scale)) return Trend::bounded;
  const double q = d0 != 0.0 ? d1 / d0 : 2.0;
  if (q >= 0.0 && q < 1.0 && std::abs(d1 * q / (1.0 - q)) <= opt.leveling * scale) return Trend::bounded;
  return Trend::unclear;
}

namespace {

double gk(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return bq::gauss_kronrod<double, 21>::integrate(f, a, b, 12, 1e-10);
}

// int over a < |xi| < b of f(xi) w(|xi|) dsigma.
double annulus_integral(const DiskFunction& f, double a, double b, const std::function<double(double)>& w) {
  if (f.radial) return gk([&](double r) { return 2.0 * kPi * r * w(r) * f(cplx(r, 0.0)); }, a, b);
  constexpr int nth = 128;
  return gk(
      [&](double r) {
        double s = 0.0;
        for (int j = 0; j < nth; ++j) s += f(std::polar(r, 2.0 * kPi * j / nth));
        return 2.0 * kPi / nth * s * r * w(r);
      },
      a, b);
}

// int over a < |xi| < b of G(z, xi) f(xi) dsigma.
double annulus_potential(const DiskFunction& f, cplx z, double a, double b) {
  const double rz = std::abs(z);
  auto split = [&](const std::function<double(double)>& g) {
    if (rz > a && rz < b) return gk(g, a, rz) + gk(g, rz, b);
    return gk(g, a, b);
  };
  if (f.radial) {
    // The circle mean of log|1 - conj(z) xi| vanishes and that of log|z - xi| is log max(|z|, r).
    return split([&](double r) { return -2.0 * kPi * r * std::log(std::max(rz, r)) * f(cplx(r, 0.0)); });
  }
  bq::tanh_sinh<double> ts;
  const double t0 = std::arg(z);
  return split([&](double r) {
    if (r == 0.0) return 0.0;
    auto g = [&](double t) {
      const cplx xi = std::polar(r, t);
      const double G = green(z, xi);
      return std::isfinite(G) ? G * f(xi) : 0.0;
    };
    return r * ts.integrate(g, t0, t0 + 2.0 * kPi, 1e-9);
  });
}

}  // namespace

ClassReport class_membership(const DiskFunction& f, const ClassOptions& opt) {
  ClassReport rep;
  if (f.tag == FormTag::power_p) {
    rep.exact = true;
    rep.verdict = f.p > -2.0 ? Verdict::in_Ab : Verdict::not_in_A_evidence;
    rep.note = "closed-form rule for (1 - |z|^2)^p";
    return rep;
  }
  if (f.tag == FormTag::abs_poly_sq) {
    rep.exact = true;
    rep.verdict = Verdict::in_Ab;
    rep.note = "bounded on the closed disk";
    return rep;
  }
  rep.note = "numerical evidence";
  std::vector<double> pot(opt.z_sample.size(), 0.0);
  double mass = 0.0, prev = 0.0;
  for (int m = 1; m <= opt.levels; ++m) {
    const double rho = 1.0 - std::ldexp(1.0, -m);
    mass += annulus_integral(f, prev, rho, [](double r) { return 1.0 - r * r; });
    double sup = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < pot.size(); ++k) {
      pot[k] += annulus_potential(f, opt.z_sample[k], prev, rho);
      sup = std::max(sup, pot[k]);
    }
    rep.levels.push_back(rho);
    rep.mass.push_back(mass);
    rep.potential.push_back(sup);
    prev = rho;
  }
  const Trend tm = classify_trend(rep.mass, opt);
  if (tm == Trend::divergent) {
    rep.verdict = Verdict::not_in_A_evidence;
  } else if (tm == Trend::bounded) {
    const Trend tp = classify_trend(rep.potential, opt);
    rep.verdict = tp == Trend::bounded      ? Verdict::in_Ab
                  : tp == Trend::divergent ? Verdict::in_A_not_Ab_evidence
                                           : Verdict::inconclusive;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

CurvatureSolution solve_curvature(const Poly& alpha, GridPtr grid, const solver::SolverConfig& cfg,
                                  const std::function<double(cplx)>& boundary) {
  const Grid& g = *grid;
  double C = -std::numeric_limits<double>::infinity();
  for (int p = g.interior_size(); p < g.size(); ++p) {
    const double b = boundary(g.z(p));
    if (!std::isfinite(b)) throw HypothesisError("boundary data must be finite");
    C = std::max(C, b);
  }
  std::vector<std::vector<double>> init(1, std::vector<double>(static_cast<size_t>(g.size()), C));

  CurvatureSolution out;
  out.grid = grid;
  std::vector<double> last;
  auto observer = [&](int, const std::vector<std::vector<double>>& w) {
    if (!last.empty())
      for (int p = 0; p < g.interior_size(); ++p)
        out.max_increase = std::max(out.max_increase, w[0][static_cast<size_t>(p)] - last[static_cast<size_t>(p)]);
    last = w[0];
  };
  auto sol = solver::solve_toda_chain({alpha}, [&](cplx z) { return std::vector<double>{boundary(z)}; }, grid, cfg,
                                      &init, observer);
  out.u = std::move(sol.w[0]);
  out.report = sol.report;
  out.monotone = out.max_increase <= 1e-9;
  return out;
}

KrausReport kraus_necessity_check(const Grid& g, const std::vector<double>& u, const std::vector<double>& f, double tol,
                                  int z_stride) {
  if (static_cast<int>(u.size()) != g.size() || static_cast<int>(f.size()) != g.size())
    throw std::invalid_argument("u and f must be sampled on the grid");
  KrausReport rep;
  for (double x : u) rep.M = std::max(rep.M, std::abs(x));
  rep.bound = 2.0 * rep.M * 2.0 * kPi;
  const double R = g.radius();
  constexpr int nlev = 6;
  std::vector<int> cut;
  for (int k = 1; k <= nlev; ++k) cut.push_back((g.nr() - 1) * k / nlev);
  for (int c : cut) rep.levels.push_back(g.r(c));
  rep.potential.assign(nlev, 0.0);

  for (int i = 0; i < g.nr() - 1; i += z_stride) {
    for (int j = 0; j < g.nt(); j += z_stride) {
      const cplx z = g.z(i, j);
      std::vector<double> acc(nlev, 0.0);
      for (int q = 0; q < g.size(); ++q) {
        const int ring = g.ring(q);
        const double area = g.cell_area(ring);
        const cplx xi = g.z(q);
        double G;
        if (q == g.index(i, j)) {
          // Cell replaced by a disk of equal area; the log singularity is integrated exactly.
          const double rho = std::sqrt(area / kPi);
          G = std::log((R * R - std::norm(z)) / R) + 0.5 - std::log(rho);
        } else {
          G = std::log(std::abs((R * R - std::conj(z) * xi) / (R * (z - xi))));
        }
        const double contrib = G * f[static_cast<size_t>(q)] * area;
        for (int k = 0; k < nlev; ++k)
          if (ring <= cut[static_cast<size_t>(k)]) acc[static_cast<size_t>(k)] += contrib;
      }
      for (int k = 0; k < nlev; ++k)
        rep.potential[static_cast<size_t>(k)] = std::max(rep.potential[static_cast<size_t>(k)], acc[static_cast<size_t>(k)]);
    }
  }
  bool nonneg = true;
  for (double x : f) nonneg = nonneg && x >= -tol;
  rep.holds = nonneg && rep.potential.back() <= rep.bound + tol;
  return rep;
}

PerturbationReport perturbed_existence_conditions(const PerturbationData& d, const ClassOptions& opt) {
  auto eval = [](const std::function<Mat(cplx)>& fn, cplx z, int n) -> Mat { return fn ? fn(z) : Mat::Zero(n, n); };
  auto h_adj = [](const Mat& M, const Mat& G) -> Mat { return G.partialPivLu().solve(M.adjoint() * G); };
  auto h_norm = [&](const Mat& M, const Mat& G) { return std::sqrt(std::max(0.0, (M * h_adj(M, G)).trace().real())); };
  const int n = static_cast<int>(d.h1(0.0).rows());

  auto commutator = DiskFunction::from(
      [&, n](cplx z) {
        const Mat G = d.h1(z);
        const Mat ph = eval(d.phi, z, n), th = eval(d.theta0, z, n);
        const Mat thd = h_adj(th, G);
        return 2.0 * h_norm(ph * thd - thd * ph, G);
      },
      d.radial);
  auto phi_sq = DiskFunction::from(
      [&, n](cplx z) {
        const Mat G = d.h1(z);
        const Mat ph = eval(d.phi, z, n);
        return 2.0 * (ph * h_adj(ph, G)).trace().real();
      },
      d.radial);
  auto dbar = DiskFunction::from(
      [&, n](cplx z) {
        const Mat G = d.h1(z);
        return std::sqrt(2.0) * h_norm(h_adj(eval(d.dxi, z, n), G), G);
      },
      d.radial);
  auto xi_sq = DiskFunction::from(
      [&, n](cplx z) {
        const Mat G = d.h1(z);
        const Mat x = eval(d.xi, z, n);
        return (x * h_adj(x, G)).trace().real();
      },
      d.radial);

  PerturbationReport rep;
  rep.commutator = class_membership(commutator, opt);
  rep.phi_sq = class_membership(phi_sq, opt);
  rep.dbar_xi = class_membership(dbar, opt);
  rep.xi_sq = class_membership(xi_sq, opt);
  bool all_A = true, all_Ab = true;
  for (const auto* r : {&rep.commutator, &rep.phi_sq, &rep.dbar_xi, &rep.xi_sq}) {
    all_Ab = all_Ab && r->verdict == Verdict::in_Ab;
    all_A = all_A && (r->verdict == Verdict::in_Ab || r->verdict == Verdict::in_A_not_Ab_evidence);
    rep.inconclusive = rep.inconclusive || r->verdict == Verdict::inconclusive;
  }
  rep.existence = all_A;
  rep.mutually_bounded = all_Ab;
  return rep;
}

ChainConditionReport chain_necessary_condition(const std::vector<Poly>& gamma) {
  ChainConditionReport rep;
  const int n = static_cast<int>(gamma.size()) + 1;
  if (n < 2) throw std::invalid_argument("need at least one link");
  rep.N = n * (n * n - 1) / 6;
  double rmax = 0.0;
  for (int i = 1; i < n; ++i) {
    rep.r.push_back(0.5 * i * (n - i));
    rmax = std::max(rmax, rep.r.back());
  }
  rep.coefficient = 1.0 / rmax;

  Poly P = Poly::constant(1.0);
  for (int i = 1; i < n; ++i) P = P * pow(gamma[static_cast<size_t>(i - 1)], i * (n - i));
  const double scale = P.is_zero() ? 0.0 : std::abs(*std::max_element(P.c.begin(), P.c.end(), [](cplx a, cplx b) {
    return std::abs(a) < std::abs(b);
  }));
  P = P.trimmed(1e-13 * scale);
  if (P.is_zero()) {
    rep.message = "hypothesis not verified: the product of links vanishes identically";
    return rep;
  }
  int k = 0;
  while (std::abs(P.c[static_cast<size_t>(k)]) <= 1e-13 * scale) ++k;
  const int deg = P.degree();
  if (k % rep.N != 0 || (deg - k) % rep.N != 0) {
    rep.message = "hypothesis not verified: degrees are not multiples of " + std::to_string(rep.N);
    return rep;
  }
  // Power series B^{1/N} of B = P / (c z^k), truncated at the expected degree.
  const cplx c = P.c[static_cast<size_t>(k)];
  const int D = (deg - k) / rep.N;
  std::vector<cplx> b(static_cast<size_t>(deg - k + 1));
  for (int j = 0; j <= deg - k; ++j) b[static_cast<size_t>(j)] = P.c[static_cast<size_t>(j + k)] / c;
  const double a = 1.0 / rep.N;
  std::vector<cplx> s(static_cast<size_t>(D + 1), 0.0);
  s[0] = 1.0;
  for (int m = 1; m <= D; ++m) {
    cplx acc = 0.0;
    for (int j = 1; j <= std::min(m, deg - k); ++j)
      acc += (a * j - (m - j)) * b[static_cast<size_t>(j)] * s[static_cast<size_t>(m - j)];
    s[static_cast<size_t>(m)] = acc / static_cast<double>(m);
  }
  std::vector<cplx> coeffs(static_cast<size_t>(k / rep.N), 0.0);
  const cplx root = std::polar(std::pow(std::abs(c), a), std::arg(c) * a);
  for (const cplx& x : s) coeffs.push_back(root * x);
  Poly alpha(coeffs);
  const Poly check = pow(alpha, rep.N) - P;
  double err = 0.0;
  for (const cplx& x : check.c) err = std::max(err, std::abs(x));
  if (err > 1e-9 * scale) {
    rep.message = "hypothesis not verified: the product is not a perfect power";
    return rep;
  }
  rep.hypothesis = true;
  rep.alpha = alpha.trimmed(1e-13 * std::pow(scale, a));
  rep.alpha_class = class_membership(DiskFunction::abs_poly_sq(rep.alpha));
  rep.message = "hypothesis holds; f = 1 tested";
  return rep;
}

}  // namespace hitchin::analysis
