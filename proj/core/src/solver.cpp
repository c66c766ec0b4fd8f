#include "hitchin/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "hitchin/hermitian.hpp"

namespace hitchin::solver {

std::vector<double> SolverConfig::radius_schedule(double r0, int stages, int first) {
  std::vector<double> r;
  for (int m = first; m < first + stages; ++m) r.push_back(1.0 - std::ldexp(1.0 - r0, -m));
  return r;
}

double sup_norm(const std::vector<Mat>& field) {
  double s = 0.0;
  for (const auto& M : field) s = std::max(s, M.cwiseAbs().maxCoeff());
  return s;
}

namespace {

struct Stencil {
  int lap_nodes[4];
  double lap_w[4];
  int nlap = 0;
  Grid::Deriv d;
};

Stencil stencil(const Grid& g, int i, int j) {
  Stencil s;
  s.lap_nodes[s.nlap] = g.index(i + 1, j);
  s.lap_w[s.nlap++] = g.lap_east(i);
  if (i > 0) {
    s.lap_nodes[s.nlap] = g.index(i - 1, j);
    s.lap_w[s.nlap++] = g.lap_west(i);
  }
  s.lap_nodes[s.nlap] = g.index(i, j + 1);
  s.lap_w[s.nlap++] = g.lap_theta(i);
  s.lap_nodes[s.nlap] = g.index(i, j - 1);
  s.lap_w[s.nlap++] = g.lap_theta(i);
  s.d = g.deriv(i, j);
  return s;
}

// E_p = G (F + [theta, theta^*]) at node p for a trial centre value Gp.
Mat local_E(const Stencil& st, const Mat& Gp, const std::vector<Mat>& G, const Mat& A) {
  const herm::Eig e = herm::eig(Gp);
  const Mat S = herm::apply(e, [](double x) { return std::sqrt(x); });
  const Mat Si = herm::apply(e, [](double x) { return 1.0 / std::sqrt(x); });
  const Mat Gi = Si * Si;
  const int n = static_cast<int>(Gp.rows());
  Mat lap = Mat::Zero(n, n);
  for (int k = 0; k < st.nlap; ++k)
    lap += st.lap_w[k] * herm::log(Si * G[static_cast<size_t>(st.lap_nodes[k])] * Si);
  Mat Gx = Mat::Zero(n, n), Gy = Mat::Zero(n, n);
  for (int k = 0; k < 4; ++k) {
    Gx += st.d.wx[k] * G[static_cast<size_t>(st.d.nodes[k])];
    Gy += st.d.wy[k] * G[static_cast<size_t>(st.d.nodes[k])];
  }
  const Mat curl = cplx(0.0, -0.25) * (Gy * Gi * Gx - Gx * Gi * Gy);
  const Mat higgs = A.adjoint() * Gp * A - Gp * A * Gi * A.adjoint() * Gp;
  return 0.25 * S * lap * S + curl + higgs;
}

Mat local_residual(const Grid& g, int p, const std::vector<Mat>& G, const Mat& A) {
  const int i = g.ring(p), j = p % g.nt();
  const Mat& Gp = G[static_cast<size_t>(p)];
  const Mat E = local_E(stencil(g, i, j), Gp, G, A);
  return Gp.partialPivLu().solve(E);
}

// Compatibility with S reads conj(G) = conj(S) G^{-1} S, i.e. G is a fixed point of the
// isometric involution tau(G) = S conj(G)^{-1} conj(S); the geodesic midpoint G # tau(G)
// is the projection onto that locus.
Mat tau(const Mat& G, const Mat& S) {
  const Mat t = S * G.conjugate().inverse() * S.conjugate();
  return 0.5 * (t + t.adjoint());
}

void project(std::vector<Mat>& G, const Grid& g, const SolverConfig& cfg, const Mat& S) {
  for (int p = 0; p < g.interior_size(); ++p) {
    Mat& M = G[static_cast<size_t>(p)];
    if (cfg.compat) M = herm::geometric_mean(M, tau(M, S));
    if (cfg.det_normalize) {
      const double d = M.determinant().real();
      M /= std::pow(d, 1.0 / static_cast<double>(M.rows()));
    }
  }
}

}  // namespace

std::vector<Mat> hitchin_residual(const MetricField& H, const HiggsField& A) {
  const Grid& g = *H.grid;
  const int n = H.rank();
  std::vector<Mat> R(H.H.size(), Mat::Zero(n, n));
  for (int p = 0; p < g.size(); ++p) {
    if (!g.on_boundary(p) && Eigen::LLT<Mat>(H.H[static_cast<size_t>(p)]).info() != Eigen::Success)
      throw PDViolation("metric not positive definite at node " + std::to_string(p), p);
  }
  for (int p = 0; p < g.interior_size(); ++p) R[static_cast<size_t>(p)] = local_residual(g, p, H.H, A(g.z(p)));
  return R;
}

namespace {

struct Neighbour {
  int node;
  double lap = 0.0, wx = 0.0, wy = 0.0;
};

std::vector<Neighbour> neighbours(const Stencil& st) {
  std::vector<Neighbour> out;
  auto slot = [&](int q) -> Neighbour& {
    for (auto& nb : out)
      if (nb.node == q) return nb;
    out.push_back({q});
    return out.back();
  };
  for (int k = 0; k < st.nlap; ++k) slot(st.lap_nodes[k]).lap += st.lap_w[k];
  for (int k = 0; k < 4; ++k) {
    auto& nb = slot(st.d.nodes[k]);
    nb.wx += st.d.wx[k];
    nb.wy += st.d.wy[k];
  }
  return out;
}

double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

// On the compatible locus the continuum residual satisfies E = -G conj(S)^{-1} conj(E) S^{-1} G.
// The centred curl term only respects this up to O(h^2) for complex data, so in compat mode
// Newton drives the symmetric part to zero and the remainder is reported separately.
Mat symmetric_part(const Mat& E, const Mat& G, const Mat& S) {
  return 0.5 * (E - G * S.conjugate().inverse() * E.conjugate() * S.inverse() * G);
}

struct Symmetry {
  bool on = false;
  Mat S;
};

Mat node_E(const Grid& g, int p, const std::vector<Mat>& G, const Mat& A, const Symmetry& sym) {
  const int i = g.ring(p), j = p % g.nt();
  const Mat& Gp = G[static_cast<size_t>(p)];
  const Mat E = local_E(stencil(g, i, j), Gp, G, A);
  return sym.on ? symmetric_part(E, Gp, sym.S) : E;
}

// Sup of the frame residual G^{-1}E, symmetrized when requested; *asym gets the sup of the rest.
double frame_sup(const Grid& g, const std::vector<Mat>& G, const std::vector<Mat>& Az, const Symmetry& sym,
                 double* asym) {
  double sup = 0.0;
  if (asym) *asym = 0.0;
  for (int p = 0; p < g.interior_size(); ++p) {
    const Mat& Gp = G[static_cast<size_t>(p)];
    const auto lu = Gp.partialPivLu();
    const Mat E = node_E(g, p, G, Az[static_cast<size_t>(p)], {});
    const Mat Es = sym.on ? symmetric_part(E, Gp, sym.S) : E;
    sup = std::max(sup, lu.solve(Es).cwiseAbs().maxCoeff());
    if (asym && sym.on) *asym = std::max(*asym, lu.solve(E - Es).cwiseAbs().maxCoeff());
  }
  return sup;
}

// Scale-free residual S^{-1} E S^{-1} at every interior node; returns its sup.
double scaled_residuals(const Grid& g, const std::vector<Mat>& G, const std::vector<Mat>& Az, const Symmetry& sym,
                        std::vector<Mat>* out) {
  double sup = 0.0;
  for (int p = 0; p < g.interior_size(); ++p) {
    const Mat& Gp = G[static_cast<size_t>(p)];
    const Mat Si = herm::inv_sqrt(Gp);
    const Mat Rt = Si * node_E(g, p, G, Az[static_cast<size_t>(p)], sym) * Si;
    sup = std::max(sup, max_abs(Rt));
    if (out) (*out)[static_cast<size_t>(p)] = Rt;
  }
  return sup;
}

}  // namespace

std::pair<MetricField, SolveReport> solve_dirichlet(const HiggsField& A, const BoundaryFn& boundary, GridPtr grid,
                                                    const SolverConfig& cfg, const MetricField* initial) {
  const Grid& g = *grid;
  const int n = A.n;
  const int m = herm::dim(n);
  const int P = g.interior_size();
  const Mat S = cfg.S.size() ? cfg.S : PairingMatrix::antidiagonal(n).S;

  MetricField H;
  H.grid = grid;
  H.det_normalized = cfg.det_normalize;
  if (initial) {
    H.H = initial->H;
    for (int p = P; p < g.size(); ++p) H.H[static_cast<size_t>(p)] = boundary(g.z(p));
  } else {
    H = sample_metric(grid, boundary);
    H.det_normalized = cfg.det_normalize;
  }
  std::vector<Mat>& G = H.H;
  project(G, g, cfg, S);

  std::vector<Mat> Az(static_cast<size_t>(g.size()));
  for (int p = 0; p < g.size(); ++p) Az[static_cast<size_t>(p)] = A(g.z(p));

  SolveReport rep;
  const auto& B = herm::basis(n);
  std::vector<Mat> Rt(static_cast<size_t>(P));
  const Symmetry sym{cfg.compat, S};
  double merit = scaled_residuals(g, G, Az, sym, &Rt);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  int stall = 0;
  std::vector<double> buf(static_cast<size_t>(m));

  for (int it = 0;; ++it) {
    for (int p = 0; p < P; ++p)
      if (Eigen::LLT<Mat>(G[static_cast<size_t>(p)]).info() != Eigen::Success)
        throw PDViolation("metric not positive definite at node " + std::to_string(p), p);
    const double res = frame_sup(g, G, Az, sym, nullptr);
    rep.history.push_back(res);
    rep.iterations = it;
    if (res <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (it >= cfg.max_iter || stall >= 4) break;

    std::vector<Mat> Sq(static_cast<size_t>(g.size()));
    for (int p = 0; p < g.size(); ++p) Sq[static_cast<size_t>(p)] = herm::sqrt(G[static_cast<size_t>(p)]);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(P) * m * m * 6);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(P) * m);
    for (int p = 0; p < P; ++p) {
      const int i = g.ring(p), j = p % g.nt();
      const Stencil st = stencil(g, i, j);
      const Mat& Sp = Sq[static_cast<size_t>(p)];
      const Mat Si = Sp.inverse();
      const Mat Gi = Si * Si;
      herm::coords(Rt[static_cast<size_t>(p)], buf.data());
      for (int r = 0; r < m; ++r) rhs(static_cast<Eigen::Index>(p) * m + r) = -buf[static_cast<size_t>(r)];

      Mat Gx = Mat::Zero(n, n), Gy = Mat::Zero(n, n);
      for (int k = 0; k < 4; ++k) {
        Gx += st.d.wx[k] * G[static_cast<size_t>(st.d.nodes[k])];
        Gy += st.d.wy[k] * G[static_cast<size_t>(st.d.nodes[k])];
      }
      for (const auto& nb : neighbours(st)) {
        if (g.on_boundary(nb.node)) continue;
        const Mat& Sn = Sq[static_cast<size_t>(nb.node)];
        herm::Eig e;
        if (nb.lap != 0.0) e = herm::eig(Si * G[static_cast<size_t>(nb.node)] * Si);
        for (int b = 0; b < m; ++b) {
          const Mat D = Sn * B[static_cast<size_t>(b)] * Sn;
          Mat dF = Si * (cplx(0.0, -0.25) * (nb.wy * D * Gi * Gx + Gy * Gi * (nb.wx * D) - nb.wx * D * Gi * Gy -
                                              Gx * Gi * (nb.wy * D))) *
                   Si;
          if (nb.lap != 0.0) dF += 0.25 * nb.lap * herm::dlog(e, Si * D * Si);
          herm::coords(dF, buf.data());
          for (int r = 0; r < m; ++r)
            trip.emplace_back(p * m + r, nb.node * m + b, buf[static_cast<size_t>(r)]);
        }
      }
      const double t = 1e-5;
      for (int b = 0; b < m; ++b) {
        const Mat Xb = t * B[static_cast<size_t>(b)];
        const Mat Gp_plus = Sp * herm::exp(Xb) * Sp;
        const Mat Gp_minus = Sp * herm::exp(-Xb) * Sp;
        const Mat dF = Si *
                       (local_E(st, 0.5 * (Gp_plus + Gp_plus.adjoint()), G, Az[static_cast<size_t>(p)]) -
                        local_E(st, 0.5 * (Gp_minus + Gp_minus.adjoint()), G, Az[static_cast<size_t>(p)])) *
                       Si / (2.0 * t);
        herm::coords(dF, buf.data());
        for (int r = 0; r < m; ++r) trip.emplace_back(p * m + r, p * m + b, buf[static_cast<size_t>(r)]);
      }
    }
    Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(P) * m, static_cast<Eigen::Index>(P) * m);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      rep.message = "sparse factorization failed";
      break;
    }
    const Eigen::VectorXd x = lu.solve(rhs);

    double step = cfg.damping;
    bool accepted = false;
    std::vector<Mat> trial = G;
    std::vector<Mat> trialRt(static_cast<size_t>(P));
    for (int ls = 0; ls < 12; ++ls) {
      for (int p = 0; p < P; ++p) {
        const Mat X = herm::from_coords(x.data() + static_cast<Eigen::Index>(p) * m, n);
        const Mat& Sp = Sq[static_cast<size_t>(p)];
        const Mat Gn = Sp * herm::exp(step * X) * Sp;
        trial[static_cast<size_t>(p)] = 0.5 * (Gn + Gn.adjoint());
      }
      project(trial, g, cfg, S);
      const double mt = scaled_residuals(g, trial, Az, sym, &trialRt);
      if (std::isfinite(mt) && mt < merit) {
        accepted = true;
        stall = mt > 0.9 * merit ? stall + 1 : 0;
        merit = mt;
        G.swap(trial);
        Rt.swap(trialRt);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.message = "line search failed to reduce the residual";
      break;
    }
  }

  rep.residual = frame_sup(g, G, Az, sym, &rep.asym_residual);
  rep.converged = rep.residual <= cfg.tol;
  if (!rep.converged && rep.message.empty()) rep.message = "residual above tolerance after Newton iterations";
  for (int p = 0; p < g.size(); ++p) {
    if (cfg.det_normalize) rep.det_drift = std::max(rep.det_drift, std::abs(G[static_cast<size_t>(p)].determinant().real() - 1.0));
    if (cfg.compat) rep.compat_defect = std::max(rep.compat_defect, compatibility_defect(G[static_cast<size_t>(p)], S));
  }
  return {std::move(H), rep};
}

// ---------------------------------------------------------------- Toda path

std::vector<double> metric_to_toda(const Mat& G) {
  const auto d = leading_minors(G);
  std::vector<double> w;
  for (size_t k = 0; k + 1 < d.size(); ++k) w.push_back(-std::log(d[k]));
  return w;
}

MetricField toda_to_metric(const TodaSolution& t) {
  const int n = static_cast<int>(t.w.size()) + 1;
  MetricField H(t.grid, n);
  H.det_normalized = true;
  for (int p = 0; p < t.grid->size(); ++p) {
    Mat& G = H.H[static_cast<size_t>(p)];
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
      const double wk = k + 1 < n ? t.w[static_cast<size_t>(k)][static_cast<size_t>(p)] : 0.0;
      G(k, k) = std::exp(-(wk - prev));
      prev = wk;
    }
  }
  return H;
}

namespace {

double wrap_term(const std::vector<std::vector<double>>& w, const std::vector<double>& wrap2, int p) {
  return wrap2[static_cast<size_t>(p)] *
         std::exp(-w.front()[static_cast<size_t>(p)] - w.back()[static_cast<size_t>(p)]);
}

// wrap2, when non-empty, is |q_n|^2 for the cyclic link e_{n-1} -> e_0; it contributes
// -|q_n|^2 exp(-w_1 - w_{n-1}) to every component.
double toda_eval(const Grid& g, const std::vector<std::vector<double>>& w, const std::vector<std::vector<double>>& gam2,
                 const std::vector<double>& wrap2, std::vector<double>* out) {
  const int K = static_cast<int>(w.size());
  double sup = 0.0;
  for (int p = 0; p < g.interior_size(); ++p) {
    const int i = g.ring(p), j = p % g.nt();
    for (int k = 0; k < K; ++k) {
      const double wm = k > 0 ? w[static_cast<size_t>(k - 1)][static_cast<size_t>(p)] : 0.0;
      const double wp = k + 1 < K ? w[static_cast<size_t>(k + 1)][static_cast<size_t>(p)] : 0.0;
      const double wk = w[static_cast<size_t>(k)][static_cast<size_t>(p)];
      double r = 0.25 * g.laplacian(w[static_cast<size_t>(k)], i, j) -
                 gam2[static_cast<size_t>(k)][static_cast<size_t>(p)] * std::exp(2.0 * wk - wm - wp);
      if (!wrap2.empty()) r += wrap_term(w, wrap2, p);
      sup = std::max(sup, std::abs(r));
      if (out) (*out)[static_cast<size_t>(p) * K + k] = r;
    }
  }
  return sup;
}

std::vector<std::vector<double>> link_moduli(const Grid& g, const std::vector<Poly>& gamma) {
  std::vector<std::vector<double>> gam2(gamma.size(), std::vector<double>(static_cast<size_t>(g.size())));
  for (size_t k = 0; k < gamma.size(); ++k)
    for (int p = 0; p < g.size(); ++p) gam2[k][static_cast<size_t>(p)] = std::norm(gamma[k](g.z(p)));
  return gam2;
}

std::vector<double> wrap_moduli(const Grid& g, const Poly* wrap) {
  std::vector<double> out;
  if (!wrap) return out;
  out.resize(static_cast<size_t>(g.size()));
  for (int p = 0; p < g.size(); ++p) out[static_cast<size_t>(p)] = std::norm((*wrap)(g.z(p)));
  return out;
}

TodaSolution solve_toda(const std::vector<Poly>& gamma, const Poly* wrap, const TodaBoundaryFn& w_boundary,
                        GridPtr grid, const SolverConfig& cfg, const std::vector<std::vector<double>>* initial,
                        const TodaObserver& observer);

}  // namespace

std::vector<double> toda_residual(const TodaSolution& t, const std::vector<Poly>& gamma, const Poly* wrap) {
  std::vector<double> r(static_cast<size_t>(t.grid->interior_size()) * t.w.size());
  toda_eval(*t.grid, t.w, link_moduli(*t.grid, gamma), wrap_moduli(*t.grid, wrap), &r);
  return r;
}

TodaSolution solve_toda_chain(const std::vector<Poly>& gamma, const TodaBoundaryFn& w_boundary, GridPtr grid,
                              const SolverConfig& cfg, const std::vector<std::vector<double>>* initial,
                              const TodaObserver& observer) {
  return solve_toda(gamma, nullptr, w_boundary, std::move(grid), cfg, initial, observer);
}

TodaSolution solve_toda_cyclic(const std::vector<Poly>& gamma, const Poly& wrap, const TodaBoundaryFn& w_boundary,
                               GridPtr grid, const SolverConfig& cfg, const std::vector<std::vector<double>>* initial,
                               const TodaObserver& observer) {
  if (gamma.empty()) throw std::invalid_argument("cyclic Toda needs n >= 2");
  return solve_toda(gamma, &wrap, w_boundary, std::move(grid), cfg, initial, observer);
}

namespace {

TodaSolution solve_toda(const std::vector<Poly>& gamma, const Poly* wrap, const TodaBoundaryFn& w_boundary,
                        GridPtr grid, const SolverConfig& cfg, const std::vector<std::vector<double>>* initial,
                        const TodaObserver& observer) {
  const Grid& g = *grid;
  const int K = static_cast<int>(gamma.size());
  const int P = g.interior_size();
  TodaSolution sol;
  sol.grid = grid;
  sol.w.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(g.size()), 0.0));
  for (int p = 0; p < g.size(); ++p) {
    const auto wb = w_boundary(g.z(p));
    if (static_cast<int>(wb.size()) != K) throw std::invalid_argument("Toda boundary data has the wrong length");
    for (int k = 0; k < K; ++k) sol.w[static_cast<size_t>(k)][static_cast<size_t>(p)] = wb[static_cast<size_t>(k)];
  }
  if (initial)
    for (int k = 0; k < K; ++k)
      for (int p = 0; p < P; ++p)
        sol.w[static_cast<size_t>(k)][static_cast<size_t>(p)] = (*initial)[static_cast<size_t>(k)][static_cast<size_t>(p)];

  const auto gam2 = link_moduli(g, gamma);
  const auto wrap2 = wrap_moduli(g, wrap);
  auto& w = sol.w;
  auto& rep = sol.report;
  std::vector<double> F(static_cast<size_t>(P) * K);
  double res = toda_eval(g, w, gam2, wrap2, &F);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  int stall = 0;

  for (int it = 0;; ++it) {
    rep.history.push_back(res);
    rep.iterations = it;
    if (observer) observer(it, w);
    if (res <= cfg.tol) break;
    if (it >= cfg.max_iter || stall >= 4) break;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(P) * K * 8);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(P) * K);
    for (int p = 0; p < P; ++p) {
      const int i = g.ring(p), j = p % g.nt();
      const Stencil st = stencil(g, i, j);
      for (int k = 0; k < K; ++k) {
        const int row = p * K + k;
        rhs(row) = -F[static_cast<size_t>(row)];
        trip.emplace_back(row, row, 0.25 * g.lap_center(i));
        for (int s = 0; s < st.nlap; ++s)
          if (!g.on_boundary(st.lap_nodes[s])) trip.emplace_back(row, st.lap_nodes[s] * K + k, 0.25 * st.lap_w[s]);
        const double wm = k > 0 ? w[static_cast<size_t>(k - 1)][static_cast<size_t>(p)] : 0.0;
        const double wp = k + 1 < K ? w[static_cast<size_t>(k + 1)][static_cast<size_t>(p)] : 0.0;
        const double e = gam2[static_cast<size_t>(k)][static_cast<size_t>(p)] *
                         std::exp(2.0 * w[static_cast<size_t>(k)][static_cast<size_t>(p)] - wm - wp);
        trip.emplace_back(row, row, -2.0 * e);
        if (k > 0) trip.emplace_back(row, row - 1, e);
        if (k + 1 < K) trip.emplace_back(row, row + 1, e);
        if (!wrap2.empty()) {
          const double a0 = wrap_term(w, wrap2, p);
          trip.emplace_back(row, p * K, -a0);
          trip.emplace_back(row, p * K + K - 1, -a0);
        }
      }
    }
    Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(P) * K, static_cast<Eigen::Index>(P) * K);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      rep.message = "sparse factorization failed";
      break;
    }
    const Eigen::VectorXd x = lu.solve(rhs);

    double step = cfg.damping;
    bool accepted = false;
    auto trial = w;
    std::vector<double> Ft(F.size());
    for (int ls = 0; ls < 12; ++ls) {
      for (int p = 0; p < P; ++p)
        for (int k = 0; k < K; ++k)
          trial[static_cast<size_t>(k)][static_cast<size_t>(p)] =
              w[static_cast<size_t>(k)][static_cast<size_t>(p)] + step * x(static_cast<Eigen::Index>(p) * K + k);
      const double rt = toda_eval(g, trial, gam2, wrap2, &Ft);
      if (std::isfinite(rt) && (rt < res || ls == 11)) {
        accepted = std::isfinite(rt);
        stall = rt > 0.9 * res ? stall + 1 : 0;
        res = rt;
        w.swap(trial);
        F.swap(Ft);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.message = "line search failed";
      break;
    }
  }
  rep.residual = toda_eval(g, w, gam2, wrap2, nullptr);
  rep.converged = rep.residual <= cfg.tol;
  if (!rep.converged && rep.message.empty()) rep.message = "residual above tolerance after Newton iterations";
  return sol;
}

}  // namespace

}  // namespace hitchin::solver
