#include "hitchin/realforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hitchin/hyperbolic.hpp"

namespace hitchin::realforms {

namespace {

Mat antidiag(int n) {
  Mat S = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) S(i, n - 1 - i) = 1.0;
  return S;
}

double poly_scale(const Poly& p) {
  double s = 0.0;
  for (const cplx& c : p.c) s = std::max(s, std::abs(c));
  return s;
}

bool nonzero(const Poly& p) { return !p.trimmed(1e-13 * std::max(1.0, poly_scale(p))).is_zero(); }

// Permutes a diagonal chain-ordered metric into E order.
Mat from_chain(const Mat& Gc, const std::vector<int>& order) {
  const int N = static_cast<int>(order.size());
  Mat G = Mat::Zero(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      G(order[static_cast<size_t>(a)], order[static_cast<size_t>(b)]) = Gc(a, b);
  return G;
}

Mat to_chain(const Mat& G, const std::vector<int>& order) {
  const int N = static_cast<int>(order.size());
  Mat Gc(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      Gc(a, b) = G(order[static_cast<size_t>(a)], order[static_cast<size_t>(b)]);
  return Gc;
}

}  // namespace

// ---------------------------------------------------------------- SO(n, n+1)

Mat so_eta(const SOData& d, cplx z) {
  const int n = d.n;
  Mat eta = Mat::Zero(n + 1, n);
  eta(0, n - 1) = d.nu(z);
  eta(n, n - 1) = d.mu(z);
  for (int r = 1; r < n; ++r) {
    eta(r, r - 1) = 1.0;
    for (int c = r; c < n; ++c) {
      const int idx = c - r;  // q_{2(idx+1)}
      if (idx < static_cast<int>(d.q.size())) eta(r, c) = d.q[static_cast<size_t>(idx)](z);
    }
  }
  return eta;
}

Mat so_eta_dagger(const SOData& d, cplx z) { return antidiag(d.n) * so_eta(d, z).transpose() * antidiag(d.n + 1); }

Mat so_assoc_higgs(const SOData& d, cplx z) {
  const int n = d.n;
  Mat A = Mat::Zero(2 * n + 1, 2 * n + 1);
  A.block(0, n, n, n + 1) = so_eta_dagger(d, z);
  A.block(n, 0, n + 1, n) = so_eta(d, z);
  return A;
}

HiggsField so_field(const SOData& d) {
  const int n = d.n;
  PolyMatrix m(2 * n + 1, 2 * n + 1);
  PolyMatrix eta(n + 1, n);
  eta(0, n - 1) = d.nu;
  eta(n, n - 1) = d.mu;
  for (int r = 1; r < n; ++r) {
    eta(r, r - 1) = Poly::constant(1.0);
    for (int c = r; c < n; ++c)
      if (c - r < static_cast<int>(d.q.size())) eta(r, c) = d.q[static_cast<size_t>(c - r)];
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < n; ++j) {
      m(n + i, j) = eta(i, j);
      // (eta^dagger)_{j', i'} = eta_{n - i', n - 1 - j'}
      m(n - 1 - j, n + (n - i)) = eta(i, j);
    }
  return HiggsField(std::move(m), HiggsShape::so_block);
}

Mat so_pairing(int n) {
  Mat S = Mat::Zero(2 * n + 1, 2 * n + 1);
  S.block(0, 0, n, n) = antidiag(n);
  S.block(n, n, n + 1, n + 1) = antidiag(n + 1);
  return S;
}

RSSReport so_regular_semisimple(const SOData& d, int samples, std::uint64_t seed) {
  RSSReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 0.95), ang(0.0, 2.0 * kPi);
  for (int s = 0; s < samples; ++s) {
    const cplx z = s == 0 ? cplx(0.3, 0.1) : std::polar(rad(rng), ang(rng));
    ++rep.samples;
    const Mat eta = so_eta(d, z);
    const Mat M = so_eta_dagger(d, z) * eta;
    Eigen::ComplexEigenSolver<Mat> es(M);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    bool ok = true;
    for (int i = 0; i < ev.size() && ok; ++i) {
      ok = std::abs(ev(i)) > 1e-8 * scale;
      for (int j = 0; j < i && ok; ++j) ok = std::abs(ev(i) - ev(j)) > 1e-8 * scale;
    }
    if (ok) {
      rep.found = true;
      rep.witness = z;
      rep.label = "regular semisimple at the witness point";
      return rep;
    }
  }
  rep.label = "not found in " + std::to_string(rep.samples) + " samples (evidence only)";
  return rep;
}

double block_charpoly_defect(const Mat& A, const Mat& B) {
  const int n = static_cast<int>(A.rows()), m = static_cast<int>(A.cols());
  if (B.rows() != m || B.cols() != n || n < m) throw std::invalid_argument("need A: n x m, B: m x n, n >= m");
  Mat C = Mat::Zero(n + m, n + m);
  C.block(0, n, n, m) = A;
  C.block(n, 0, m, n) = B;
  const auto lhs = charpoly_coeffs(C);
  const auto cba = charpoly_coeffs(B * A);
  std::vector<cplx> rhs(static_cast<size_t>(n + m) + 1, 0.0);
  for (int k = 0; k <= m; ++k) rhs[static_cast<size_t>(2 * k)] = cba[static_cast<size_t>(k)];
  double scale = 1.0, diff = 0.0;
  for (size_t k = 0; k < lhs.size(); ++k) {
    scale = std::max(scale, std::abs(lhs[k]));
    diff = std::max(diff, std::abs(lhs[k] - rhs[k]));
  }
  return diff / scale;
}

std::vector<int> so_chain_order(int n) {
  std::vector<int> order;
  for (int k = 0; k < n; ++k) {
    order.push_back(n + k);  // W_k
    order.push_back(k);      // V_k
  }
  order.push_back(2 * n);    // W_n = M^{-1}
  return order;
}

HolomorphicChain so_graded_chain(const SOData& d) {
  HolomorphicChain ch;
  const int N = 2 * d.n + 1;
  ch.ranks.assign(static_cast<size_t>(N), 1);
  ch.links.push_back(d.mu);
  for (int k = 1; k + 1 < N - 1; ++k) ch.links.push_back(Poly::constant(1.0));
  ch.links.push_back(d.mu);
  ch.zero_set.assign(static_cast<size_t>(N - 1), false);
  return ch;
}

Mat so_chain_reference(const SOData& d, cplx z) {
  const int n = d.n;
  Mat G = Mat::Zero(2 * n + 1, 2 * n + 1);
  G(0, 0) = d.hM;
  G.block(1, 1, 2 * n - 1, 2 * n - 1) = hyperbolic::hx_metric(2 * n - 1, z);
  G(2 * n, 2 * n) = 1.0 / d.hM;
  return G;
}

ExistenceReport so_existence_condition(const SOData& d, std::optional<double> envelope_p) {
  ExistenceReport rep;
  rep.nonzero = nonzero(d.mu);
  if (!rep.nonzero) {
    rep.message = "mu vanishes identically";
    return rep;
  }
  const double p = envelope_p.value_or(2.0 * d.n);
  if (!envelope_p) {
    // (2/lambda)^n = 2^{-n} (1 - |z|^2)^{2n}: a bounded polynomial times a power with p > -2.
    rep.weight.exact = true;
    rep.weight.verdict = analysis::Verdict::in_Ab;
    rep.weight.note = "polynomial times (1 - |z|^2)^{2n}";
  } else {
    const double c = std::pow(2.0, -d.n) / d.hM;
    const Poly mu = d.mu;
    rep.weight = analysis::class_membership(analysis::DiskFunction::from(
        [=](cplx z) { return c * std::pow(1.0 - std::norm(z), p) * std::norm(mu(z)); }, mu.degree() <= 0));
  }
  rep.in_A = rep.weight.verdict == analysis::Verdict::in_Ab ||
             rep.weight.verdict == analysis::Verdict::in_A_not_Ab_evidence;
  rep.message = analysis::to_string(rep.weight.verdict);
  return rep;
}

// ---------------------------------------------------------------- Sp(4, R)

Mat sp4_assoc_higgs(const Sp4Data& d, cplx z) {
  Mat A = Mat::Zero(4, 4);
  A(0, 2) = d.nu(z);
  A(0, 3) = d.q2(z);
  A(1, 2) = d.q2(z);
  A(1, 3) = d.mu(z);
  A(2, 1) = 1.0;
  A(3, 0) = 1.0;
  return A;
}

HiggsField sp4_field(const Sp4Data& d) {
  PolyMatrix m(4, 4);
  m(0, 2) = d.nu;
  m(0, 3) = d.q2;
  m(1, 2) = d.q2;
  m(1, 3) = d.mu;
  m(2, 1) = Poly::constant(1.0);
  m(3, 0) = Poly::constant(1.0);
  return HiggsField(std::move(m), HiggsShape::sp_block);
}

Mat sp4_pairing() {
  Mat S = Mat::Zero(4, 4);
  S(0, 2) = S(2, 0) = S(1, 3) = S(3, 1) = 1.0;
  return S;
}

bool sp4_regular_semisimple(const Sp4Data& d) {
  return nonzero(d.mu * d.nu) && nonzero(d.q2 * d.q2 - d.mu * d.nu);
}

bool sp4_regular_semisimple_bruteforce(const Sp4Data& d, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 0.95), ang(0.0, 2.0 * kPi);
  for (int s = 0; s < samples; ++s) {
    const cplx z = std::polar(rad(rng), ang(rng));
    Eigen::ComplexEigenSolver<Mat> es(sp4_assoc_higgs(d, z), false);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    bool distinct = true;
    for (int i = 0; i < 4 && distinct; ++i)
      for (int j = 0; j < i && distinct; ++j) distinct = std::abs(ev(i) - ev(j)) > 1e-6 * scale;
    if (distinct) return true;
  }
  return false;
}

std::vector<int> sp4_chain_order() { return {0, 3, 1, 2}; }

HolomorphicChain sp4_graded_chain(const Sp4Data& d) {
  HolomorphicChain ch;
  ch.ranks.assign(4, 1);
  ch.links = {Poly::constant(1.0), d.mu, Poly::constant(1.0)};
  ch.zero_set.assign(3, false);
  return ch;
}

Mat sp4_block_metric(double hL, const Mat& H0) {
  Mat G = Mat::Zero(4, 4);
  const int a[2] = {0, 3}, b[2] = {1, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      G(a[i], a[j]) = hL * H0(i, j);
      G(b[i], b[j]) = H0(i, j) / hL;
    }
  return G;
}

Mat sp4_closed_form(double hL, cplx z) { return sp4_block_metric(hL, hyperbolic::hx_metric(2, z)); }

// ---------------------------------------------------------------- structure defects

double structure_compat_defect(const Mat& G, Form form) {
  const int N = static_cast<int>(G.rows());
  if (form == Form::so) {
    const int n = (N - 1) / 2;
    if (2 * n + 1 != N) throw std::invalid_argument("SO metric must have odd size");
    const double coupling = G.block(0, n, n, n + 1).cwiseAbs().maxCoeff();
    return coupling + compatibility_defect(Mat(G.block(0, 0, n, n)), antidiag(n)) +
           compatibility_defect(Mat(G.block(n, n, n + 1, n + 1)), antidiag(n + 1));
  }
  if (N != 4) throw std::invalid_argument("Sp(4) metric must be 4 x 4");
  const double coupling = G.block(0, 2, 2, 2).cwiseAbs().maxCoeff();
  const Mat GV = G.block(0, 0, 2, 2);
  const Mat dual = GV.inverse().transpose();
  return coupling + (G.block(2, 2, 2, 2) - dual).cwiseAbs().maxCoeff();
}

std::vector<double> structure_compat_defect(const MetricField& H, Form form) {
  std::vector<double> out;
  out.reserve(H.H.size());
  for (const auto& G : H.H) out.push_back(structure_compat_defect(G, form));
  return out;
}

// ---------------------------------------------------------------- drivers

namespace {

RealFormSolve chain_then_full(const HolomorphicChain& chain, const std::vector<int>& order,
                              const std::function<Mat(cplx)>& reference_chain_order, const HiggsField& A,
                              const Mat& S, Form form, GridPtr grid, const solver::SolverConfig& cfg, bool full) {
  RealFormSolve out;
  auto wb = [&](cplx z) { return solver::metric_to_toda(reference_chain_order(z)); };
  auto toda = solver::solve_toda_chain(chain.links, wb, grid, cfg);
  out.chain_report = toda.report;
  MetricField chain_metric = solver::toda_to_metric(toda);
  out.chain_metric.grid = grid;
  out.chain_metric.det_normalized = true;
  for (const auto& Gc : chain_metric.H) out.chain_metric.H.push_back(from_chain(Gc, order));
  for (const double x : structure_compat_defect(out.chain_metric, form)) out.chain_defect = std::max(out.chain_defect, x);
  if (!full) return out;

  solver::SolverConfig fc = cfg;
  fc.compat = true;
  fc.S = S;
  auto boundary = [&](cplx z) { return from_chain(reference_chain_order(z), order); };
  auto [H, rep] = solver::solve_dirichlet(A, boundary, grid, fc, &out.chain_metric);
  out.full_done = true;
  out.full_report = rep;
  for (const double x : structure_compat_defect(H, form)) out.full_defect = std::max(out.full_defect, x);
  // Domination is measured in chain order, where the filtration is the standard flag.
  MetricField Hc, Rc;
  Hc.grid = Rc.grid = grid;
  for (size_t p = 0; p < H.H.size(); ++p) {
    Hc.H.push_back(to_chain(H.H[p], order));
    Rc.H.push_back(to_chain(out.chain_metric.H[p], order));
  }
  out.domination_margin = -INFINITY;
  for (const auto& v : weak_domination_margins(Hc, Rc))
    for (const double x : v) out.domination_margin = std::max(out.domination_margin, x);
  out.full = std::move(H);
  return out;
}

}  // namespace

RealFormSolve collier_solve(const SOData& d, GridPtr grid, const solver::SolverConfig& cfg, bool full) {
  if (!nonzero(d.mu)) throw HypothesisError("mu must not vanish identically");
  return chain_then_full(so_graded_chain(d), so_chain_order(d.n), [&](cplx z) { return so_chain_reference(d, z); },
                         so_field(d), so_pairing(d.n), Form::so, grid, cfg, full);
}

RealFormSolve gothen_solve(const Sp4Data& d, GridPtr grid, const solver::SolverConfig& cfg, bool full) {
  const auto order = sp4_chain_order();
  auto reference = [&](cplx z) { return to_chain(sp4_closed_form(d.hL, z), order); };
  return chain_then_full(sp4_graded_chain(d), order, reference, sp4_field(d), sp4_pairing(), Form::sp4, grid, cfg,
                         full);
}

}  // namespace hitchin::realforms
