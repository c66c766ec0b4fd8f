#include "hitchin/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

namespace hitchin::hyperbolic {

double lambda(cplx z) {
  const double t = 1.0 - std::norm(z);
  return 4.0 / (t * t);
}

double anticanonical_weight(cplx z) { return 0.5 * lambda(z); }

std::vector<double> discrete_curvature(const Grid& grid) {
  std::vector<double> loglam(static_cast<size_t>(grid.size()));
  for (int p = 0; p < grid.size(); ++p) loglam[static_cast<size_t>(p)] = std::log(lambda(grid.z(p)));
  std::vector<double> k(static_cast<size_t>(grid.size()), 0.0);
  for (int i = 0; i + 1 < grid.nr(); ++i)
    for (int j = 0; j < grid.nt(); ++j) {
      const int p = grid.index(i, j);
      k[static_cast<size_t>(p)] = -grid.laplacian(loglam, i, j) / (2.0 * lambda(grid.z(p)));
    }
  return k;
}

double a_kn(int k, int n) {
  if (k < 1 || k > n) throw std::invalid_argument("a_kn: k out of range");
  double a = 1.0;
  for (int l = 1; l <= k - 1; ++l) a *= std::sqrt(l * (n - l) / 2.0);
  for (int l = k; l <= n - 1; ++l) a /= std::sqrt(l * (n - l) / 2.0);
  return a;
}

Mat hx_metric(int n, cplx z) {
  const double w = anticanonical_weight(z);
  Mat h = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) h(k - 1, k - 1) = a_kn(k, n) * std::pow(w, -0.5 * (n + 1 - 2 * k));
  return h;
}

MetricField hx_field(GridPtr grid, int n) {
  MetricField f = sample_metric(grid, [n](cplx z) { return hx_metric(n, z); });
  f.det_normalized = true;
  return f;
}

double higgs_norm_sq(const Mat& A, const Mat& G, cplx z) {
  const Mat adj = G.partialPivLu().solve(A.adjoint() * G);
  return 2.0 * (A * adj).trace().real() / lambda(z);
}

cplx MobiusMap::operator()(cplx z) const {
  return std::polar(1.0, phi) * (z - a) / (1.0 - std::conj(a) * z);
}

cplx MobiusMap::derivative(cplx z) const {
  const cplx d = 1.0 - std::conj(a) * z;
  return std::polar(1.0, phi) * (1.0 - std::norm(a)) / (d * d);
}

cplx MobiusMap::sqrt_derivative(cplx z) const {
  return std::polar(1.0, 0.5 * phi) * std::sqrt(1.0 - std::norm(a)) / (1.0 - std::conj(a) * z);
}

MobiusMap MobiusMap::inverse() const {
  // w = e^{i phi}(z - a)/(1 - conj(a) z)  =>  z = e^{-i phi}(w + b)/(1 + conj(b) w), b = a e^{i phi}.
  return MobiusMap{-a * std::polar(1.0, phi), -phi};
}

MobiusMap compose(const MobiusMap& m1, const MobiusMap& m2) {
  // The composite sends a = m2^{-1}(m1^{-1}(0)) to 0 with derivative e^{i phi}/(1-|a|^2) there.
  const cplx a = m2.inverse()(m1.inverse()(0.0));
  const cplx d = m1.derivative(m2(a)) * m2.derivative(a) * (1.0 - std::norm(a));
  return MobiusMap{a, std::arg(d)};
}

DifferentialTuple rotate(const DifferentialTuple& q, double phi) {
  // z -> e^{i phi} z: Q_j(e^{i phi} z) e^{i j phi}.
  DifferentialTuple out(q.n);
  for (int j = 2; j <= q.n; ++j) {
    Poly p = q.Q(j);
    for (size_t k = 0; k < p.c.size(); ++k) p.c[k] *= std::polar(1.0, phi * static_cast<double>(k + j));
    out.Q(j) = p;
  }
  return out;
}

std::function<Mat(cplx)> mobius_pullback_higgs(const DifferentialTuple& q, const MobiusMap& m) {
  return [q, m](cplx z) {
    const cplx w = m(z);
    const cplx d = m.derivative(z);
    DifferentialTuple local(q.n);
    for (int j = 2; j <= q.n; ++j) local.Q(j) = Poly::constant(q.Q(j)(w) * std::pow(d, j));
    return companion_higgs(local, 0.0);
  };
}

namespace {

// Frame change for e_k = dz^{(n+1-2k)/2}: G'(z) = D^{-*} G(m(z)) D^{-1}, D = diag(sqrt(m')^{n+1-2k}).
Mat reweight(const Mat& G, cplx sqrt_d) {
  const int n = static_cast<int>(G.rows());
  Vec dinv(n);
  for (int k = 1; k <= n; ++k) dinv(k - 1) = std::pow(sqrt_d, -(n + 1 - 2 * k));
  return dinv.conjugate().asDiagonal() * G * dinv.asDiagonal();
}

}  // namespace

Mat mobius_pullback(const std::function<Mat(cplx)>& h, const MobiusMap& m, cplx z) {
  return reweight(h(m(z)), m.sqrt_derivative(z));
}

Mat interpolate(const MetricField& H, cplx z, bool* extrapolated) {
  const Grid& g = *H.grid;
  double r = std::abs(z);
  double th = std::arg(z);
  if (th < 0) th += 2.0 * kPi;
  bool extra = false;
  if (r > g.radius()) {
    extra = true;
    r = g.radius();
  }
  if (extrapolated) *extrapolated = extra;
  const double tpos = th / g.dtheta();
  const int j0 = static_cast<int>(std::floor(tpos));
  const double ft = tpos - j0;
  auto ring_value = [&](int i, int jbase) {
    return (1.0 - ft) * H.H[static_cast<size_t>(g.index(i, jbase))] +
           ft * H.H[static_cast<size_t>(g.index(i, jbase + 1))];
  };
  if (r <= g.r(0)) {
    // Between the antipodal innermost node (at -r_0) and the innermost ring.
    const double w = (r + g.r(0)) / (2.0 * g.r(0));
    return (1.0 - w) * ring_value(0, j0 + g.nt() / 2) + w * ring_value(0, j0);
  }
  int i = 0;
  while (i + 1 < g.nr() - 1 && g.r(i + 1) < r) ++i;
  const double w = (r - g.r(i)) / (g.r(i + 1) - g.r(i));
  return (1.0 - w) * ring_value(i, j0) + w * ring_value(i + 1, j0);
}

MetricField mobius_pullback(const MetricField& H, const MobiusMap& m, std::vector<int>* extrapolated) {
  MetricField out;
  out.grid = H.grid;
  out.det_normalized = H.det_normalized;
  out.H.resize(H.H.size());
  for (int p = 0; p < H.grid->size(); ++p) {
    const cplx z = H.grid->z(p);
    bool extra = false;
    const Mat src = interpolate(H, m(z), &extra);
    if (extra && extrapolated) extrapolated->push_back(p);
    out.H[static_cast<size_t>(p)] = reweight(src, m.sqrt_derivative(z));
  }
  return out;
}

}  // namespace hitchin::hyperbolic
