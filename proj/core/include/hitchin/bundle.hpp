#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hitchin/grid.hpp"
#include "hitchin/poly.hpp"

namespace hitchin {

// q = (q_2, ..., q_n) with q_j = Q_j(z) dz^j.
struct DifferentialTuple {
  int n = 2;
  std::vector<Poly> q;  // q[j - 2] holds Q_j

  DifferentialTuple() = default;
  explicit DifferentialTuple(int rank) : n(rank), q(static_cast<size_t>(rank - 1)) {}
  DifferentialTuple(int rank, std::vector<Poly> coeffs);

  const Poly& Q(int j) const { return q.at(static_cast<size_t>(j - 2)); }
  Poly& Q(int j) { return q.at(static_cast<size_t>(j - 2)); }
  bool is_zero() const;
};

enum class HiggsShape { companion, chain, so_block, sp_block, general };

// z -> A(z), the Higgs field in the trivializing frame (columns are sources).
struct HiggsField {
  int n = 0;
  HiggsShape shape = HiggsShape::general;
  PolyMatrix poly;

  HiggsField() = default;
  HiggsField(PolyMatrix m, HiggsShape s) : n(m.rows), shape(s), poly(std::move(m)) {}
  Mat operator()(cplx z) const { return poly.eval(z); }
};

Mat companion_higgs(const DifferentialTuple& q, cplx z);
HiggsField companion_field(const DifferentialTuple& q);

// Monic characteristic polynomial coefficients c_0 = 1, c_1, ..., c_n of det(t I - A).
std::vector<cplx> charpoly_coeffs(const Mat& A);

// (p_2, ..., p_n), calibrated so that companion_higgs(q, z) maps to (Q_2(z), ..., Q_n(z)).
// c_j of a companion matrix is kappa_j Q_j plus a polynomial in Q_2..Q_{j-1}; the
// lower-order part is removed by re-evaluating on the partially reconstructed companion.
std::vector<cplx> charpoly_invariants(const Mat& A);

struct PairingMatrix {
  Mat S;
  static PairingMatrix antidiagonal(int n);
  static PairingMatrix identity(int n);
};

// Hermitian metric sampled on a grid. H[node] is the matrix G with h(u, v) = v^* G u,
// so G_{ij} = h(e_j, e_i); the paper's h(e) is the transpose (= conj(G)).
struct MetricField {
  GridPtr grid;
  std::vector<Mat> H;
  bool det_normalized = false;

  MetricField() = default;
  MetricField(GridPtr g, int n) : grid(std::move(g)), H(static_cast<size_t>(grid->size()), Mat::Identity(n, n)) {}
  int rank() const { return H.empty() ? 0 : static_cast<int>(H.front().rows()); }
  // Throws PDViolation on the first non-Hermitian / indefinite node.
  void validate(double tol = 1e-9) const;
};

MetricField sample_metric(GridPtr grid, const std::function<Mat(cplx)>& h);

struct HolomorphicChain {
  std::vector<int> ranks;
  std::vector<Poly> links;      // scalar links gamma_i for chains of type (1,...,1)
  std::vector<bool> zero_set;   // links forced to zero in theta_0

  int length() const { return static_cast<int>(ranks.size()); }
  HiggsField field() const;     // subdiagonal matrix of the links
};

HolomorphicChain build_graded_chain(const HiggsField& A);

// Leading principal minors Delta_1..Delta_n through Cholesky; throws PDViolation(node).
std::vector<double> leading_minors(const Mat& G, int node = -1);

// v[k-1][node] = log(Delta_k(H) / Delta_k(H_ref)), k = 1..n-1.
std::vector<std::vector<double>> weak_domination_margins(const MetricField& H, const MetricField& H_ref);

double compatibility_defect(const Mat& G, const Mat& S);
std::vector<double> compatibility_defect(const MetricField& H, const PairingMatrix& S);

struct MutualBoundedness {
  double sup_s = 0.0;
  double sup_s_inv = 0.0;
};
// s = H1^{-1} H2 measured in the H1 operator norm.
MutualBoundedness mutual_boundedness(const Mat& G1, const Mat& G2);
MutualBoundedness mutual_boundedness_report(const MetricField& H1, const MetricField& H2);

}  // namespace hitchin
