#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hitchin/analysis.hpp"
#include "hitchin/bundle.hpp"
#include "hitchin/solver.hpp"

// SO(n, n+1) Higgs bundles of the Collier family and Sp(4, R) Higgs bundles of the
// Gothen family, in the trivialization where line bundles carry constant flat metrics.
namespace hitchin::realforms {

// E = V + W with V = K^{n-1} + ... + K^{1-n} (n summands) and
// W = M + K^{n-2} + ... + K^{2-n} + M^{-1} (n + 1 summands); V comes first.
struct SOData {
  int n = 1;
  double hM = 1.0;        // flat metric constant on M
  Poly mu, nu;
  std::vector<Poly> q;    // q[i - 1] = q_{2i}, i = 1..n-1
};

Mat so_eta(const SOData& d, cplx z);          // (n+1) x n, V -> W
Mat so_eta_dagger(const SOData& d, cplx z);   // Q_V eta^T Q_W
Mat so_assoc_higgs(const SOData& d, cplx z);  // [[0, eta^dagger], [eta, 0]]
HiggsField so_field(const SOData& d);
Mat so_pairing(int n);                        // Q_V + Q_W, block antidiagonal

struct RSSReport {
  bool found = false;
  cplx witness = 0.0;
  int samples = 0;
  std::string label;
};
RSSReport so_regular_semisimple(const SOData& d, int samples = 64, std::uint64_t seed = 1);

// max |coefficient difference| between det(tI - C) and t^{n-m} det(t^2 I - BA) for
// C = [[0_n, A], [B, 0_m]], relative to the largest coefficient.
double block_charpoly_defect(const Mat& A, const Mat& B);

HolomorphicChain so_graded_chain(const SOData& d);
// chain position -> index in E (V first): M, K^{n-1}, K^{n-2}, ..., K^{1-n}, M^{-1}.
std::vector<int> so_chain_order(int n);
// diag(h_M, h_X entries of rank 2n-1, h_M^{-1}) in chain order.
Mat so_chain_reference(const SOData& d, cplx z);

struct ExistenceReport {
  bool nonzero = false;
  analysis::ClassReport weight;
  bool in_A = false;
  std::string message;
};
// h_M^{-1} |dz|^{2n}_{g_X} |mu|^2 in class A; the envelope exponent defaults to 2n.
ExistenceReport so_existence_condition(const SOData& d, std::optional<double> envelope_p = std::nullopt);

// E = N + N^{-1}K + N^{-1} + N K^{-1}; V = N + N^{-1}K, V^dual = N^{-1} + N K^{-1}.
struct Sp4Data {
  double hL = 1.0;  // flat metric constant on L = N K^{-1/2}
  Poly mu, nu, q2;
};

Mat sp4_assoc_higgs(const Sp4Data& d, cplx z);
HiggsField sp4_field(const Sp4Data& d);
Mat sp4_pairing();  // pairs V with V^dual
// Polynomial test: 4 mu nu and q2^2 - mu nu both not identically zero.
bool sp4_regular_semisimple(const Sp4Data& d);
// Eigenvalue-distinctness of the assembled field at `samples` random points.
bool sp4_regular_semisimple_bruteforce(const Sp4Data& d, int samples, std::uint64_t seed);

HolomorphicChain sp4_graded_chain(const Sp4Data& d);
std::vector<int> sp4_chain_order();  // N, N K^{-1}, N^{-1} K, N^{-1}
// h_L H0 on (N, N K^{-1}) and h_L^{-1} H0 on (N^{-1}K, N^{-1}), in E order.
Mat sp4_block_metric(double hL, const Mat& H0);
// The mu = nu = q2 = 0 metric, H0 = h_X of rank 2.
Mat sp4_closed_form(double hL, cplx z);

enum class Form { so, sp4 };
// Block-off-diagonal coupling plus the structure defects of the diagonal blocks.
std::vector<double> structure_compat_defect(const MetricField& H, Form form);
double structure_compat_defect(const Mat& G, Form form);

struct RealFormSolve {
  MetricField chain_metric;               // E order
  solver::SolveReport chain_report;
  double chain_defect = 0.0;
  bool full_done = false;
  MetricField full;
  solver::SolveReport full_report;
  double full_defect = 0.0;
  double domination_margin = 0.0;        // max v_k of the full solve against the chain metric
};
// Graded chain via the Toda path; optionally the full field, started from the chain metric.
RealFormSolve collier_solve(const SOData& d, GridPtr grid, const solver::SolverConfig& cfg, bool full);
RealFormSolve gothen_solve(const Sp4Data& d, GridPtr grid, const solver::SolverConfig& cfg, bool full);

}  // namespace hitchin::realforms
