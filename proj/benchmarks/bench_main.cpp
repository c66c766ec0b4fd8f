#include <benchmark/benchmark.h>

#include <random>

#include "hitchin/analysis.hpp"
#include "hitchin/gauge.hpp"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/solver.hpp"

using namespace hitchin;

namespace {

DifferentialTuple q3z() {
  DifferentialTuple q(3);
  q.Q(3) = Poly::monomial(1.0, 1);
  return q;
}

void BM_HitchinResidual(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  auto g = make_grid(0.8, nr, 2 * nr);
  const MetricField H = hyperbolic::hx_field(g, 3);
  const HiggsField A = companion_field(q3z());
  for (auto _ : state) benchmark::DoNotOptimize(solver::hitchin_residual(H, A));
  state.SetItemsProcessed(state.iterations() * g->size());
}
BENCHMARK(BM_HitchinResidual)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TodaSolve(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  auto g = make_grid(0.8, nr, 2 * nr);
  const std::vector<Poly> links{Poly::constant(1.0), Poly::monomial(1.0, 1)};
  auto boundary = [](cplx z) { return solver::metric_to_toda(hyperbolic::hx_metric(3, z)); };
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_toda_chain(links, boundary, g, solver::SolverConfig{}));
}
BENCHMARK(BM_TodaSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DirichletSolve(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  auto g = make_grid(0.8, nr, 2 * nr);
  const HiggsField A = companion_field(q3z());
  auto boundary = [](cplx z) { return hyperbolic::hx_metric(3, z); };
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_dirichlet(A, boundary, g, solver::SolverConfig{}));
}
BENCHMARK(BM_DirichletSolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GaugeNormalize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<exact::QPolyMatrix> inputs;
  for (int k = 0; k < 16; ++k) inputs.push_back(gauge::random_instance(n, rng));
  size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gauge::normalize_to_companion(inputs[k++ % inputs.size()]));
}
BENCHMARK(BM_GaugeNormalize)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_ClassMembership(benchmark::State& state) {
  const auto f = analysis::DiskFunction::from([](cplx z) { return 1.0 / (1.0 - std::norm(z)); }, true);
  for (auto _ : state) benchmark::DoNotOptimize(analysis::class_membership(f));
}
BENCHMARK(BM_ClassMembership)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
