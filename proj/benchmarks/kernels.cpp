#include <benchmark/benchmark.h>

#include <random>

#include "openchain/dynamics.hpp"
#include "openchain/oracles.hpp"
#include "openchain/sector_engine.hpp"

using namespace openchain;

namespace {

ComplexMatrix random_density(int q) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const Eigen::Index d = Eigen::Index{1} << q;
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

ChainConfig neel(Channel ch, double gamma) {
  ChainConfig c;
  c.channel = ch;
  c.gamma = {gamma, gamma};
  return c;
}

}  // namespace

static void BM_HermEigenvalues(benchmark::State& state) {
  const ComplexMatrix m = random_density(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(herm_eigenvalues(m));
}
BENCHMARK(BM_HermEigenvalues)->DenseRange(3, 7);

static void BM_PartialTrace(benchmark::State& state) {
  const ComplexMatrix rho = random_density(7);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, 7, {0, 1, 2, 3}));
}
BENCHMARK(BM_PartialTrace);

static void BM_PartialTranspose(benchmark::State& state) {
  const ComplexMatrix rho = random_density(4);
  for (auto _ : state) benchmark::DoNotOptimize(partial_transpose(rho, 4, {1, 2, 3}));
}
BENCHMARK(BM_PartialTranspose);

static void BM_MeasureState(benchmark::State& state) {
  const ChainConfig c = neel(Channel::Dephasing, 5.0);
  const ComplexMatrix rho = 0.9 * prepare_initial_state(c) + 0.1 * random_density(7);
  const Partition p = make_partition(c);
  for (auto _ : state) benchmark::DoNotOptimize(measure_state(rho, p));
}
BENCHMARK(BM_MeasureState)->Unit(benchmark::kMicrosecond);

static void BM_SectorStep(benchmark::State& state) {
  const Channel ch = state.range(0) == 0 ? Channel::Dephasing : Channel::Dissipation;
  SectorEngine engine(neel(ch, 5.0));
  for (auto _ : state) engine.step(5e-3);
}
BENCHMARK(BM_SectorStep)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_SectorMinEigenvalue(benchmark::State& state) {
  SectorEngine engine(neel(Channel::Dephasing, 5.0));
  for (int k = 0; k < 50; ++k) engine.step(5e-3);
  for (auto _ : state) benchmark::DoNotOptimize(engine.min_eigenvalue());
}
BENCHMARK(BM_SectorMinEigenvalue)->Unit(benchmark::kMicrosecond);

static void BM_DenseRhs(benchmark::State& state) {
  ChainConfig c = neel(Channel::Dephasing, 5.0);
  c.N = 4;
  c.n = 1;
  const OpenSystem sys = OpenSystem::from_config(c);
  EvolutionState s;
  s.rho = prepare_initial_state(c);
  s.obar = {sys.L[0] * 0.1, sys.L[1] * 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_rhs(s, sys.H, sys.L[0], sys.L[1]));
    benchmark::DoNotOptimize(obar_rhs(s, sys));
  }
}
BENCHMARK(BM_DenseRhs)->Unit(benchmark::kMicrosecond);

static void BM_QsdEnsemble(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsd_trajectory_dephasing_ensemble(0.5, 5.0, 1.0, 1e-3, 1000, 1));
  }
}
BENCHMARK(BM_QsdEnsemble)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
