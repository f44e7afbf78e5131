#include <benchmark/benchmark.h>

#include "resmono/catalysis.hpp"
#include "resmono/coherence.hpp"
#include "resmono/cones.hpp"
#include "resmono/ree.hpp"

using namespace resmono;

static void BM_HermEig(benchmark::State& state) {
  Rng rng(1);
  const Matrix m = random_hermitian(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(m));
}
BENCHMARK(BM_HermEig)->Arg(4)->Arg(16)->Arg(36)->Arg(64);

static void BM_LmoPpt(benchmark::State& state) {
  Rng rng(2);
  const int d = static_cast<int>(state.range(0));
  const Matrix g = random_hermitian(d * d, rng);
  const Bipartition cut = Bipartition::two_party(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(lmo_ppt(g, cut));
}
BENCHMARK(BM_LmoPpt)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ReePpt(benchmark::State& state) {
  Rng rng(3);
  const DensityMatrix rho = random_density({2, static_cast<int>(state.range(0))}, rng, 1, {0});
  for (auto _ : state) benchmark::DoNotOptimize(ree_ppt(rho));
}
BENCHMARK(BM_ReePpt)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_CoherenceOfFormation(benchmark::State& state) {
  Rng rng(4);
  const DensityMatrix rho = random_density({static_cast<int>(state.range(0))}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(c_f(rho));
}
BENCHMARK(BM_CoherenceOfFormation)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_PptOpsFidelity(benchmark::State& state) {
  const DensityMatrix rho = state.range(0) == 0 ? isotropic(2, 0.8) : tiles_upb();
  for (auto _ : state) benchmark::DoNotOptimize(ppt_ops_fidelity(rho));
}
BENCHMARK(BM_PptOpsFidelity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
