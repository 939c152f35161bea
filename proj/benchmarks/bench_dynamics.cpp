#include <benchmark/benchmark.h>

#include "phasespace/dynamics.hpp"
#include "phasespace/random.hpp"

using namespace phasespace;

namespace {

struct Fixture {
  explicit Fixture(int n) : space(make_space(n)), rng(7), h(random_hermitian(space, rng)), f(random_real_symbol(space, rng)) {}
  SpacePtr space;
  Rng rng;
  OperatorMatrix h;
  WeylSymbol f;
};

}  // namespace

static void BM_MoyalRhsSpectral(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(moyal_rhs(fx.h, fx.f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MoyalRhsSpectral)->Arg(15)->Arg(31)->Arg(63)->Arg(127)->Complexity();

static void BM_KernelDenseApply(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  const MoyalKernel k = build_kernel(weyl_symbol(fx.h));
  for (auto _ : state) benchmark::DoNotOptimize(k.apply(fx.f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelDenseApply)->Arg(15)->Arg(31)->Arg(63)->Complexity(benchmark::oNSquared);

static void BM_KernelFactorizedApply(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  const FactorizedMoyalKernel k(weyl_symbol(fx.h));
  for (auto _ : state) benchmark::DoNotOptimize(k.apply(fx.f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelFactorizedApply)->Arg(15)->Arg(31)->Arg(63)->Arg(127)->Complexity();

static void BM_BuildKernel(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  const WeylSymbol hs = weyl_symbol(fx.h);
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(hs));
}
BENCHMARK(BM_BuildKernel)->Arg(15)->Arg(31);

static void BM_ExactEvolution(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  const OperatorMatrix rho = random_density(fx.space, fx.rng);
  for (auto _ : state) benchmark::DoNotOptimize(exact_evolution(rho, fx.h, 0.1));
}
BENCHMARK(BM_ExactEvolution)->Arg(31)->Arg(127);
