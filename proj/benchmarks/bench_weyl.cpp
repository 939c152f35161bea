#include <benchmark/benchmark.h>

#include "phasespace/distributions.hpp"
#include "phasespace/random.hpp"
#include "phasespace/weyl.hpp"

using namespace phasespace;

static void BM_WeylSymbolFast(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const OperatorMatrix a = random_hermitian(make_space(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(weyl_symbol(a));
  state.SetComplexityN(n);
}
BENCHMARK(BM_WeylSymbolFast)->Arg(15)->Arg(31)->Arg(63)->Arg(127)->Arg(255)->Complexity();

static void BM_WeylSymbolDirect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const OperatorMatrix a = random_hermitian(make_space(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(weyl_symbol_direct(a));
  state.SetComplexityN(n);
}
BENCHMARK(BM_WeylSymbolDirect)->Arg(15)->Arg(31)->Arg(63)->Complexity();

static void BM_InverseWeyl(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const WeylSymbol s = random_real_symbol(make_space(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_weyl(s));
}
BENCHMARK(BM_InverseWeyl)->Arg(31)->Arg(127);

static void BM_Husimi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const SpacePtr s = make_space(n);
  const OperatorMatrix rho = random_pure_state(s, rng);
  const CoherentFrame frame(s, default_frame_width(n));
  for (auto _ : state) benchmark::DoNotOptimize(husimi_of(rho, frame));
}
BENCHMARK(BM_Husimi)->Arg(31)->Arg(63);
