// Microbenchmarks for the solver hot paths: measure routes at growing set
// sizes, truncated-chain factorization, and the Monte Carlo estimators.

#include <benchmark/benchmark.h>

#include <random>

#include <harmlat/chain.hpp>
#include <harmlat/constructions.hpp>
#include <harmlat/montecarlo.hpp>
#include <harmlat/solver.hpp>
#include <harmlat/strategy.hpp>

using namespace harmlat;

namespace {

SiteSet bench_set(int d, std::size_t size, std::uint64_t seed) {
  RandomSiteParams p;
  p.d = d;
  p.size = size;
  p.window = 12;
  p.star_connected = true;
  p.require_origin = true;
  p.require_origin_exposed = true;
  return random_site_set(p, seed);
}

void BM_DenseKernelMeasure(benchmark::State& state) {
  SiteSet a = bench_set(2, std::size_t(state.range(0)), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        harmonic_measure_infinity(a, 1e-9, MeasureMethod::dense_kernel));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseKernelMeasure)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_WiredMeasure(benchmark::State& state) {
  SiteSet a = bench_set(2, 12, 2);
  const double r = double(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(wired_harmonic_measure(a, r));
}
BENCHMARK(BM_WiredMeasure)->Arg(32)->Arg(64)->Arg(128);

void BM_EscapeCapacity3d(benchmark::State& state) {
  SiteSet a = bench_set(3, std::size_t(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(escape_capacity(a));
}
BENCHMARK(BM_EscapeCapacity3d)->Arg(8)->Arg(16)->Arg(32);

void BM_ChainFactorization(benchmark::State& state) {
  SiteSet a = bench_set(2, 10, 4);
  const double r = double(state.range(0));
  for (auto _ : state) {
    LatticeChain lc = lattice_chain_ball(a, r);
    ChainSolver solver(lc.chain);
    benchmark::DoNotOptimize(solver.absorption_to(0));
  }
}
BENCHMARK(BM_ChainFactorization)->Arg(16)->Arg(32)->Arg(64);

void BM_RemovalStrategy(benchmark::State& state) {
  SiteSet a = bench_set(2, std::size_t(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(select_removal_vertex(a));
}
BENCHMARK(BM_RemovalStrategy)->Arg(8)->Arg(16)->Arg(30);

void BM_MinRemovalPrice(benchmark::State& state) {
  SiteSet a = bench_set(2, std::size_t(state.range(0)), 6);
  const Point origin = Point::origin(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(min_removal_price(a, origin));
}
BENCHMARK(BM_MinRemovalPrice)->Arg(8)->Arg(16)->Arg(30);

void BM_McHittingFar(benchmark::State& state) {
  SiteSet a = bench_set(2, 8, 7);
  const double r0 = 8.0 * double(a.bbox().linf_radius() + 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mc_hitting_far(a, r0, std::size_t(state.range(0)), 11));
}
BENCHMARK(BM_McHittingFar)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_McPathTraversal(benchmark::State& state) {
  Path eta;
  eta.kind = Adjacency::plain;
  for (int i = 0; i <= 6; ++i) eta.vertices.push_back(Point(std::int64_t(i), 0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mc_path_traversal(eta, std::size_t(state.range(0)), 13));
}
BENCHMARK(BM_McPathTraversal)
    ->Arg(100000)
    ->Arg(1000000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
