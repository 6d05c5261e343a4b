#include <regrid/engine.hpp>
#include <regrid/sweep.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace regrid;

namespace {

gain_matrix random_gains(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-1000, 1000);
    std::vector<cost_t> v(std::size_t(n) * n);
    for (auto& x : v) x = dist(rng);
    for (int j = 0; j < n; ++j) v[std::size_t(j) * n + j] = 0;
    return gain_matrix(n, std::move(v));
}

void bm_lap_exact(benchmark::State& state) {
    const auto gm = random_gains(int(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(solve_lap_exact(gm));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_lap_exact)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void bm_lap_greedy(benchmark::State& state) {
    const auto gm = random_gains(int(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(solve_lap_greedy(gm));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_lap_greedy)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void bm_build_package_set(benchmark::State& state) {
    const index_t block = state.range(0);
    const auto la = make_block_cyclic(1000, 1000, 100, 100, 10, 10, ordering::col_major);
    const auto lb = make_block_cyclic(1000, 1000, block, block, 10, 10);
    for (auto _ : state) benchmark::DoNotOptimize(build_package_set(la, lb));
}
BENCHMARK(bm_build_package_set)->Arg(10)->Arg(25)->Arg(50)->Arg(100);

void bm_sweep_point(benchmark::State& state) {
    sweep_config cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sweep_point(cfg, state.range(0)));
}
BENCHMARK(bm_sweep_point)->Arg(1)->Arg(20)->Arg(100);

void bm_execute(benchmark::State& state) {
    const index_t m = state.range(0);
    const auto lb = make_block_cyclic(m, m, 16, 16, 4, 4);
    const auto la = make_block_cyclic(m, m, 24, 24, 4, 4, ordering::col_major);
    const auto src = distributed_matrix<double>::scatter(lb, dense_matrix<double>(m, m, 1.0));
    const auto r = find_copr(job_packages(la, lb, op_kind::transpose, false), cost_model::locally_free_volume());
    for (auto _ : state) {
        distributed_matrix<double> dst(la);
        benchmark::DoNotOptimize(execute(transform_job<double>{&src, &dst, 1.0, 0.0, op_kind::transpose}, r));
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * m * m * 8);
}
BENCHMARK(bm_execute)->Arg(256)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
