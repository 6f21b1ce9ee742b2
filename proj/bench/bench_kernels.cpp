#include "uavnet/kernels.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace uavnet;

namespace {

const std::vector<Interferer>& interferers() {
    static const std::vector<Interferer> set = {
        {Fading::rician(3.2), 4e-7, 3.0}, {Fading::rayleigh(2.0), 1e-7, 2.0}, {Fading::rician(4.5), 2e-7, 3.0},
        {Fading::rayleigh(2.0), 3e-7, 2.0}, {Fading::rician(2.8), 5e-7, 3.0}, {Fading::rayleigh(2.0), 2e-7, 2.0},
        {Fading::rician(3.9), 1e-7, 3.0}, {Fading::rician(3.0), 6e-7, 3.0}, {Fading::rician(3.5), 2e-7, 3.0},
    };
    return set;
}

void BM_moments_serial(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::moments_serial(interferers(), 14, n, 1));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_moments_parallel(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::moments_parallel(interferers(), 14, n, 1));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_count_transmit_serial(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::count_transmit_serial(Fading::rician(3.2), 3.5, 14, n, 1));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_count_transmit_parallel(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::count_transmit_parallel(Fading::rician(3.2), 3.5, 14, n, 1));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

} // namespace

BENCHMARK(BM_moments_serial)->Arg(200000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_moments_parallel)->Arg(200000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_count_transmit_serial)->Arg(1000000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_count_transmit_parallel)->Arg(1000000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
