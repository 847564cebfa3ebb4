#include <benchmark/benchmark.h>

#include "pcfh/charp.hpp"
#include "pcfh/pcf.hpp"

using namespace pcfh;

static void BM_box_scan_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(unicritical_box_scan(2, state.range(0)));
}

static void BM_box_scan_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(unicritical_box_scan_serial(2, state.range(0)));
}

static void BM_specialization_scan_parallel(benchmark::State& state) {
    auto F = parse_charp_family(5, "[[[0,1]],[[0]]]", 2);
    for (auto _ : state) benchmark::DoNotOptimize(specialization_scan(F, static_cast<unsigned>(state.range(0))));
}

static void BM_specialization_scan_serial(benchmark::State& state) {
    auto F = parse_charp_family(5, "[[[0,1]],[[0]]]", 2);
    for (auto _ : state) benchmark::DoNotOptimize(specialization_scan_serial(F, static_cast<unsigned>(state.range(0))));
}

BENCHMARK(BM_box_scan_parallel)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_box_scan_serial)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_specialization_scan_parallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_specialization_scan_serial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
