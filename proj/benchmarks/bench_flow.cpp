#include "vhb/dynamics.hpp"
#include "vhb/geometry.hpp"
#include "vhb/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace vhb;

namespace {

VHTable lshape() { return VHTable::build(polygon_from_text("ENWNWS", {2, 1, 1, 1, 1, 2})); }

void BM_NextEvent(benchmark::State& state) {
    const Billiard b(lshape());
    const PhasePoint s{{0.3, 0.4}, DirectionState::make(1.0, 1, 1)};
    for (auto _ : state) benchmark::DoNotOptimize(b.next_event(s));
}
BENCHMARK(BM_NextEvent);

void BM_Flow(benchmark::State& state) {
    const Billiard b(lshape());
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) {
        PhasePoint s{{0.3, 0.4}, DirectionState::make(1.0, 1, 1)};
        benchmark::DoNotOptimize(b.advance(s, t));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Flow)->RangeMultiplier(10)->Range(10, 10000);

void BM_Correlation(benchmark::State& state) {
    const VHTable t = lshape();
    const QuadratureGrid g(t, static_cast<int>(state.range(0)));
    const Observable h = Observable::cosine({1, 0}, 2, 2);
    const auto times = time_grid(0.0, 10.0, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(correlation(t, 1.0, h, times, g, {.workers = 1}));
    state.counters["phase_points"] = static_cast<double>(g.phase_size());
}
BENCHMARK(BM_Correlation)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TileAverage(benchmark::State& state) {
    const VHTable t = approximate_pq(lshape(), 5, 0.1);
    const QuadratureGrid g(t, static_cast<int>(state.range(0)));
    const auto ha = restrict(Observable::cosine({1, 1}, 2, 2), g);
    for (auto _ : state) benchmark::DoNotOptimize(tile_average(ha, *t.certificate(), g));
}
BENCHMARK(BM_TileAverage)->Arg(20)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
