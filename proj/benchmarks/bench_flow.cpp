#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "seawake/flowlab.hpp"
#include "seawake/metrics.hpp"

using namespace seawake;

static void BM_PolynomialExpansion(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const flow::Frame f = testfix::smooth_noise(n, n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow::polynomial_expansion(f, 5, 1.1));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_PolynomialExpansion)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_FarnebackFlow(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const flow::Frame canvas = testfix::smooth_noise(n + 16, n + 16, 2);
    const flow::Frame prev = testfix::crop_view(canvas, 8, 8, n, n);
    const flow::Frame next = testfix::crop_view(canvas, 5, 8, n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow::farneback_flow(prev, next));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_FarnebackFlow)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Warp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const flow::Frame f = testfix::smooth_noise(n, n, 3);
    flow::FlowField field = flow::FlowField::make(n, n);
    for (auto& v : field.dx) v = 2.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow::warp(f, field, 0.5));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Warp)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_LkTrackPair(benchmark::State& state) {
    const flow::Frame bg = testfix::smooth_noise(512, 320, 4, 5.0, 0.25, 0.5);
    std::vector<flow::Frame> frames;
    for (int i = 0; i < 2; ++i) {
        flow::Frame f = bg;
        testfix::add_blob(f, 200.0 + 2.0 * i, 160.0, 4.0);
        frames.push_back(std::move(f));
    }
    const PixelPoint seeds[] = {{200.0, 160.0}, {300.0, 150.0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow::lk_track(frames, seeds, {}));
    }
}
BENCHMARK(BM_LkTrackPair)->Unit(benchmark::kMillisecond);

static void BM_TemporalSmoothness(benchmark::State& state) {
    const flow::Frame canvas = testfix::smooth_noise(320, 240, 5);
    std::vector<flow::Frame> frames;
    for (int i = 0; i < 4; ++i)
        frames.push_back(testfix::sampled_view(canvas, 20.0 - 1.5 * i, 10.0, 256, 192));
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::temporal_smoothness(frames));
    }
}
BENCHMARK(BM_TemporalSmoothness)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
