#include <benchmark/benchmark.h>

#include "seawake/geoproject.hpp"
#include "seawake/synthscene.hpp"

using namespace seawake;

namespace {

synth::MotionScript bench_script() {
    synth::MotionScript script;
    script.vessels.push_back({1, {{0.0, 200.0, 200.0}, {2.0, 260.0, 210.0}}, 5.0, 0.95});
    script.vessels.push_back({2, {{0.0, 400.0, 300.0}, {2.0, 340.0, 280.0}}, 5.0, 0.9});
    script.background = {7, 3, 0.2, 0.1};
    return script;
}

const geo::ClipTiming kTiming{0.0, 7.0, 14, 1024, 576};

geo::CameraFrameModel bench_model() {
    return synth::make_scene_model(bench_script(), kTiming, geo::LocalOrigin::at(25.0, 37.0),
                                   {512.0, 288.0}, 100.0, 28.3);
}

}  // namespace

static void BM_ProjectTrajectory(benchmark::State& state) {
    const auto script = bench_script();
    const auto model = bench_model();
    const auto scene = synth::generate_scene(script, kTiming, model);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geo::project_trajectory(scene.log, 1, model));
    }
}
BENCHMARK(BM_ProjectTrajectory);

static void BM_InverseProjectRoundTrip(benchmark::State& state) {
    const auto model = bench_model();
    for (auto _ : state) {
        const auto fix = geo::inverse_project({700.25, 400.5}, 1.0, model, 1);
        benchmark::DoNotOptimize(geo::project_point(fix, model, 1));
    }
}
BENCHMARK(BM_InverseProjectRoundTrip);

static void BM_SceneRender(benchmark::State& state) {
    const auto script = bench_script();
    geo::ClipTiming timing = kTiming;
    timing.n_frames = 2;
    const auto model = synth::make_scene_model(script, timing, geo::LocalOrigin::at(25.0, 37.0),
                                               {512.0, 288.0}, 100.0, 28.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(synth::generate_scene(script, timing, model));
    }
    state.SetItemsProcessed(state.iterations() * timing.width * timing.height * timing.n_frames);
}
BENCHMARK(BM_SceneRender)->Unit(benchmark::kMillisecond);
