// Serial reference paths against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <numbers>

#include "secrecy/montecarlo.hpp"
#include "secrecy/optimizer.hpp"

using namespace secrecy;

namespace {

SimConfig sim_config(Scheme scheme) {
    SimConfig cfg;
    cfg.scheme = scheme;
    cfg.frames = 1'000'000;
    cfg.geometry.theta = 0.8;
    cfg.classifier = ClassifierSpec::window(0, 3, true);
    return cfg;
}

SearchGrid grid() {
    SearchGrid g;
    g.scheme_params = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    g.laws = SearchGrid::uniform_laws_db({0, 5, 10, 15, 20, 25});
    for (int i = 0; i <= 8; ++i) g.thetas.push_back(std::numbers::pi * i / 8);
    g.classifiers = SearchGrid::default_adversaries();
    return g;
}

void BM_SimulateTwoWayReference(benchmark::State& state) {
    const auto cfg = sim_config(Scheme::twoway);
    for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_twoway(cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.frames));
}

void BM_SimulateTwoWayParallel(benchmark::State& state) {
    const auto cfg = sim_config(Scheme::twoway);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_twoway(cfg, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.frames));
}

void BM_SimulateTdmReference(benchmark::State& state) {
    const auto cfg = sim_config(Scheme::tdm);
    for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_tdm(cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.frames));
}

void BM_SimulateTdmParallel(benchmark::State& state) {
    const auto cfg = sim_config(Scheme::tdm);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_tdm(cfg, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.frames));
}

void BM_OptimizeReference(benchmark::State& state) {
    const auto g = grid();
    const auto scheme = static_cast<Scheme>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(reference::optimize(scheme, g, ProblemSetup{}));
}

void BM_OptimizeParallel(benchmark::State& state) {
    const auto g = grid();
    const auto scheme = static_cast<Scheme>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(optimize(scheme, g, ProblemSetup{}, static_cast<int>(state.range(1))));
}

}  // namespace

BENCHMARK(BM_SimulateTwoWayReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateTwoWayParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateTdmReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateTdmParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeParallel)->Args({0, 1})->Args({0, 4})->Args({1, 1})->Args({1, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
