#include "crunch/baselines.hpp"
#include "crunch/gcs.hpp"
#include "crunch/harness.hpp"

#include <benchmark/benchmark.h>

#include <array>

namespace {

const crunch::ObjectiveSpec kWell{crunch::ObjectiveKind::exp_well, 15.0, 0.05, 2};

void BM_EvalExpWell(benchmark::State& state) {
    const std::array<double, 2> p{600.0, 600.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(crunch::eval_objective(kWell, p));
    }
}
BENCHMARK(BM_EvalExpWell);

void BM_EvalExpWellSingle(benchmark::State& state) {
    const std::array<double, 2> p{600.0, 600.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(crunch::eval_objective(kWell, p, {24}));
    }
}
BENCHMARK(BM_EvalExpWellSingle);

// One full GCS run per iteration; range(0) is the start coordinate.
void BM_GcsRun(benchmark::State& state) {
    const crunch::Objective f(kWell);
    const double s = static_cast<double>(state.range(0));
    const std::array<double, 2> start{s, s};
    crunch::GcsConfig config;
    for (auto _ : state) {
        config.seed++;
        benchmark::DoNotOptimize(crunch::gcs_run(f, start, config).best_value);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(config.max_iters + 1));
}
BENCHMARK(BM_GcsRun)->Arg(600)->Arg(2800)->Unit(benchmark::kMillisecond);

void BM_Baseline(benchmark::State& state) {
    const crunch::Objective f(kWell);
    const std::array<double, 2> start{200.0, 200.0};
    crunch::BaselineConfig config;
    config.method = static_cast<crunch::BaselineMethod>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(crunch::run_baseline(f, start, config).best_value);
    }
    state.SetLabel(std::string(crunch::to_string(config.method)));
}
BENCHMARK(BM_Baseline)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_FailProb(benchmark::State& state) {
    const std::vector<std::vector<double>> starts{{2800.0, 2800.0}};
    crunch::FailProbOptions options;
    options.trials = 20;
    options.jobs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(crunch::run_failprob(kWell, starts, options).rows[0].failures);
    }
}
BENCHMARK(BM_FailProb)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
