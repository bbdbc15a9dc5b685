// Serial reference vs OpenMP for the three sweep kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "cablevolt/annual_energy.hpp"
#include "cablevolt/optimizer.hpp"
#include "cablevolt/study_config.hpp"

using namespace cablevolt;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_Envelope(benchmark::State& state) {
    const CableSpec s = builtin_cable(kBuiltinCableProfile);
    std::vector<double> lengths;
    for (int km = 50; km <= 400; km += 25) {
        lengths.push_back(km);
    }
    const std::vector<double> volts{1.0, 0.8, 0.6, 0.4};
    const Constraints c = Constraints::for_cable(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(transfer_envelope(s, lengths, volts, c, mode(state)));
    }
}

void BM_Annual(benchmark::State& state) {
    CableSpec s = builtin_cable(kBuiltinCableProfile);
    s.length_km = 200.0;
    SynthOptions o;
    o.n_bins = 50;
    const DurationCurve curve = synth_duration_curve(o).curve;
    const Constraints c = Constraints::for_cable(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(annual_efficiency(s, 320e6, curve, VoltageStrategy::range(0.4, 1.0), c, mode(state)));
    }
}

void BM_ScalingGrid(benchmark::State& state) {
    CableSpec s = builtin_cable(kBuiltinCableProfile);
    s.length_km = 200.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_scaling_unconstrained(s, 1.0, 1.1, mode(state)));
    }
}

}  // namespace

BENCHMARK(BM_Envelope)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Annual)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScalingGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
