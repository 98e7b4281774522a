#include "odrc/analysis.hpp"
#include "odrc/reservoir.hpp"
#include "odrc/rng.hpp"
#include "odrc/targets.hpp"
#include "odrc/training.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace odrc;

namespace {

void BM_ReservoirStep(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const auto w = init_weights(n, 10, 3, GainConfig{}, 0.1, 1);
    ReservoirState s = init_state(n, 2);
    const Eigen::VectorXd o = Eigen::VectorXd::Constant(10, 0.5);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 0.1);
    const StepParams params;
    for (auto _ : state) {
        step(s, w, o, 0.0, y, params);
        benchmark::DoNotOptimize(s.x.data());
    }
}
BENCHMARK(BM_ReservoirStep)->Arg(400)->Arg(1000)->Arg(3000);

void BM_RlsUpdate(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Readout ro(3, n);
    RlsState rls(n, 1.0);
    std::vector<Eigen::VectorXd> pool;
    for (std::uint64_t i = 0; i < 64; ++i)
        pool.push_back(init_state(n, i).r);
    const Eigen::VectorXd d = Eigen::VectorXd::Constant(3, 0.2);
    std::size_t i = 0;
    for (auto _ : state) {
        rls_update(rls, ro, pool[i++ % pool.size()], d);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_RlsUpdate)->Arg(400)->Arg(1000)->Arg(3000);

void BM_KsStep(benchmark::State& state)
{
    KsParams params;
    KsSolver ks(params, ks_initial_condition(params));
    for (auto _ : state) {
        ks.step();
        benchmark::DoNotOptimize(ks.spectrum().data());
    }
}
BENCHMARK(BM_KsStep);

void BM_SanoSawada(benchmark::State& state)
{
    const auto samples = static_cast<Eigen::Index>(state.range(0));
    const Eigen::MatrixXd series = lorenz_raw(samples);
    SanoSawadaParams params;
    params.model_time_per_sample = lorenz_sampling.h * lorenz_sampling.downsample;
    for (auto _ : state)
        benchmark::DoNotOptimize(lyapunov_sano_sawada(series, params).exponents);
}
BENCHMARK(BM_SanoSawada)->Arg(20000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
