// Serial reference path vs OpenMP path for the two hot kernels.
#include "secondchange/bootstrap.hpp"
#include "secondchange/cusum.hpp"
#include "secondchange/pls_sim.hpp"
#include "secondchange/smoothing.hpp"

#include <benchmark/benchmark.h>

namespace sc = secondchange;

namespace {

sc::TimeSeries sample(std::size_t n) {
    sc::PlsModelSpec spec;
    spec.model = sc::ModelId::I;
    return sc::simulate(spec, n, 11);
}

void local_linear(benchmark::State& state, sc::Execution exec) {
    const sc::TimeSeries y = sample(static_cast<std::size_t>(state.range(0)));
    const std::vector<double> t = sc::unit_grid(y.size());
    const sc::Kernel k;
    for (auto _ : state) benchmark::DoNotOptimize(sc::local_linear(t, y.values(), 0.1, k, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void replicates(benchmark::State& state, sc::Execution exec) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const sc::TimeSeries y = sample(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = y[i] * y[i];
    const std::size_t m = sc::cube_root_floor(n);
    const std::vector<double> dev = sc::block_deviations(sq, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sc::run_replicates(
            500, dev.size(), 3,
            [&](std::span<const double> R) {
                std::vector<double> phi(dev.size());
                sc::phi_from_deviations(dev, m, R, phi);
                return sc::bootstrap_max_statistic(phi, m, n);
            },
            exec));
    }
}

}  // namespace

BENCHMARK_CAPTURE(local_linear, serial, sc::Execution::serial)->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(local_linear, parallel, sc::Execution::parallel)->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(replicates, serial, sc::Execution::serial)->Arg(300)->Arg(1000);
BENCHMARK_CAPTURE(replicates, parallel, sc::Execution::parallel)->Arg(300)->Arg(1000);

BENCHMARK_MAIN();
