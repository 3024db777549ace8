// Serial reference kernels against the OpenMP ones.

#include <benchmark/benchmark.h>

#include "hspline/error_metrics.hpp"
#include "hspline/spline.hpp"

using namespace hspline;

namespace {

Partition quartic_partition(long long n)
{
    return build_partition(*registry_get("quartic"), n, 2.0);
}

void fit_with(benchmark::State& state, Execution exec)
{
    const FieldPtr f = registry_get("quartic");
    const Partition part = quartic_partition(state.range(0));
    for (auto _ : state) {
        SplineModel model = fit(*f, part, kCellTruncation, exec);
        benchmark::DoNotOptimize(model);
    }
    state.counters["cells"] = static_cast<double>(part.total_cells());
    state.counters["workers"] = exec == Execution::parallel ? worker_count() : 1;
}

void lp_error_with(benchmark::State& state, Execution exec)
{
    const FieldPtr f = registry_get("quartic");
    const SplineModel model = fit(*f, quartic_partition(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lp_error(*f, model, 2.0, {}, exec).total_p_norm);
    }
    state.counters["cells"] = static_cast<double>(model.partition().total_cells());
    state.counters["workers"] = exec == Execution::parallel ? worker_count() : 1;
}

void BM_FitSerial(benchmark::State& s) { fit_with(s, Execution::serial); }
void BM_FitParallel(benchmark::State& s) { fit_with(s, Execution::parallel); }
void BM_LpErrorSerial(benchmark::State& s) { lp_error_with(s, Execution::serial); }
void BM_LpErrorParallel(benchmark::State& s) { lp_error_with(s, Execution::parallel); }

} // namespace

BENCHMARK(BM_FitSerial)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitParallel)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LpErrorSerial)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LpErrorParallel)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
