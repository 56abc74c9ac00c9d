#include <benchmark/benchmark.h>

#include "wncs/delay_approx.hpp"
#include "wncs/delay_est.hpp"
#include "wncs/lti.hpp"
#include "wncs/scenario.hpp"
#include "wncs/stability.hpp"

using namespace wncs;

namespace {

void BM_ClosedLoop(benchmark::State& state, const char* channel, const char* smith) {
    ScenarioConfig cfg = make_preset(channel, smith);
    for (auto _ : state) {
        RunRecord rec = run_closed_loop(cfg);
        benchmark::DoNotOptimize(rec.rows.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.duration / cfg.sample_time));
}
BENCHMARK_CAPTURE(BM_ClosedLoop, wired_pi, "wired", "none")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ClosedLoop, uniform_adaptive_dfr, "intermediate-uniform", "adaptive-dfr")
    ->Unit(benchmark::kMillisecond);

void BM_IseTable(benchmark::State& state) {
    const double taus[] = {0.04, 0.12, 0.24, 0.3, 1.0};
    for (auto _ : state) {
        double total = 0.0;
        for (ApproxKind kind : kAllApproxKinds) {
            for (double tau : taus) total += ise_vs_true_delay(kind, tau).ise;
        }
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_IseTable)->Unit(benchmark::kMillisecond);

void BM_EstimatorReplay(benchmark::State& state) {
    ScenarioConfig cfg = make_preset("intermediate-uniform");
    const RunRecord rec = run_closed_loop(cfg);
    const Millis last = rec.rows.back().t_ms;
    for (auto _ : state) {
        auto est = replay(rec.exchange, 20, last);
        benchmark::DoNotOptimize(est.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rec.rows.size()));
}
BENCHMARK(BM_EstimatorReplay);

void BM_Zoh(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(zoh_discretize_first_order(4.159, 3.888, 0.02));
}
BENCHMARK(BM_Zoh);

void BM_NyquistLocus(benchmark::State& state) {
    const ContinuousTf g = identified_motor_ct();
    const auto grid = default_omega_grid(g);
    for (auto _ : state) benchmark::DoNotOptimize(encirclements(nyquist_locus(g, 2.0, grid)));
}
BENCHMARK(BM_NyquistLocus);

}  // namespace

BENCHMARK_MAIN();
