#include <benchmark/benchmark.h>

#include <random>

#include "momliq/momliq.hpp"
#include "momliq/oracle.hpp"

using namespace momliq;

namespace {

SynthParams bench_params(int assets, int days) {
    SynthParams p;
    p.seed = 7;
    p.n_assets = assets;
    p.n_days = days;
    p.momentum_strength = 0.3;
    p.listing_stagger_days = 1;
    p.missing_prob = 0.01;
    return p;
}

InclusionCriteria bench_criteria() {
    InclusionCriteria c;
    c.history_days = 60;
    return c;
}

void BM_GenPanel(benchmark::State& state) {
    const auto p = bench_params(static_cast<int>(state.range(0)), 365);
    for (auto _ : state) benchmark::DoNotOptimize(gen_panel(p));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 365);
}
BENCHMARK(BM_GenPanel)->Arg(50)->Arg(200);

void BM_AssignTerciles(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    std::map<AssetId, double> values;
    for (int i = 0; i < state.range(0); ++i) values["A" + std::to_string(i)] = n(rng);
    for (auto _ : state) benchmark::DoNotOptimize(assign_terciles(values));
}
BENCHMARK(BM_AssignTerciles)->Arg(100)->Arg(1000);

void BM_StudentTCdf(benchmark::State& state) {
    double x = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(student_t_cdf(x, 400.0));
        x = x > 6.0 ? -6.0 : x + 0.01;
    }
}
BENCHMARK(BM_StudentTCdf);

void BM_RunBacktest(benchmark::State& state) {
    const Panel panel = gen_panel(bench_params(static_cast<int>(state.range(0)), 400));
    const Date start = panel.first_date() + Days{70};
    PortfolioSpec spec;
    spec.selection = Selection::umd(Tercile::Low);
    spec.cost_bps = 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_backtest(panel, spec, bench_criteria(), SignalConfig{}, start, panel.last_date()));
    }
}
BENCHMARK(BM_RunBacktest)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

// Backtest cost once formations are shared, as in a full study.
void BM_RunBacktestWithPlan(benchmark::State& state) {
    const Panel panel = gen_panel(bench_params(static_cast<int>(state.range(0)), 400));
    const Date start = panel.first_date() + Days{70};
    const auto plan =
        plan_formations(panel, rebalance_schedule(start, panel.last_date(), 14), bench_criteria(), SignalConfig{});
    PortfolioSpec spec;
    spec.selection = Selection::umd(Tercile::Low);
    spec.cost_bps = 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(run_backtest(panel, spec, plan, start, panel.last_date()));
}
BENCHMARK(BM_RunBacktestWithPlan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OracleBacktest(benchmark::State& state) {
    const Panel panel = gen_panel(bench_params(25, 200));
    InclusionCriteria criteria;
    criteria.history_days = 30;
    const Date start = panel.first_date() + Days{40};
    PortfolioSpec spec;
    spec.selection = Selection::umd(Tercile::Low);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            oracle::oracle_backtest(panel, spec, criteria, SignalConfig{}, start, panel.last_date()));
    }
}
BENCHMARK(BM_OracleBacktest)->Unit(benchmark::kMillisecond);

void BM_FullStudy(benchmark::State& state) {
    RunConfig config;
    config.seed = 3;
    config.synth = bench_params(static_cast<int>(state.range(0)), 500);
    config.criteria = bench_criteria();
    const Panel panel = load_study_panel(config);
    for (auto _ : state) benchmark::DoNotOptimize(run_full_study(config, panel));
}
BENCHMARK(BM_FullStudy)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
