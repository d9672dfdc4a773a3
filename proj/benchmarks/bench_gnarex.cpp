#include <gnarex/arima.hpp>
#include <gnarex/estimation.hpp>
#include <gnarex/forecasting.hpp>
#include <gnarex/model.hpp>
#include <gnarex/network.hpp>
#include <gnarex/simulation.hpp>

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

using namespace gnarex;

namespace {

std::shared_ptr<const StaticNetwork> graph(std::size_t nodes) {
    return std::make_shared<const StaticNetwork>(generate_graph(GraphModel::erdos_renyi(nodes, 0.4), 42));
}

void BM_NeighborhoodTables(benchmark::State& state) {
    const auto net = graph(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        NeighborhoodTables tables(*net, 3);
        benchmark::DoNotOptimize(tables);
    }
}
BENCHMARK(BM_NeighborhoodTables)->Arg(20)->Arg(50)->Arg(100);

void BM_Simulate(benchmark::State& state) {
    auto regime = table_regime(3, GraphKind::erdos_renyi, static_cast<std::size_t>(state.range(0)));
    const auto net = graph(regime.graph.node_count);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_panel(net, regime, seed++));
    }
}
BENCHMARK(BM_Simulate)->Arg(20)->Arg(50);

void BM_FitRegime3(benchmark::State& state) {
    const auto regime = table_regime(3, GraphKind::erdos_renyi, static_cast<std::size_t>(state.range(0)));
    const auto net = graph(regime.graph.node_count);
    const PanelSeries panel = simulate_panel(net, regime, 7);
    const NeighborhoodTables tables(*net, regime.spec.max_stage());
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(panel, tables, regime.spec));
    }
}
BENCHMARK(BM_FitRegime3)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Forecast(benchmark::State& state) {
    const auto regime = table_regime(3);
    const auto net = graph(20);
    const GnarexFit f = fit(simulate_panel(net, regime, 7), regime.spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forecast(f, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_Forecast)->Arg(1)->Arg(12);

void BM_AutoArima(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    double level = 0.0;
    for (auto& v : x) {
        level = 0.6 * level + z(rng);
        v = level;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(auto_arima(x));
    }
}
BENCHMARK(BM_AutoArima)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
