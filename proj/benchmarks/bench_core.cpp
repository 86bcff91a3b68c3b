#include <benchmark/benchmark.h>

#include "mdep/inequalities.hpp"
#include "mdep/infotheory.hpp"
#include "mdep/lhv.hpp"
#include "mdep/mdsearch.hpp"
#include "mdep/teleport.hpp"

namespace {

mdep::LhvModel brans_model() {
    return mdep::brans_construct(mdep::chsh_quantum(mdep::tsirelson_scenario()), mdep::SettingSpace(2, 2));
}

void BM_Predict(benchmark::State& state) {
    const auto m = brans_model();
    for (auto _ : state) benchmark::DoNotOptimize(mdep::predict(m));
}
BENCHMARK(BM_Predict);

void BM_Cmd(benchmark::State& state) {
    const auto m = brans_model();
    for (auto _ : state) benchmark::DoNotOptimize(mdep::cmd(m));
}
BENCHMARK(BM_Cmd);

void BM_ChshQuantum(benchmark::State& state) {
    const auto s = mdep::tsirelson_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(mdep::chsh_quantum(s));
}
BENCHMARK(BM_ChshQuantum);

void BM_Teleport(benchmark::State& state) {
    const mdep::TeleportInput in(0.6, 0.8);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(mdep::run_teleportation(in, std::nullopt, seed++));
}
BENCHMARK(BM_Teleport);

void BM_KcbsPentagram(benchmark::State& state) {
    const auto s = mdep::pentagram_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(mdep::kcbs_value(s));
}
BENCHMARK(BM_KcbsPentagram);

void BM_SearchSingleRestart(benchmark::State& state) {
    mdep::SearchConfig cfg;
    cfg.restarts = 1;
    cfg.threads = 1;
    cfg.max_iterations = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mdep::min_cmd_for_chsh(2.5, cfg));
}
BENCHMARK(BM_SearchSingleRestart)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
