#include <benchmark/benchmark.h>

#include <map>

#include "tsagg/combinatorics.hpp"
#include "tsagg/io.hpp"
#include "tsagg/lp.hpp"
#include "tsagg/merging.hpp"
#include "tsagg/strategies.hpp"
#include "tsagg/study.hpp"
#include "tsagg/transport.hpp"

namespace {

const tsagg::CaseStudy& case_study(std::size_t weeks) {
    static std::map<std::size_t, tsagg::CaseStudy> cache;
    auto it = cache.find(weeks);
    if (it == cache.end()) {
        tsagg::CaseStudyConfig cfg;
        cfg.weeks = weeks;
        it = cache.emplace(weeks, tsagg::generate_case_study(cfg)).first;
    }
    return it->second;
}

const tsagg::Study& study() {
    static const tsagg::Study s = tsagg::run_study(case_study(52).network, case_study(52).data, 0);
    return s;
}

void BM_TimestepSolve(benchmark::State& state) {
    const auto& cs = case_study(1);
    std::size_t t = 0;
    for (auto _ : state) {
        const auto lp = tsagg::build_timestep_lp(cs.network, cs.data[t++ % cs.data.size()]);
        benchmark::DoNotOptimize(tsagg::solve_lp(lp));
    }
}
BENCHMARK(BM_TimestepSolve);

void BM_Pipeline(benchmark::State& state) {
    const auto& cs = case_study(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsagg::run_study(cs.network, cs.data, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cs.data.size()));
}
BENCHMARK(BM_Pipeline)->Arg(4)->Arg(52)->Unit(benchmark::kMillisecond);

void BM_EnumeratePartitions(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        std::uint64_t total = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            tsagg::PartitionEnumerator e(n, k);
            do ++total;
            while (e.next());
        }
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_EnumeratePartitions)->Arg(8)->Arg(10);

void BM_ComPartition(benchmark::State& state) {
    const auto& bs = study().bases;
    const tsagg::ComModel model(bs);
    const tsagg::Partition p = tsagg::Partition::identity(bs.size()).merged(0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(tsagg::com_partition(p, bs, model));
}
BENCHMARK(BM_ComPartition);

void BM_Greedy(benchmark::State& state) {
    const auto& bs = study().bases;
    for (auto _ : state) benchmark::DoNotOptimize(tsagg::greedy_strategy(bs));
}
BENCHMARK(BM_Greedy);

void BM_Exhaustive(benchmark::State& state) {
    const auto& bs = study().bases;
    for (auto _ : state) benchmark::DoNotOptimize(tsagg::exhaustive_strategy(bs));
}
BENCHMARK(BM_Exhaustive)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
