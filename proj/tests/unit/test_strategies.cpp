#include <doctest.h>

#include "instances.hpp"
#include "tsagg/combinatorics.hpp"
#include "tsagg/error.hpp"
#include "tsagg/strategies.hpp"
#include "tsagg/study.hpp"

using namespace tsagg;

namespace {

std::vector<std::uint64_t> counts(const StrategyTrace& t) {
    std::vector<std::uint64_t> out;
    for (const auto& l : t.levels) out.push_back(l.evaluated);
    return out;
}

using Counts = std::vector<std::uint64_t>;

}  // namespace

TEST_CASE("strategy names") {
    CHECK(parse_strategy("greedy-adjacent") == Strategy::greedy_adjacent);
    CHECK(parse_strategy("greedy_adjacent") == Strategy::greedy_adjacent);
    CHECK(to_string(Strategy::exhaustive) == "exhaustive");
    CHECK_THROWS_AS(parse_strategy("random"), ValidationError);
}

TEST_CASE("two basis set") {
    const Study st = run_study(testing::toy_network(), testing::toy_data({3.0, 4.0, 8.0, 12.0}), 1);
    const StrategyTrace ex = exhaustive_strategy(st.bases);
    CHECK(counts(ex) == Counts{1, 1});
    CHECK(ex.level(1)->partition == Partition::single(2));
    CHECK(std::abs(ex.level(1)->com - 27.0) < 1e-12);
    CHECK(counts(greedy_strategy(st.bases)) == Counts{1, 1});

    StrategyOptions capped;
    capped.exhaustive_cap = 1;
    CHECK_THROWS_AS(exhaustive_strategy(st.bases, capped), LimitError);
}

TEST_CASE("eight element counts") {
    const ClusterAdditiveCost cost = testing::reference_trajectory_cost();
    const StrategyTrace ex = exhaustive_strategy(cost);
    CHECK(counts(ex) == Counts{1, 28, 266, 1050, 1701, 966, 127, 1});
    const StrategyTrace gr = greedy_strategy(cost);
    CHECK(counts(gr) == Counts{1, 28, 21, 15, 10, 6, 3, 1});
    CHECK(ex.level(8)->partition == Partition::identity(8));
    CHECK(ex.level(8)->com == 0.0);
}

TEST_CASE("greedy follows the reference trajectory") {
    const StrategyTrace gr = greedy_strategy(testing::reference_trajectory_cost());
    CHECK(gr.level(7)->partition.to_string() == "{1},{2,3},{4},{5},{6},{7},{8}");
    CHECK(gr.level(6)->partition.to_string() == "{1,8},{2,3},{4},{5},{6},{7}");
    CHECK(gr.level(5)->partition.to_string() == "{1,8},{2,3},{4},{5,7},{6}");
    CHECK(gr.level(4)->partition.to_string() == "{1,4,8},{2,3},{5,7},{6}");
    CHECK(gr.level(3)->partition.to_string() == "{1,2,3,4,8},{5,7},{6}");
    CHECK(gr.level(2)->partition.to_string() == "{1,2,3,4,5,7,8},{6}");
}

TEST_CASE("greedy with adjacency") {
    const auto pairs = testing::reference_adjacency();
    const AdjacencyList adj(pairs);
    CHECK(adj.size() == 11);
    const std::vector<std::size_t> c23_4{1, 2, 3}, c23_6{1, 2, 5};
    CHECK(adj.connected(c23_4));
    CHECK_FALSE(adj.connected(c23_6));
    CHECK_THROWS_AS(AdjacencyList().add(2, 2), ContractError);

    const ClusterAdditiveCost cost = testing::reference_trajectory_cost();
    const StrategyTrace ga = greedy_adjacent_strategy(cost, adj);
    CHECK(counts(ga) == Counts{1, 11, 10, 8, 7, 4, 3, 1});
    const StrategyTrace gr = greedy_strategy(cost);
    for (std::size_t i = 0; i < ga.levels.size(); ++i) {
        CHECK(ga.levels[i].evaluated <= gr.levels[i].evaluated);
        CHECK_FALSE(ga.levels[i].fallback);
    }

    const StrategyTrace none = greedy_adjacent_strategy(cost, AdjacencyList());
    CHECK(counts(none) == counts(gr));
    for (std::size_t i = 1; i < none.levels.size(); ++i) CHECK(none.levels[i].fallback);
}

TEST_CASE("ties go to the canonically first partition") {
    const ClusterAdditiveCost flat(5, 0.0, [](std::span<const std::size_t>) { return 0.0; });
    const StrategyTrace ex = exhaustive_strategy(flat);
    for (std::size_t k = 1; k <= 5; ++k) {
        CHECK(ex.level(k)->partition == PartitionEnumerator(5, k).partition());
    }
    const StrategyTrace gr = greedy_strategy(flat);
    CHECK(gr.level(4)->partition == Partition({{0, 1}, {2}, {3}, {4}}));
    CHECK(gr.level(4)->tie);
}

TEST_CASE("hierarchy, dominance and additive cost on random instances") {
    for (std::uint64_t seed : {2u, 5u, 9u}) {
        const auto inst = testing::random_instance(seed, 100);
        const Study st = run_study(inst.network, inst.data, 2);
        if (st.bases.size() < 3 || st.bases.size() > 9) continue;
        const StrategyTrace gr = greedy_strategy(st.bases);
        const StrategyTrace ex = exhaustive_strategy(st.bases);
        for (std::size_t i = 0; i + 1 < gr.levels.size(); ++i) {
            const Partition& fine = gr.levels[i].partition;
            const Partition& coarse = gr.levels[i + 1].partition;
            CHECK(coarse.size() + 1 == fine.size());
            CHECK(fine.refines(coarse));
        }
        for (const auto& l : gr.levels) {
            CHECK(ex.level(l.k)->com <= l.com + 1e-9 * std::max(1.0, std::abs(l.com)));
            const MergeEvaluation direct = com_partition(l.partition, st.bases);
            CHECK(std::abs(direct.com - l.com) <= 1e-12 * std::max(1.0, direct.ov_I));
        }
    }
}

TEST_CASE("adjacency detection on a one dimensional sweep") {
    std::vector<double> demand;
    for (int i = 1; i <= 40; ++i) demand.push_back(0.25 * i + 0.1);
    const Study st = run_study(testing::toy_network(), testing::toy_data(demand), 1);
    REQUIRE(st.bases.size() == 2);
    const auto points = st.raw_points();
    const auto in = detect_adjacency(st.bases, points, AdjacencyMode::input_space);
    const auto as = detect_adjacency(st.bases, points, AdjacencyMode::active_set);
    CHECK(in.adjacency.contains(0, 1));
    CHECK(as.adjacency.contains(0, 1));
    CHECK(in.delta > 0.0);
}

TEST_CASE("active set adjacency rejects larger differences") {
    const Study st = run_study(testing::toy_network(), testing::toy_data({0.0, 3.0, 8.0}), 1);
    REQUIRE(st.bases.size() == 3);
    const auto as = detect_adjacency(st.bases, st.raw_points(), AdjacencyMode::active_set);
    // zero demand {balance, zero:G1, zero:G2} vs cap {cap1, balance}: four rows differ.
    CHECK_FALSE(as.adjacency.contains(0, 2));
    CHECK(as.adjacency.contains(1, 2));
}
