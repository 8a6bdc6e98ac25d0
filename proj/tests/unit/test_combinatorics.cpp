#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "tsagg/combinatorics.hpp"
#include "tsagg/error.hpp"

using namespace tsagg;

TEST_CASE("Bell numbers") {
    CHECK(bell_number(0) == 1);
    CHECK(bell_number(3) == 5);
    CHECK(bell_number(8) == 4140);
    for (std::size_t n = 1; n <= 9; ++n) CHECK(bell_number(n) == testing::all_partitions(n).size());
}

TEST_CASE("Stirling numbers of the second kind") {
    CHECK(stirling2(8, 4) == 1701);
    CHECK(stirling2(8, 2) == 127);
    for (std::size_t n = 0; n <= 30; ++n) {
        BigInt sum = 0;
        for (std::size_t k = 0; k <= n; ++k) {
            CHECK(stirling2(n, k) == testing::stirling2_explicit(n, k));
            sum += stirling2(n, k);
        }
        CHECK(sum == bell_number(n));
    }
    CHECK_THROWS_AS(stirling2(3, 4), ContractError);
}

TEST_CASE("binomials") {
    CHECK(binomial(8, 2) == 28);
    CHECK(binomial(60, 30) == BigInt("118264581564861424"));
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("partition enumeration") {
    CHECK(count_partitions(3, 2) == 3);
    CHECK(count_partitions(8, 5) == 1050);

    PartitionEnumerator one(5, 1);
    CHECK(one.partition() == Partition::single(5));
    CHECK_FALSE(one.next());

    CHECK_THROWS_AS(PartitionEnumerator(3, 0), ContractError);
    CHECK_THROWS_AS(PartitionEnumerator(3, 4), ContractError);

    for (std::size_t n = 1; n <= 7; ++n) {
        std::set<std::vector<std::vector<std::size_t>>> expected;
        for (auto p : testing::all_partitions(n)) expected.insert(Partition(p).clusters());
        std::set<std::vector<std::vector<std::size_t>>> seen;
        std::size_t produced = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            PartitionEnumerator e(n, k);
            std::vector<std::size_t> previous;
            do {
                const Partition p = e.partition();
                p.validate(n);
                CHECK(p.size() == k);
                CHECK((previous.empty() || previous < e.rgs()));
                previous = e.rgs();
                seen.insert(p.clusters());
                ++produced;
            } while (e.next());
        }
        CHECK(produced == expected.size());
        CHECK(seen == expected);
    }
}

TEST_CASE("partition canonical form") {
    const Partition p({{3, 1}, {0}, {2}});
    CHECK(p.to_string() == "{1},{2,4},{3}");
    CHECK(p.rgs() == std::vector<std::size_t>{0, 1, 2, 1});
    CHECK(Partition::from_rgs(p.rgs()) == p);
    CHECK(p.refines(Partition::single(4)));
    CHECK(Partition::identity(4).refines(p));
    CHECK(p.merged(0, 2) == Partition({{0, 2}, {1, 3}}));
    CHECK(Partition::identity(3).canonically_before(Partition::single(3)) == false);
    CHECK(Partition::single(3).canonically_before(Partition::identity(3)));
    CHECK_THROWS_AS(Partition({{0, 1}, {1}}).validate(2), ContractError);
}
