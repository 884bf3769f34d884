#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hexcirc/circuitry.hpp"
#include "hexcirc/enumeration.hpp"

using namespace hexcirc;

TEST_CASE("exhaustive counts for the small layouts") {
    const EnumerationCounts c4 = count_feasible(HexLayout(2));
    CHECK(c4.solutions == 5);
    CHECK(c4.combinations == 12);

    const EnumerationCounts c6 = count_feasible(HexLayout(3));
    CHECK(c6.solutions == 37);
    CHECK(c6.combinations == 104);

    const EnumerationCounts c8 = count_feasible(HexLayout(4));
    CHECK(c8.solutions == 361);
    CHECK(c8.combinations == 1168);
}

TEST_CASE("enumeration yields the base vector first, then lexicographic extensions") {
    std::vector<std::string> order;
    enumerate_feasible(HexLayout(2), [&order](const CircuitryVector& x) {
        order.push_back(x.serialize());
        return true;
    });
    CHECK(order == std::vector<std::string>{
                       "t=4;bits=100001",
                       "t=4;bits=110001",
                       "t=4;bits=101001",
                       "t=4;bits=100101",
                       "t=4;bits=100011",
                   });
}

TEST_CASE("callback can stop the enumeration early") {
    int seen = 0;
    const EnumerationCounts counts = enumerate_feasible(HexLayout(2), [&seen](const CircuitryVector&) {
        ++seen;
        return seen < 2;
    });
    CHECK(seen == 2);
    CHECK(counts.solutions == 2);
    // Base vector: two circuits (4 direction assignments); the first
    // extension merges them into one circuit (2 assignments).
    CHECK(counts.combinations == 6);
}

TEST_CASE("all_feasible returns distinct feasible vectors matching the counts") {
    for (int tpr : {2, 3, 4}) {
        HexLayout layout(tpr);
        const std::vector<CircuitryVector> all = all_feasible(layout);
        const EnumerationCounts counts = count_feasible(layout);
        REQUIRE(all.size() == counts.solutions);

        std::set<std::string> distinct;
        std::uint64_t combinations = 0;
        for (const CircuitryVector& x : all) {
            REQUIRE(validate(x).feasible);
            distinct.insert(x.serialize());
            CHECK(x.popcount() >= layout.tube_count() / 2);
            CHECK(x.popcount() <= layout.tube_count() - 1);
            combinations += std::uint64_t{1} << decode(x).circuit_count();
        }
        CHECK(distinct.size() == all.size());
        CHECK(combinations == counts.combinations);
    }
}

TEST_CASE("enumeration runs are deterministic") {
    const std::vector<CircuitryVector> first = all_feasible(HexLayout(4));
    const std::vector<CircuitryVector> second = all_feasible(HexLayout(4));
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) REQUIRE(first[i] == second[i]);
}

TEST_CASE("counting recurrence matches the closed-form table") {
    const std::uint64_t solutions[] = {1, 5, 37, 361, 4361, 62701, 1044205};
    const std::uint64_t combinations[] = {2, 12, 104, 1168, 16032, 259264, 4817024};
    for (int m = 1; m <= 7; ++m) {
        const EnumerationCounts counts = count_oracle(m);
        CHECK(counts.solutions == solutions[m - 1]);
        CHECK(counts.combinations == combinations[m - 1]);
    }
}

TEST_CASE("backtracking enumeration agrees with the recurrence up to fourteen tubes") {
    for (int m = 1; m <= 7; ++m) {
        const EnumerationCounts dfs = count_feasible(HexLayout(m));
        const EnumerationCounts oracle = count_oracle(m);
        CHECK(dfs.solutions == oracle.solutions);
        CHECK(dfs.combinations == oracle.combinations);
    }
}

TEST_CASE("counting rejects invalid sizes and detects overflow") {
    CHECK_THROWS_AS(count_oracle(0), std::invalid_argument);
    CHECK_THROWS_AS(count_oracle(-1), std::invalid_argument);
    CHECK_THROWS_AS(count_oracle(64), std::overflow_error);

    std::uint64_t previous = 0;
    for (int m = 1; m <= 10; ++m) {
        const EnumerationCounts counts = count_oracle(m);
        CHECK(counts.solutions > previous);
        CHECK(counts.combinations > counts.solutions);
        previous = counts.solutions;
    }
}
