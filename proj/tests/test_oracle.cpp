#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "rake/oracle.hpp"
#include "support/fixtures.hpp"

using namespace rake;

TEST_SUITE("oracle") {

TEST_CASE("partition counts follow the Stirling sums") {
    CHECK(count_partitions(3, 3) == 5);    // Bell(3)
    CHECK(count_partitions(4, 2) == 8);    // S(4,1) + S(4,2) = 1 + 7
    CHECK(count_partitions(1, 1) == 1);
    CHECK(count_partitions(10, 10) == 115975);  // Bell(10)
    CHECK(count_partitions(6, 3) == 1 + 31 + 90);
}

TEST_CASE("enumeration yields every partition exactly once, lexicographically") {
    std::vector<std::vector<int>> seen;
    enumerate_partitions(3, 3, [&seen](std::span<const int> rgs) {
        seen.emplace_back(rgs.begin(), rgs.end());
    });
    const std::vector<std::vector<int>> expected{
        {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
    CHECK(seen == expected);

    for (int n = 1; n <= 7; ++n) {
        for (int cap = 1; cap <= n; ++cap) {
            std::set<std::vector<int>> unique;
            std::uint64_t visits = 0;
            enumerate_partitions(n, cap, [&](std::span<const int> rgs) {
                unique.emplace(rgs.begin(), rgs.end());
                ++visits;
            });
            CHECK(visits == count_partitions(n, cap));
            CHECK(unique.size() == visits);
        }
    }
}

TEST_CASE("enumeration rejects oversized and degenerate inputs") {
    CHECK_THROWS_AS(enumerate_partitions(11, 5, [](std::span<const int>) {}), TooLarge);
    CHECK_NOTHROW(enumerate_partitions(11, 5, [](std::span<const int>) {}, 12));
    CHECK_THROWS_AS(enumerate_partitions(0, 1, [](std::span<const int>) {}), InvalidConfig);
    CHECK_THROWS_AS(enumerate_partitions(3, 0, [](std::span<const int>) {}), InvalidConfig);
}

TEST_CASE("exhaustive search finds the two-clique optimum") {
    const CallGraph g = fixtures::two_clique_graph();
    const OracleResult r = exhaustive_best(g, Objective{});
    CHECK(r.best_objective == doctest::Approx(0.5));
    CHECK(r.best.service_count() == 2);
    CHECK(r.best.assignment == std::vector<int>{0, 0, 1, 1});
    CHECK(r.partitions_evaluated == count_partitions(4, 2));
}

TEST_CASE("ties keep the lexicographically smallest growth string") {
    const CallGraph edgeless = fixtures::make_graph({"A", "B", "C", "D"}, {});
    const OracleResult r = exhaustive_best(edgeless, Objective{});
    CHECK(r.best_objective == doctest::Approx(0.0));
    CHECK(r.best.service_count() == 1);  // the all-in-one partition enumerates first
}

TEST_CASE("the planted capability partition is the abcp optimum") {
    // small planted system: three capability cliques of sizes 3/3/2
    std::vector<std::string> methods = fixtures::numbered_methods("m", 8);
    std::vector<std::tuple<int, int, std::int64_t>> edges;
    auto clique = [&edges](int lo, int hi) {
        for (int a = lo; a < hi; ++a) {
            for (int b = lo; b < hi; ++b) {
                if (a != b) edges.emplace_back(a, b, 1);
            }
        }
    };
    clique(0, 3);
    clique(3, 6);
    clique(6, 8);
    const CallGraph g = fixtures::make_graph(
        std::move(methods), edges,
        {{"A", {0, 1, 2}}, {"B", {3, 4, 5}}, {"C", {6, 7}}});

    const OracleResult r = exhaustive_best(g, Objective{ObjectiveKind::kAbcp});
    CHECK(r.best_objective == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.best.assignment == std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2});
}

TEST_CASE("exhaustive search refuses graphs beyond the cap") {
    Rng rng(1);
    const CallGraph g = fixtures::random_graph(rng, 50, 0.05, 2);
    CHECK_THROWS_AS(exhaustive_best(g, Objective{}), TooLarge);
}

TEST_CASE("hill climbing returns a local optimum") {
    Rng rng(6);
    const CallGraph g = fixtures::random_graph(rng, 9, 0.4, 3);
    const OracleResult r = hill_climb(g, Objective{}, 5, 42);

    const int s_max = 5;  // ceil(9/2)
    std::vector<int> assignment = r.best.assignment;
    for (int m = 0; m < 9; ++m) {
        const int original = assignment[static_cast<std::size_t>(m)];
        for (int target = 0; target < s_max; ++target) {
            if (target == original) continue;
            assignment[static_cast<std::size_t>(m)] = target;
            const double neighbor =
                objective_value(g, Decomposition::from_assignment(assignment), Objective{});
            CHECK(neighbor <= r.best_objective + 1e-12);
        }
        assignment[static_cast<std::size_t>(m)] = original;
    }

    CHECK_THROWS_AS(hill_climb(g, Objective{}, 0, 1), InvalidConfig);
}

TEST_CASE("oracle dominance: exhaustive >= hill climb >= single service") {
    Rng rng(14);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 4 + rng.uniform_int(5);
        const CallGraph g = fixtures::random_graph(rng, n, 0.35, 3);
        const double single =
            objective_value(g, Decomposition::single_service(n), Objective{});
        const OracleResult climb = hill_climb(g, Objective{}, 4, trial);
        const OracleResult full = exhaustive_best(g, Objective{});
        CHECK(full.best_objective >= climb.best_objective - 1e-12);
        CHECK(climb.best_objective >= single - 1e-12);
    }
}

TEST_CASE("hill climbing with restarts usually matches the exhaustive optimum") {
    Rng rng(100);
    int matches = 0;
    const int graphs = 100;
    for (int trial = 0; trial < graphs; ++trial) {
        const int n = 4 + rng.uniform_int(5);  // N <= 8
        const CallGraph g = fixtures::random_graph(rng, n, 0.3, 3);
        const OracleResult full = exhaustive_best(g, Objective{});
        const OracleResult climb = hill_climb(g, Objective{}, 20, 1000 + trial);
        if (std::abs(full.best_objective - climb.best_objective) <= 1e-9) ++matches;
    }
    CHECK(matches >= 95);
}

TEST_CASE("hill climbing is deterministic for a fixed seed") {
    Rng rng(77);
    const CallGraph g = fixtures::random_graph(rng, 12, 0.3, 3);
    const OracleResult a = hill_climb(g, Objective{}, 6, 5);
    const OracleResult b = hill_climb(g, Objective{}, 6, 5);
    CHECK(a.best.assignment == b.best.assignment);
    CHECK(a.best_objective == b.best_objective);
    CHECK(a.partitions_evaluated == b.partitions_evaluated);
}

}  // TEST_SUITE
