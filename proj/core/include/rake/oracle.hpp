#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "rake/objective.hpp"

namespace rake {

inline constexpr int kDefaultEnumerationCap = 10;  // Bell(10) = 115975 partitions

struct OracleResult {
    Decomposition best;
    double best_objective = 0.0;
    std::uint64_t partitions_evaluated = 0;
    double elapsed_seconds = 0.0;  // informational; never serialized
};

/// Visit every set partition of {0..n-1} with at most max_blocks blocks,
/// exactly once, as restricted growth strings in lexicographic order.
/// Throws TooLarge when n exceeds n_cap, InvalidConfig on bad arguments.
void enumerate_partitions(int n, int max_blocks,
                          const std::function<void(std::span<const int>)>& visit,
                          int n_cap = kDefaultEnumerationCap);

/// Number of partitions enumerate_partitions would visit: the Stirling sum
/// S(n,1) + ... + S(n,max_blocks).
std::uint64_t count_partitions(int n, int max_blocks);

/// Evaluate the objective on every partition within the environment's
/// ceil(N/2) service cap and return the best. Ties keep the
/// lexicographically smallest restricted growth string.
OracleResult exhaustive_best(const CallGraph& g, const Objective& objective,
                             int n_cap = kDefaultEnumerationCap);

/// Steepest-ascent hill climbing over single-method relocations, restarted
/// from the single-service state (restart 0) and then from random
/// assignments. Returns the best local optimum found over all restarts.
OracleResult hill_climb(const CallGraph& g, const Objective& objective, int restarts,
                        std::uint64_t seed);

}  // namespace rake
