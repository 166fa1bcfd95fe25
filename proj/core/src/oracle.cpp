#include "rake/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include "rake/net.hpp"

namespace rake {

namespace {

void enumerate_rec(std::vector<int>& rgs, int pos, int max_used, int max_blocks,
                   const std::function<void(std::span<const int>)>& visit) {
    if (pos == static_cast<int>(rgs.size())) {
        visit(rgs);
        return;
    }
    const int limit = std::min(max_used + 1, max_blocks - 1);
    for (int v = 0; v <= limit; ++v) {
        rgs[static_cast<std::size_t>(pos)] = v;
        enumerate_rec(rgs, pos + 1, std::max(max_used, v), max_blocks, visit);
    }
}

int env_service_cap(int n) { return std::max(1, (n + 1) / 2); }

}  // namespace

void enumerate_partitions(int n, int max_blocks,
                          const std::function<void(std::span<const int>)>& visit, int n_cap) {
    if (n < 1) throw InvalidConfig("partition enumeration needs n >= 1");
    if (max_blocks < 1) throw InvalidConfig("partition enumeration needs max_blocks >= 1");
    if (n > n_cap) throw TooLarge(n, n_cap);
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    enumerate_rec(rgs, 1, 0, max_blocks, visit);  // rgs[0] is always 0
}

std::uint64_t count_partitions(int n, int max_blocks) {
    if (n < 1 || max_blocks < 1) return 0;
    // Stirling numbers of the second kind, summed over 1..max_blocks blocks.
    std::vector<std::vector<std::uint64_t>> s(static_cast<std::size_t>(n + 1),
                                              std::vector<std::uint64_t>(
                                                  static_cast<std::size_t>(n + 1), 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int k = 1; k <= i; ++k) {
            s[i][k] = s[i - 1][k - 1] + static_cast<std::uint64_t>(k) * s[i - 1][k];
        }
    }
    std::uint64_t total = 0;
    for (int k = 1; k <= std::min(n, max_blocks); ++k) total += s[n][k];
    return total;
}

OracleResult exhaustive_best(const CallGraph& g, const Objective& objective, int n_cap) {
    const auto start = std::chrono::steady_clock::now();
    const int n = g.method_count();
    if (n < 1) throw InvalidConfig("graph has no methods");

    OracleResult result;
    bool have_best = false;
    std::vector<int> best_rgs;
    enumerate_partitions(
        n, env_service_cap(n),
        [&](std::span<const int> rgs) {
            const Decomposition d =
                Decomposition::from_assignment(std::vector<int>(rgs.begin(), rgs.end()));
            const double value = objective_value(g, d, objective);
            ++result.partitions_evaluated;
            if (!have_best || value > result.best_objective) {
                have_best = true;
                result.best_objective = value;
                result.best = d;
            }
        },
        n_cap);

    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

OracleResult hill_climb(const CallGraph& g, const Objective& objective, int restarts,
                        std::uint64_t seed) {
    if (restarts < 1) throw InvalidConfig("hill climbing needs at least one restart");
    const auto start = std::chrono::steady_clock::now();
    const int n = g.method_count();
    if (n < 1) throw InvalidConfig("graph has no methods");
    const int s_max = env_service_cap(n);

    Rng rng(seed);
    OracleResult result;
    bool have_best = false;

    for (int restart = 0; restart < restarts; ++restart) {
        std::vector<int> assignment(static_cast<std::size_t>(n), 0);
        if (restart > 0) {
            for (int& a : assignment) a = rng.uniform_int(s_max);
        }
        double current = objective_value(g, Decomposition::from_assignment(assignment), objective);
        ++result.partitions_evaluated;

        // steepest ascent: apply the best single relocation until no move gains
        while (true) {
            int best_method = -1;
            int best_target = -1;
            double best_value = current;
            for (int m = 0; m < n; ++m) {
                const int original = assignment[static_cast<std::size_t>(m)];
                for (int target = 0; target < s_max; ++target) {
                    if (target == original) continue;
                    assignment[static_cast<std::size_t>(m)] = target;
                    const double value =
                        objective_value(g, Decomposition::from_assignment(assignment), objective);
                    ++result.partitions_evaluated;
                    if (value > best_value) {
                        best_value = value;
                        best_method = m;
                        best_target = target;
                    }
                }
                assignment[static_cast<std::size_t>(m)] = original;
            }
            if (best_method < 0) break;
            assignment[static_cast<std::size_t>(best_method)] = best_target;
            current = best_value;
        }

        if (!have_best || current > result.best_objective) {
            have_best = true;
            result.best_objective = current;
            result.best = Decomposition::from_assignment(assignment);
        }
    }

    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace rake
