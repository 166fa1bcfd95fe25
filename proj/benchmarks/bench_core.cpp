#include <benchmark/benchmark.h>

#include "rake/agent.hpp"
#include "rake/metrics.hpp"
#include "rake/oracle.hpp"

#include "../tests/support/fixtures.hpp"

namespace {

rake::CallGraph bench_graph(int n) {
    rake::Rng rng(4242);
    return fixtures::random_graph(rng, n, 0.15, 4, 4);
}

void BM_ComputeMetrics(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const rake::CallGraph g = bench_graph(n);
    rake::Rng rng(1);
    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (int& a : assignment) a = rng.uniform_int(std::max(1, (n + 1) / 2));
    const rake::Decomposition d = rake::Decomposition::from_assignment(assignment);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rake::compute_metrics(g, d));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_ComputeMetrics)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_EnvStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const rake::CallGraph g = bench_graph(n);
    rake::DecompositionEnv env(g, rake::EnvConfig::make(n));
    rake::Rng rng(2);
    env.reset();
    for (auto _ : state) {
        if (env.state().done) env.reset();
        benchmark::DoNotOptimize(env.step(rng.uniform_int(env.action_count())));
    }
}
BENCHMARK(BM_EnvStep)->Arg(20)->Arg(64);

void BM_PolicyForward(benchmark::State& state) {
    rake::Rng rng(3);
    const int obs_dim = static_cast<int>(state.range(0));
    rake::PolicyValueNet net(obs_dim, 10, {128, 128}, rng);
    std::vector<double> obs(static_cast<std::size_t>(obs_dim), 0.0);
    for (std::size_t i = 0; i < obs.size(); i += 7) obs[i] = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(obs));
    }
}
BENCHMARK(BM_PolicyForward)->Arg(220)->Arg(660);

void BM_PartitionEnumeration(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::uint64_t count = 0;
        rake::enumerate_partitions(n, std::max(1, (n + 1) / 2),
                                   [&count](std::span<const int>) { ++count; });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_PartitionEnumeration)->DenseRange(6, 10, 2);

void BM_HillClimb(benchmark::State& state) {
    const rake::CallGraph g = bench_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rake::hill_climb(g, rake::Objective{}, 2, 1));
    }
}
BENCHMARK(BM_HillClimb)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
