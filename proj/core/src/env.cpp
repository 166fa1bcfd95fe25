#include "rake/env.hpp"

#include <algorithm>

namespace rake {

EnvConfig EnvConfig::make(int n_methods, int p_max, Objective objective, std::uint64_t seed) {
    EnvConfig cfg;
    cfg.n_methods = n_methods;
    cfg.s_max = std::max(1, (n_methods + 1) / 2);  // ceil(N/2), floored at 1
    cfg.p_max = p_max;
    cfg.objective = objective;
    cfg.seed = seed;
    return cfg;
}

void EnvConfig::validate() const {
    if (n_methods < 1) throw InvalidConfig("environment needs at least one method");
    if (s_max < 1) throw InvalidConfig("service cap must be at least 1");
    if (p_max < 1) throw InvalidConfig("p_max must be at least 1");
    if (objective.kind == ObjectiveKind::kWeighted &&
        (objective.weight < 0.0 || objective.weight > 1.0)) {
        throw InvalidConfig("objective weight must be in [0,1]");
    }
}

DecompositionEnv::DecompositionEnv(const CallGraph& graph, EnvConfig cfg)
    : graph_(&graph), cfg_(cfg) {
    cfg_.validate();
    if (cfg_.n_methods != graph.method_count()) {
        throw GraphEnvMismatch(cfg_.n_methods, graph.method_count());
    }
    reset();
}

std::vector<double> DecompositionEnv::reset() {
    state_.assignment.assign(static_cast<std::size_t>(cfg_.n_methods), 0);
    state_.cursor = 0;
    state_.pass = 0;
    state_.done = false;
    state_.obj_best = objective_value(*graph_, current_decomposition(), cfg_.objective);
    state_.best_assignment = state_.assignment;
    return make_observation();
}

StepOutcome DecompositionEnv::step(int action) {
    if (state_.done) throw StepAfterDone();
    if (action < 0 || action >= cfg_.s_max) throw ActionOutOfRange(action, cfg_.s_max);

    state_.assignment[static_cast<std::size_t>(state_.cursor)] = action;
    const Decomposition d = current_decomposition();
    const double objective = objective_value(*graph_, d, cfg_.objective);

    StepOutcome out;
    out.reward = objective - state_.obj_best;
    if (objective > state_.obj_best) {
        state_.obj_best = objective;
        state_.best_assignment = state_.assignment;
    }

    ++state_.cursor;
    if (state_.cursor == cfg_.n_methods) {
        state_.cursor = 0;
        ++state_.pass;
    }
    state_.done = state_.pass == cfg_.p_max;

    out.observation = make_observation();
    out.done = state_.done;
    out.info = {objective, d.service_count(), state_.cursor};
    return out;
}

Decomposition DecompositionEnv::current_decomposition() const {
    return Decomposition::from_assignment(state_.assignment);
}

Decomposition DecompositionEnv::best_decomposition() const {
    return Decomposition::from_assignment(state_.best_assignment);
}

std::vector<double> DecompositionEnv::make_observation() const {
    std::vector<double> obs(static_cast<std::size_t>(observation_size()), 0.0);
    for (int m = 0; m < cfg_.n_methods; ++m) {
        obs[static_cast<std::size_t>(m * cfg_.s_max + state_.assignment[m])] = 1.0;
    }
    obs[static_cast<std::size_t>(cfg_.n_methods * cfg_.s_max + state_.cursor)] = 1.0;
    return obs;
}

}  // namespace rake
