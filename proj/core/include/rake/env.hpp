#pragma once

#include <cstdint>
#include <vector>

#include "rake/decomposition.hpp"
#include "rake/graph.hpp"
#include "rake/objective.hpp"

namespace rake {

struct EnvConfig {
    int n_methods = 0;
    int s_max = 0;  // service cap: ceil(N/2), floored at 1
    int p_max = 3;  // passes over all methods per episode
    Objective objective;
    std::uint64_t seed = 0;  // recorded into checkpoints/logs for provenance

    static EnvConfig make(int n_methods, int p_max = 3, Objective objective = {},
                          std::uint64_t seed = 0);

    int horizon() const { return n_methods * p_max; }  // T = N * P_max
    void validate() const;
};

/// Assignment state plus episode bookkeeping. The one-hot N x s_max matrix
/// is stored row-wise as the column index holding the 1.
struct EnvState {
    std::vector<int> assignment;
    int cursor = 0;  // method currently up for assignment
    int pass = 0;
    bool done = false;
    double obj_best = 0.0;  // max objective over every state visited this episode
    std::vector<int> best_assignment;
};

struct StepInfo {
    double objective = 0.0;  // objective of the decomposition after the move
    int service_count = 0;
    int cursor = 0;  // next method up
};

struct StepOutcome {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

/// The decomposition environment. Observations flatten the one-hot
/// assignment matrix and append a one-hot cursor vector (length
/// N*s_max + N) so the policy knows which method it is assigning. Each
/// episode starts from the single-service state and runs exactly
/// N * p_max steps; the reward for a step is the objective delta against
/// the best objective seen so far in the episode.
class DecompositionEnv {
public:
    DecompositionEnv(const CallGraph& graph, EnvConfig cfg);

    std::vector<double> reset();
    StepOutcome step(int action);

    const EnvState& state() const { return state_; }
    const EnvConfig& config() const { return cfg_; }

    int observation_size() const { return cfg_.n_methods * cfg_.s_max + cfg_.n_methods; }
    int action_count() const { return cfg_.s_max; }

    Decomposition current_decomposition() const;
    /// Best-of-episode assignment with empty services dropped and indices
    /// compacted to 0..k-1.
    Decomposition best_decomposition() const;

private:
    std::vector<double> make_observation() const;

    const CallGraph* graph_;
    EnvConfig cfg_;
    EnvState state_;
};

}  // namespace rake
