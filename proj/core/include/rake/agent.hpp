#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rake/env.hpp"
#include "rake/net.hpp"

namespace rake {

struct TrainConfig {
    int episodes = 1500;
    double learning_rate = 2e-3;
    double clip_epsilon = 0.2;
    double gamma = 0.99;
    double gae_lambda = 0.95;
    int update_epochs = 4;
    int minibatch_size = 64;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    double max_grad_norm = 0.5;
    std::uint64_t seed = 0;
    int early_stop_patience = 0;  // episodes without a new global best; 0 disables
    std::vector<int> hidden = {128, 128};

    void validate() const;
};

struct RolloutStep {
    std::vector<double> observation;
    int action = 0;
    double log_prob = 0.0;
    double value = 0.0;
    double reward = 0.0;
    bool done = false;
};

/// Per-step records of one rollout horizon (here: one episode).
class RolloutBuffer {
public:
    void clear() { steps_.clear(); }
    void push(RolloutStep step) { steps_.push_back(std::move(step)); }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    const RolloutStep& operator[](std::size_t i) const { return steps_[i]; }

private:
    std::vector<RolloutStep> steps_;
};

struct GaeResult {
    std::vector<double> advantages;  // raw, normalized later per update
    std::vector<double> returns;     // advantages + values
};

/// Generalized advantage estimation over a full buffer. last_value
/// bootstraps past the horizon and is ignored after terminal steps.
GaeResult compute_gae(const RolloutBuffer& buffer, double gamma, double lambda,
                      double last_value = 0.0);

struct ActionSample {
    int action = 0;
    double log_prob = 0.0;
    double value = 0.0;
};

/// Sample from the softmax action distribution.
ActionSample select_action(const PolicyValueNet& net, std::span<const double> observation,
                           Rng& rng);

/// Deterministic argmax of the logits.
int greedy_action(const PolicyValueNet& net, std::span<const double> observation);

/// Non-owning view of a set of buffer rows used by one loss evaluation.
struct MiniBatch {
    const RolloutBuffer* buffer = nullptr;
    const std::vector<double>* advantages = nullptr;  // already normalized
    const std::vector<double>* returns = nullptr;
    std::vector<int> indices;
};

struct UpdateStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double total_loss = 0.0;
    double grad_norm = 0.0;
};

/// Loss of the clipped surrogate objective plus value and entropy terms.
/// Pure; exists so tests can finite-difference the gradient.
double ppo_loss(const PolicyValueNet& net, const MiniBatch& batch, const TrainConfig& cfg);

/// Same loss, also accumulating parameter gradients into the network.
UpdateStats ppo_loss_grad(PolicyValueNet& net, const MiniBatch& batch, const TrainConfig& cfg);

/// One PPO update over the buffer: advantages normalized to zero mean and
/// unit variance across the batch, then update_epochs passes of shuffled
/// minibatches with clipped-ratio policy loss, value MSE, entropy bonus,
/// global gradient-norm clipping and an optimizer step per minibatch.
/// Throws NonFiniteLoss when the loss stops being finite.
UpdateStats ppo_update(PolicyValueNet& net, AdamOptimizer& optimizer, const RolloutBuffer& buffer,
                       const GaeResult& gae, const TrainConfig& cfg, Rng& rng);

struct EpisodeLogEntry {
    int episode = 0;
    std::int64_t steps = 0;       // cumulative environment steps
    double episode_best = 0.0;    // best objective visited during the episode
    double global_best = 0.0;     // best objective over all episodes so far
    double wall_time_s = 0.0;     // elapsed since training start; not serialized
};

struct TrainResult {
    Decomposition best;
    double best_objective = 0.0;
    std::vector<EpisodeLogEntry> log;
    PolicyValueNet net;
    AdamOptimizer optimizer;
};

/// Episodic PPO training. Every episode starts from the single-service
/// state; the episode's best decomposition competes against the global
/// best, which is returned at the end together with the per-episode log.
TrainResult train(const CallGraph& graph, const EnvConfig& env_cfg, const TrainConfig& cfg);

/// Run one greedy episode with the given policy and return the best
/// decomposition it visited.
Decomposition greedy_rollout(const PolicyValueNet& net, DecompositionEnv& env);

}  // namespace rake
