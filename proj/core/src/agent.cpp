#include "rake/agent.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <numeric>

namespace rake {

void TrainConfig::validate() const {
    if (episodes < 0) throw InvalidConfig("episodes must be non-negative");
    if (learning_rate <= 0.0) throw InvalidConfig("learning rate must be positive");
    if (clip_epsilon <= 0.0 || clip_epsilon >= 1.0) {
        throw InvalidConfig("clip epsilon must be in (0,1)");
    }
    if (gamma <= 0.0 || gae_lambda <= 0.0) throw InvalidConfig("gamma/lambda must be positive");
    if (update_epochs < 1 || minibatch_size < 1) {
        throw InvalidConfig("update epochs and minibatch size must be positive");
    }
    if (entropy_coef < 0.0 || value_coef <= 0.0 || max_grad_norm <= 0.0) {
        throw InvalidConfig("loss coefficients and grad-norm cap must be positive");
    }
    if (early_stop_patience < 0) throw InvalidConfig("early-stop patience must be non-negative");
    if (hidden.empty()) throw InvalidConfig("at least one hidden layer required");
}

GaeResult compute_gae(const RolloutBuffer& buffer, double gamma, double lambda,
                      double last_value) {
    if (buffer.empty()) throw EmptyBuffer();
    const int n = static_cast<int>(buffer.size());
    GaeResult out;
    out.advantages.assign(static_cast<std::size_t>(n), 0.0);
    out.returns.assign(static_cast<std::size_t>(n), 0.0);

    double gae = 0.0;
    for (int t = n - 1; t >= 0; --t) {
        const RolloutStep& s = buffer[static_cast<std::size_t>(t)];
        const double not_done = s.done ? 0.0 : 1.0;
        const double next_value =
            t + 1 < n ? buffer[static_cast<std::size_t>(t + 1)].value : last_value;
        const double delta = s.reward + gamma * next_value * not_done - s.value;
        gae = delta + gamma * lambda * not_done * gae;
        out.advantages[static_cast<std::size_t>(t)] = gae;
        out.returns[static_cast<std::size_t>(t)] = gae + s.value;
    }
    return out;
}

ActionSample select_action(const PolicyValueNet& net, std::span<const double> observation,
                           Rng& rng) {
    const PolicyValueNet::Forward f = net.forward(observation);
    const std::vector<double> p = softmax(f.logits);
    const double u = rng.uniform();
    double cum = 0.0;
    int action = static_cast<int>(p.size()) - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cum += p[i];
        if (u < cum) {
            action = static_cast<int>(i);
            break;
        }
    }
    const std::vector<double> lp = log_softmax(f.logits);
    return {action, lp[static_cast<std::size_t>(action)], f.value};
}

int greedy_action(const PolicyValueNet& net, std::span<const double> observation) {
    const PolicyValueNet::Forward f = net.forward(observation);
    return static_cast<int>(std::max_element(f.logits.begin(), f.logits.end()) -
                            f.logits.begin());
}

namespace {

// Shared loss loop. When grad_net is non-null the per-sample gradients of
// the mean loss are pushed back through the network.
UpdateStats eval_minibatch(const PolicyValueNet& net, const MiniBatch& batch,
                           const TrainConfig& cfg, PolicyValueNet* grad_net) {
    UpdateStats stats;
    const double inv_n = 1.0 / static_cast<double>(batch.indices.size());

    for (int idx : batch.indices) {
        const RolloutStep& s = (*batch.buffer)[static_cast<std::size_t>(idx)];
        const double adv = (*batch.advantages)[static_cast<std::size_t>(idx)];
        const double ret = (*batch.returns)[static_cast<std::size_t>(idx)];

        const PolicyValueNet::Forward f = net.forward(s.observation);
        const std::vector<double> lp = log_softmax(f.logits);
        const std::vector<double> p = softmax(f.logits);

        const double ratio = std::exp(lp[static_cast<std::size_t>(s.action)] - s.log_prob);
        const double unclipped = ratio * adv;
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * adv;
        stats.policy_loss += -std::min(unclipped, clipped) * inv_n;

        double entropy = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p[j] > 0.0) entropy -= p[j] * lp[j];
        }
        stats.entropy += entropy * inv_n;

        const double vdiff = f.value - ret;
        stats.value_loss += 0.5 * vdiff * vdiff * inv_n;

        if (grad_net != nullptr) {
            // d(-min(u, c))/d ratio: the unclipped branch when it is the
            // smaller one, zero otherwise (u > c only happens outside the
            // clip band where the clipped branch is flat).
            const double dratio = unclipped <= clipped ? -adv : 0.0;
            const double dlogp = dratio * ratio;
            std::vector<double> dlogits(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double indicator = static_cast<int>(j) == s.action ? 1.0 : 0.0;
                dlogits[j] = inv_n * (dlogp * (indicator - p[j]) +
                                      cfg.entropy_coef * p[j] * (lp[j] + entropy));
            }
            const double dvalue = inv_n * cfg.value_coef * vdiff;
            grad_net->backward(f, dlogits, dvalue);
        }
    }
    stats.total_loss =
        stats.policy_loss + cfg.value_coef * stats.value_loss - cfg.entropy_coef * stats.entropy;
    return stats;
}

std::vector<double> normalize_advantages(const std::vector<double>& adv) {
    const double n = static_cast<double>(adv.size());
    const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double stddev = std::sqrt(var / n);
    std::vector<double> out(adv.size());
    for (std::size_t i = 0; i < adv.size(); ++i) out[i] = (adv[i] - mean) / (stddev + 1e-8);
    return out;
}

}  // namespace

double ppo_loss(const PolicyValueNet& net, const MiniBatch& batch, const TrainConfig& cfg) {
    return eval_minibatch(net, batch, cfg, nullptr).total_loss;
}

UpdateStats ppo_loss_grad(PolicyValueNet& net, const MiniBatch& batch, const TrainConfig& cfg) {
    return eval_minibatch(net, batch, cfg, &net);
}

UpdateStats ppo_update(PolicyValueNet& net, AdamOptimizer& optimizer,
                       const RolloutBuffer& buffer, const GaeResult& gae, const TrainConfig& cfg,
                       Rng& rng) {
    if (buffer.empty()) throw EmptyBuffer();
    const std::vector<double> advantages = normalize_advantages(gae.advantages);

    std::vector<int> order(buffer.size());
    std::iota(order.begin(), order.end(), 0);

    UpdateStats last{};
    for (int epoch = 0; epoch < cfg.update_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.minibatch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.minibatch_size));
            MiniBatch batch{&buffer, &advantages, &gae.returns,
                            {order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(stop)}};
            net.zero_grad();
            last = ppo_loss_grad(net, batch, cfg);
            if (!std::isfinite(last.total_loss)) {
                throw NonFiniteLoss("loss is not finite (policy=" +
                                    std::to_string(last.policy_loss) + ", value=" +
                                    std::to_string(last.value_loss) + ")");
            }
            last.grad_norm = clip_grad_norm(net, cfg.max_grad_norm);
            optimizer.step(net);
            assert(net.all_finite());
        }
    }
    return last;
}

TrainResult train(const CallGraph& graph, const EnvConfig& env_cfg, const TrainConfig& cfg) {
    cfg.validate();
    DecompositionEnv env(graph, env_cfg);
    Rng rng(cfg.seed);

    TrainResult result;
    result.net = PolicyValueNet(env.observation_size(), env.action_count(), cfg.hidden, rng);
    result.optimizer = AdamOptimizer(result.net.parameter_count(), cfg.learning_rate);

    env.reset();
    result.best = env.best_decomposition();  // single-service baseline
    result.best_objective = env.state().obj_best;

    const auto start = std::chrono::steady_clock::now();
    std::int64_t steps = 0;
    int stale_episodes = 0;
    RolloutBuffer buffer;

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        std::vector<double> obs = env.reset();
        buffer.clear();
        while (!env.state().done) {
            const ActionSample sample = select_action(result.net, obs, rng);
            StepOutcome out = env.step(sample.action);
            buffer.push({std::move(obs), sample.action, sample.log_prob, sample.value, out.reward,
                         out.done});
            obs = std::move(out.observation);
            ++steps;
        }

        const double episode_best = env.state().obj_best;
        if (episode_best > result.best_objective) {
            result.best_objective = episode_best;
            result.best = env.best_decomposition();
            stale_episodes = 0;
        } else {
            ++stale_episodes;
        }

        const GaeResult gae = compute_gae(buffer, cfg.gamma, cfg.gae_lambda);
        ppo_update(result.net, result.optimizer, buffer, gae, cfg, rng);

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.log.push_back({episode, steps, episode_best, result.best_objective, elapsed});

        if (cfg.early_stop_patience > 0 && stale_episodes >= cfg.early_stop_patience) break;
    }
    return result;
}

Decomposition greedy_rollout(const PolicyValueNet& net, DecompositionEnv& env) {
    std::vector<double> obs = env.reset();
    while (!env.state().done) {
        obs = env.step(greedy_action(net, obs)).observation;
    }
    return env.best_decomposition();
}

}  // namespace rake
