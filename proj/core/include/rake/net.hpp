#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "rake/error.hpp"

namespace rake {

/// Seeded random source. Uniform draws take the top 53 bits of the
/// generator output and normals come from Box-Muller, so the stream does
/// not depend on standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform();              // [0, 1)
    double normal();               // standard normal
    int uniform_int(int n);        // [0, n)

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[static_cast<std::size_t>(i)],
                      v[static_cast<std::size_t>(uniform_int(i + 1))]);
        }
    }

private:
    std::mt19937_64 gen_;
};

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

struct LinearLayer {
    Matrix w;  // out x in
    std::vector<double> b;
    Matrix gw;
    std::vector<double> gb;

    LinearLayer() = default;
    LinearLayer(int in, int out);

    /// Orthogonal init scaled by gain, bias zero.
    void init_orthogonal(Rng& rng, double gain);
    void forward(std::span<const double> x, std::vector<double>& y) const;
};

std::vector<double> softmax(std::span<const double> logits);
std::vector<double> log_softmax(std::span<const double> logits);

/// Feed-forward trunk with tanh activations and two linear heads: action
/// logits and a scalar state-value estimate.
class PolicyValueNet {
public:
    PolicyValueNet() = default;
    PolicyValueNet(int obs_dim, int n_actions, const std::vector<int>& hidden, Rng& rng);

    /// Rebuild a network from stored layers (checkpoint loading).
    static PolicyValueNet from_parts(int obs_dim, int n_actions, std::vector<int> hidden,
                                     std::vector<LinearLayer> trunk, LinearLayer policy_head,
                                     LinearLayer value_head);

    /// Per-sample forward pass; keeps the activations needed by backward().
    struct Forward {
        std::vector<std::vector<double>> h;  // h[0] = input, then post-tanh layer outputs
        std::vector<double> logits;
        double value = 0.0;
    };

    Forward forward(std::span<const double> obs) const;

    /// Accumulate parameter gradients for one sample given the loss
    /// gradients at the heads.
    void backward(const Forward& f, std::span<const double> dlogits, double dvalue);

    void zero_grad();
    std::size_t parameter_count() const;

    /// Visit every (parameter, gradient) pair in a fixed deterministic order.
    void for_each_param(const std::function<void(double&, double&)>& fn);

    bool all_finite() const;

    int observation_size() const { return obs_dim_; }
    int action_count() const { return n_actions_; }
    const std::vector<int>& hidden_sizes() const { return hidden_; }

    // serialization access
    std::vector<LinearLayer>& trunk() { return trunk_; }
    const std::vector<LinearLayer>& trunk() const { return trunk_; }
    LinearLayer& policy_head() { return policy_head_; }
    const LinearLayer& policy_head() const { return policy_head_; }
    LinearLayer& value_head() { return value_head_; }
    const LinearLayer& value_head() const { return value_head_; }

private:
    int obs_dim_ = 0;
    int n_actions_ = 0;
    std::vector<int> hidden_;
    std::vector<LinearLayer> trunk_;
    LinearLayer policy_head_;
    LinearLayer value_head_;
};

/// Adaptive-moment gradient descent with bias correction.
class AdamOptimizer {
public:
    AdamOptimizer() = default;
    AdamOptimizer(std::size_t n_params, double learning_rate, double beta1 = 0.9,
                  double beta2 = 0.999, double eps = 1e-8);

    void step(PolicyValueNet& net);

    std::int64_t step_count() const { return t_; }
    double learning_rate() const { return lr_; }

    // serialization access
    std::vector<double>& first_moments() { return m_; }
    std::vector<double>& second_moments() { return v_; }
    const std::vector<double>& first_moments() const { return m_; }
    const std::vector<double>& second_moments() const { return v_; }
    void restore(std::vector<double> m, std::vector<double> v, std::int64_t t);

private:
    double lr_ = 3e-4;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    std::int64_t t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

/// Scale gradients so their global L2 norm does not exceed max_norm.
/// Returns the pre-clip norm.
double clip_grad_norm(PolicyValueNet& net, double max_norm);

}  // namespace rake
