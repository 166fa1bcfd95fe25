#include "rake/net.hpp"

#include <cmath>
#include <numbers>

namespace rake {

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int n) {
    const int v = static_cast<int>(uniform() * n);
    return v >= n ? n - 1 : v;
}

LinearLayer::LinearLayer(int in, int out)
    : w(out, in), b(static_cast<std::size_t>(out), 0.0), gw(out, in),
      gb(static_cast<std::size_t>(out), 0.0) {}

namespace {

// Modified Gram-Schmidt over the rows of m (callers transpose as needed).
void orthonormalize_rows(Matrix& m, Rng& rng) {
    for (int i = 0; i < m.rows; ++i) {
        for (int attempt = 0;; ++attempt) {
            for (int j = 0; j < i; ++j) {
                double dot = 0.0;
                for (int c = 0; c < m.cols; ++c) dot += m.at(i, c) * m.at(j, c);
                for (int c = 0; c < m.cols; ++c) m.at(i, c) -= dot * m.at(j, c);
            }
            double norm = 0.0;
            for (int c = 0; c < m.cols; ++c) norm += m.at(i, c) * m.at(i, c);
            norm = std::sqrt(norm);
            if (norm > 1e-10 || attempt > 8) {
                for (int c = 0; c < m.cols; ++c) m.at(i, c) /= norm;
                break;
            }
            for (int c = 0; c < m.cols; ++c) m.at(i, c) = rng.normal();
        }
    }
}

}  // namespace

void LinearLayer::init_orthogonal(Rng& rng, double gain) {
    for (double& x : w.a) x = rng.normal();
    if (w.rows <= w.cols) {
        orthonormalize_rows(w, rng);
    } else {
        Matrix t(w.cols, w.rows);
        for (int r = 0; r < w.rows; ++r) {
            for (int c = 0; c < w.cols; ++c) t.at(c, r) = w.at(r, c);
        }
        orthonormalize_rows(t, rng);
        for (int r = 0; r < w.rows; ++r) {
            for (int c = 0; c < w.cols; ++c) w.at(r, c) = t.at(c, r);
        }
    }
    for (double& x : w.a) x *= gain;
    std::fill(b.begin(), b.end(), 0.0);
}

void LinearLayer::forward(std::span<const double> x, std::vector<double>& y) const {
    y.assign(b.begin(), b.end());
    for (int r = 0; r < w.rows; ++r) {
        double acc = y[static_cast<std::size_t>(r)];
        const double* row = w.a.data() + static_cast<std::size_t>(r) * w.cols;
        for (int c = 0; c < w.cols; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(r)] = acc;
    }
}

std::vector<double> softmax(std::span<const double> logits) {
    double max_logit = logits[0];
    for (double v : logits) max_logit = std::max(max_logit, v);
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - max_logit);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> log_softmax(std::span<const double> logits) {
    double max_logit = logits[0];
    for (double v : logits) max_logit = std::max(max_logit, v);
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - max_logit);
    const double lse = max_logit + std::log(sum);
    std::vector<double> lp(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) lp[i] = logits[i] - lse;
    return lp;
}

PolicyValueNet::PolicyValueNet(int obs_dim, int n_actions, const std::vector<int>& hidden,
                               Rng& rng)
    : obs_dim_(obs_dim), n_actions_(n_actions), hidden_(hidden) {
    if (obs_dim < 1 || n_actions < 1) throw InvalidConfig("bad network dimensions");
    int in = obs_dim;
    for (int h : hidden_) {
        if (h < 1) throw InvalidConfig("hidden layer sizes must be positive");
        trunk_.emplace_back(in, h);
        trunk_.back().init_orthogonal(rng, std::sqrt(2.0));
        in = h;
    }
    policy_head_ = LinearLayer(in, n_actions);
    policy_head_.init_orthogonal(rng, 0.01);
    value_head_ = LinearLayer(in, 1);
    value_head_.init_orthogonal(rng, 1.0);
}

PolicyValueNet PolicyValueNet::from_parts(int obs_dim, int n_actions, std::vector<int> hidden,
                                          std::vector<LinearLayer> trunk,
                                          LinearLayer policy_head, LinearLayer value_head) {
    PolicyValueNet net;
    net.obs_dim_ = obs_dim;
    net.n_actions_ = n_actions;
    net.hidden_ = std::move(hidden);
    net.trunk_ = std::move(trunk);
    net.policy_head_ = std::move(policy_head);
    net.value_head_ = std::move(value_head);
    return net;
}

PolicyValueNet::Forward PolicyValueNet::forward(std::span<const double> obs) const {
    if (static_cast<int>(obs.size()) != obs_dim_) {
        throw ShapeMismatch(obs.size(), static_cast<std::size_t>(obs_dim_));
    }
    Forward f;
    f.h.emplace_back(obs.begin(), obs.end());
    for (const auto& layer : trunk_) {
        std::vector<double> y;
        layer.forward(f.h.back(), y);
        for (double& v : y) v = std::tanh(v);
        f.h.push_back(std::move(y));
    }
    policy_head_.forward(f.h.back(), f.logits);
    std::vector<double> value_out;
    value_head_.forward(f.h.back(), value_out);
    f.value = value_out[0];
    return f;
}

void PolicyValueNet::backward(const Forward& f, std::span<const double> dlogits, double dvalue) {
    const std::vector<double>& top = f.h.back();
    std::vector<double> dh(top.size(), 0.0);

    for (int r = 0; r < policy_head_.w.rows; ++r) {
        const double g = dlogits[static_cast<std::size_t>(r)];
        policy_head_.gb[static_cast<std::size_t>(r)] += g;
        for (int c = 0; c < policy_head_.w.cols; ++c) {
            policy_head_.gw.at(r, c) += g * top[static_cast<std::size_t>(c)];
            dh[static_cast<std::size_t>(c)] += g * policy_head_.w.at(r, c);
        }
    }
    value_head_.gb[0] += dvalue;
    for (int c = 0; c < value_head_.w.cols; ++c) {
        value_head_.gw.at(0, c) += dvalue * top[static_cast<std::size_t>(c)];
        dh[static_cast<std::size_t>(c)] += dvalue * value_head_.w.at(0, c);
    }

    for (int layer = static_cast<int>(trunk_.size()) - 1; layer >= 0; --layer) {
        LinearLayer& lin = trunk_[static_cast<std::size_t>(layer)];
        const std::vector<double>& out = f.h[static_cast<std::size_t>(layer + 1)];
        const std::vector<double>& in = f.h[static_cast<std::size_t>(layer)];
        // back through tanh: dz = dh * (1 - out^2)
        std::vector<double> dz(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) dz[i] = dh[i] * (1.0 - out[i] * out[i]);
        std::vector<double> dprev(in.size(), 0.0);
        for (int r = 0; r < lin.w.rows; ++r) {
            const double g = dz[static_cast<std::size_t>(r)];
            lin.gb[static_cast<std::size_t>(r)] += g;
            for (int c = 0; c < lin.w.cols; ++c) {
                lin.gw.at(r, c) += g * in[static_cast<std::size_t>(c)];
                dprev[static_cast<std::size_t>(c)] += g * lin.w.at(r, c);
            }
        }
        dh = std::move(dprev);
    }
}

void PolicyValueNet::zero_grad() {
    auto clear = [](LinearLayer& l) {
        std::fill(l.gw.a.begin(), l.gw.a.end(), 0.0);
        std::fill(l.gb.begin(), l.gb.end(), 0.0);
    };
    for (auto& l : trunk_) clear(l);
    clear(policy_head_);
    clear(value_head_);
}

std::size_t PolicyValueNet::parameter_count() const {
    std::size_t n = 0;
    auto add = [&n](const LinearLayer& l) { n += l.w.a.size() + l.b.size(); };
    for (const auto& l : trunk_) add(l);
    add(policy_head_);
    add(value_head_);
    return n;
}

void PolicyValueNet::for_each_param(const std::function<void(double&, double&)>& fn) {
    auto visit = [&fn](LinearLayer& l) {
        for (std::size_t i = 0; i < l.w.a.size(); ++i) fn(l.w.a[i], l.gw.a[i]);
        for (std::size_t i = 0; i < l.b.size(); ++i) fn(l.b[i], l.gb[i]);
    };
    for (auto& l : trunk_) visit(l);
    visit(policy_head_);
    visit(value_head_);
}

bool PolicyValueNet::all_finite() const {
    bool ok = true;
    auto check = [&ok](const LinearLayer& l) {
        for (double v : l.w.a) ok = ok && std::isfinite(v);
        for (double v : l.b) ok = ok && std::isfinite(v);
    };
    for (const auto& l : trunk_) check(l);
    check(policy_head_);
    check(value_head_);
    return ok;
}

AdamOptimizer::AdamOptimizer(std::size_t n_params, double learning_rate, double beta1,
                             double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(n_params, 0.0), v_(n_params, 0.0) {}

void AdamOptimizer::step(PolicyValueNet& net) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    std::size_t i = 0;
    net.for_each_param([&](double& p, double& g) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
        const double mhat = m_[i] / bc1;
        const double vhat = v_[i] / bc2;
        p -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        ++i;
    });
}

void AdamOptimizer::restore(std::vector<double> m, std::vector<double> v, std::int64_t t) {
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

double clip_grad_norm(PolicyValueNet& net, double max_norm) {
    double sq = 0.0;
    net.for_each_param([&sq](double&, double& g) { sq += g * g; });
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        net.for_each_param([scale](double&, double& g) { g *= scale; });
    }
    return norm;
}

}  // namespace rake
