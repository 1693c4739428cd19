#include "netaudit/qnet.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "netaudit/rng.hpp"

namespace netaudit {

std::string to_string(Activation a) {
    return a == Activation::ReLU ? "relu" : "linear";
}

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::ReLU;
    if (s == "linear") return Activation::Linear;
    throw ParseError("unknown activation '" + s + "'");
}

QNetwork::QNetwork(std::vector<int> dims, Activation activation, std::uint64_t init_seed)
    : dims_(std::move(dims)), activation_(activation) {
    if (dims_.size() < 2) throw DimensionMismatch("need at least one layer");
    for (int d : dims_) {
        if (d < 1) throw DimensionMismatch("layer dimensions must be positive");
    }
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        LayerSpan span;
        span.in = dims_[l];
        span.out = dims_[l + 1];
        span.weights = offset;
        offset += static_cast<std::size_t>(span.in) * span.out;
        span.biases = offset;
        offset += static_cast<std::size_t>(span.out);
        layers_.push_back(span);
    }
    params_.resize(offset);
    moment1_.assign(offset, 0.0);
    moment2_.assign(offset, 0.0);

    // Uniform in +-1/sqrt(fan_in), biases zero.
    Rng rng(init_seed);
    for (const LayerSpan& layer : layers_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        std::uniform_real_distribution<double> u(-bound, bound);
        const std::size_t n = static_cast<std::size_t>(layer.in) * layer.out;
        for (std::size_t i = 0; i < n; ++i) params_[layer.weights + i] = u(rng);
    }
}

double QNetwork::activate(double z) const {
    return activation_ == Activation::ReLU ? std::max(0.0, z) : z;
}

double QNetwork::activate_grad(double z) const {
    return activation_ == Activation::ReLU ? (z > 0.0 ? 1.0 : 0.0) : 1.0;
}

void QNetwork::forward_trace(const Observation& obs, std::vector<std::vector<double>>& pre,
                             std::vector<std::vector<double>>& act) const {
    if (static_cast<int>(obs.size()) != input_dim()) {
        throw DimensionMismatch("observation length " + std::to_string(obs.size()) +
                                " != input dim " + std::to_string(input_dim()));
    }
    pre.assign(layers_.size(), {});
    act.assign(layers_.size(), {});
    const std::vector<double>* input = &obs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerSpan& layer = layers_[l];
        const bool output_layer = l + 1 == layers_.size();
        pre[l].resize(static_cast<std::size_t>(layer.out));
        act[l].resize(static_cast<std::size_t>(layer.out));
        for (int o = 0; o < layer.out; ++o) {
            double z = params_[layer.biases + static_cast<std::size_t>(o)];
            const std::size_t row = layer.weights + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) {
                z += params_[row + static_cast<std::size_t>(i)] * (*input)[static_cast<std::size_t>(i)];
            }
            pre[l][static_cast<std::size_t>(o)] = z;
            act[l][static_cast<std::size_t>(o)] = output_layer ? z : activate(z);
        }
        input = &act[l];
    }
}

std::vector<double> QNetwork::forward(const Observation& obs) const {
    std::vector<std::vector<double>> pre, act;
    forward_trace(obs, pre, act);
    return act.back();
}

std::vector<double> QNetwork::td_targets(std::span<const Transition> batch, double gamma) const {
    std::vector<double> targets(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = batch[i];
        double y = static_cast<double>(t.reward);
        if (!t.done) {
            const std::vector<double> q_next = forward(t.next_observation);
            y += gamma * *std::max_element(q_next.begin(), q_next.end());
        }
        targets[i] = y;
    }
    return targets;
}

double QNetwork::loss(std::span<const Transition> batch, std::span<const double> targets) const {
    if (batch.empty() || batch.size() != targets.size()) {
        throw DimensionMismatch("batch and targets differ in length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const std::vector<double> q = forward(batch[i].observation);
        const double diff = q[static_cast<std::size_t>(batch[i].action)] - targets[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(batch.size());
}

std::vector<double> QNetwork::gradients(std::span<const Transition> batch,
                                        std::span<const double> targets) const {
    if (batch.empty() || batch.size() != targets.size()) {
        throw DimensionMismatch("batch and targets differ in length");
    }
    std::vector<double> grads(params_.size(), 0.0);
    std::vector<std::vector<double>> pre, act;
    const double scale = 2.0 / static_cast<double>(batch.size());

    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = batch[i];
        forward_trace(t.observation, pre, act);

        // Only the taken action contributes to the MSE.
        std::vector<double> delta(static_cast<std::size_t>(layers_.back().out), 0.0);
        const std::size_t a = static_cast<std::size_t>(t.action);
        delta[a] = scale * (act.back()[a] - targets[i]);

        for (std::size_t l = layers_.size(); l-- > 0;) {
            const LayerSpan& layer = layers_[l];
            const std::vector<double>& input = l == 0 ? t.observation : act[l - 1];
            for (int o = 0; o < layer.out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                if (d == 0.0) continue;
                grads[layer.biases + static_cast<std::size_t>(o)] += d;
                const std::size_t row = layer.weights + static_cast<std::size_t>(o) * layer.in;
                for (int in = 0; in < layer.in; ++in) {
                    grads[row + static_cast<std::size_t>(in)] +=
                        d * input[static_cast<std::size_t>(in)];
                }
            }
            if (l == 0) break;
            std::vector<double> prev(static_cast<std::size_t>(layer.in), 0.0);
            for (int in = 0; in < layer.in; ++in) {
                double sum = 0.0;
                for (int o = 0; o < layer.out; ++o) {
                    sum += params_[layer.weights + static_cast<std::size_t>(o) * layer.in +
                                   static_cast<std::size_t>(in)] *
                           delta[static_cast<std::size_t>(o)];
                }
                prev[static_cast<std::size_t>(in)] =
                    sum * activate_grad(pre[l - 1][static_cast<std::size_t>(in)]);
            }
            delta = std::move(prev);
        }
    }
    return grads;
}

void QNetwork::adam_step(std::span<const double> grads, double learning_rate) {
    if (grads.size() != params_.size()) {
        throw DimensionMismatch("gradient vector size mismatch");
    }
    ++adam_steps_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam_steps_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam_steps_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        moment1_[i] = kBeta1 * moment1_[i] + (1.0 - kBeta1) * grads[i];
        moment2_[i] = kBeta2 * moment2_[i] + (1.0 - kBeta2) * grads[i] * grads[i];
        const double m_hat = moment1_[i] / bc1;
        const double v_hat = moment2_[i] / bc2;
        params_[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEps);
    }
}

bool QNetwork::parameters_finite() const {
    return std::all_of(params_.begin(), params_.end(),
                       [](double p) { return std::isfinite(p); });
}

std::string QNetwork::to_json_string() const {
    nlohmann::json j{{"dims", dims_},
                     {"activation", to_string(activation_)},
                     {"params", params_},
                     {"adam_m", moment1_},
                     {"adam_v", moment2_},
                     {"adam_steps", adam_steps_}};
    return j.dump();
}

QNetwork QNetwork::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad network json: ") + e.what());
    }
    QNetwork net(j.at("dims").get<std::vector<int>>(),
                 activation_from_string(j.at("activation").get<std::string>()), 0);
    const auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != net.params_.size()) {
        throw CheckpointMismatch("parameter count does not match dims");
    }
    net.params_ = params;
    net.moment1_ = j.at("adam_m").get<std::vector<double>>();
    net.moment2_ = j.at("adam_v").get<std::vector<double>>();
    net.adam_steps_ = j.at("adam_steps").get<std::int64_t>();
    if (net.moment1_.size() != net.params_.size() || net.moment2_.size() != net.params_.size()) {
        throw CheckpointMismatch("optimizer state does not match dims");
    }
    return net;
}

}  // namespace netaudit
