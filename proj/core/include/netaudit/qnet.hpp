#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netaudit/env.hpp"
#include "netaudit/network.hpp"

namespace netaudit {

enum class Activation { ReLU, Linear };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Feed-forward Q-value approximator: a chain of affine layers with the
// configured hidden activation and a linear output layer. Parameters live in
// one flat vector (weights row-major, then biases, per layer) so the
// optimizer and the finite-difference checks can treat them uniformly.
class QNetwork {
public:
    QNetwork(std::vector<int> dims, Activation activation, std::uint64_t init_seed);

    const std::vector<int>& dims() const { return dims_; }
    Activation activation() const { return activation_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }

    std::vector<double> forward(const Observation& obs) const;

    // TD targets y = r (terminal) or r + gamma * max_a Q(next). Targets are
    // computed once and held fixed while the loss and its gradient are taken,
    // as in semi-gradient Q-learning.
    std::vector<double> td_targets(std::span<const Transition> batch, double gamma) const;

    // Mean squared error over the taken-action outputs of a batch.
    double loss(std::span<const Transition> batch, std::span<const double> targets) const;

    // d(loss)/d(params), one entry per parameter.
    std::vector<double> gradients(std::span<const Transition> batch,
                                  std::span<const double> targets) const;

    // One adaptive-moment update step with the given learning rate.
    void adam_step(std::span<const double> grads, double learning_rate);

    std::size_t param_count() const { return params_.size(); }
    const std::vector<double>& params() const { return params_; }
    double param(std::size_t i) const { return params_[i]; }
    void set_param(std::size_t i, double v) { params_[i] = v; }

    bool parameters_finite() const;

    std::string to_json_string() const;
    static QNetwork from_json_string(const std::string& text);

private:
    struct LayerSpan {
        std::size_t weights = 0;  // offset of the out x in weight block
        std::size_t biases = 0;   // offset of the bias block
        int in = 0, out = 0;
    };

    double activate(double z) const;
    double activate_grad(double z) const;
    // Forward pass keeping pre-activations and activations per layer.
    void forward_trace(const Observation& obs, std::vector<std::vector<double>>& pre,
                       std::vector<std::vector<double>>& act) const;

    std::vector<int> dims_;
    Activation activation_ = Activation::ReLU;
    std::vector<LayerSpan> layers_;
    std::vector<double> params_;

    // Adam state
    std::vector<double> moment1_;
    std::vector<double> moment2_;
    std::int64_t adam_steps_ = 0;

    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kAdamEps = 1e-8;
};

}  // namespace netaudit
