#pragma once

#include <cstdint>
#include <string>

#include "netaudit/qnet.hpp"
#include "netaudit/replay.hpp"

namespace netaudit {

enum class EpsilonSchedule { Exponential, Linear };

std::string to_string(EpsilonSchedule s);
EpsilonSchedule epsilon_schedule_from_string(const std::string& s);

struct AgentHyperparams {
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    // Episode at which the schedule first touches epsilon_end.
    int epsilon_decay_episodes = 3000;
    EpsilonSchedule epsilon_schedule = EpsilonSchedule::Exponential;
    double learning_rate = 1e-4;
    int batch_size = 64;
    int memory_capacity = 100000;
    int hidden1 = 64;
    int hidden2 = 64;
    Activation activation = Activation::ReLU;
};

// Exploration rate for a given episode: monotone non-increasing from
// epsilon_start, clamped at epsilon_end.
double epsilon_at(const AgentHyperparams& hp, int episode);

// Epsilon-greedy: greedy argmax (lowest index wins ties) with probability
// 1 - epsilon, uniform random action otherwise.
AgentId select_action(const QNetwork& net, const Observation& obs, double epsilon, Rng& rng);

// One Q-learning update from a uniformly sampled batch. Returns the batch
// MSE before the parameter step. Throws InsufficientMemory until the buffer
// holds at least batch_size transitions.
double learn(QNetwork& net, ReplayMemory& memory, const AgentHyperparams& hp, Rng& rng);

// Bundles network, memory and exploration state for the training loop.
class DqnAgent {
public:
    DqnAgent(int obs_dim, int num_actions, AgentHyperparams hp, std::uint64_t seed);

    AgentId act(const Observation& obs, double epsilon);
    AgentId act_greedy(const Observation& obs);
    void store(Transition t) { memory_.push(std::move(t)); }

    bool can_learn() const {
        return memory_.size() >= static_cast<std::size_t>(hp_.batch_size);
    }
    double learn_step() { return learn(net_, memory_, hp_, rng_); }

    const QNetwork& network() const { return net_; }
    QNetwork& network() { return net_; }
    const ReplayMemory& memory() const { return memory_; }
    const AgentHyperparams& hyperparams() const { return hp_; }

    void save_checkpoint(const std::string& path) const;
    static DqnAgent load_checkpoint(const std::string& path);

private:
    DqnAgent(QNetwork net, AgentHyperparams hp, std::uint64_t seed);

    AgentHyperparams hp_;
    QNetwork net_;
    ReplayMemory memory_;
    Rng rng_;
    std::uint64_t seed_ = 0;
};

std::string to_json_string(const AgentHyperparams& hp);
AgentHyperparams agent_hyperparams_from_json_string(const std::string& text);

}  // namespace netaudit
