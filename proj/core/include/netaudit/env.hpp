#pragma once

#include <cstdint>
#include <optional>

#include "netaudit/network.hpp"
#include "netaudit/rng.hpp"

namespace netaudit {

struct EnvOptions {
    int reward_lower_bound = -10;    // episode return floor; episode ends when hit
    bool include_prev_state = false; // append S_{t-1}/num_agents to observations
    double perturb_min = 0.02;       // resource delta magnitude, fraction of pool
    double perturb_max = 0.10;
};

struct StepResult {
    Observation observation;
    int reward = 0;
    bool done = false;
};

// One environment step record, kept for replay and audit.
struct Transition {
    Observation observation;
    AgentId action = 0;
    int reward = 0;
    Observation next_observation;
    bool done = false;
};

// Uniform draw over [0, num_agents).
AgentId sample_modifier(Rng& rng, int num_agents);

// The stochastic audit game: each episode a hidden agent moves resources on
// the network; the learner sees element values only and must name the agent.
// A correct guess ends the episode at +1; wrong guesses cost -1 each until
// the return floor ends the episode.
class AuditEnv {
public:
    AuditEnv(NetworkGraph base, EnvOptions options, std::uint64_t seed);

    // Starts a new episode: restores the base graph, samples the modifying
    // agent and applies one legal resource perturbation by it.
    Observation reset();
    Observation reset(std::uint64_t seed);  // reseeds the stream first

    StepResult step(AgentId action);

    int num_agents() const { return base_.num_agents(); }
    int num_elements() const { return base_.num_elements(); }
    const EnvOptions& options() const { return options_; }
    const NetworkGraph& base_graph() const { return base_; }
    const NetworkGraph& graph() const { return graph_; }

    // Ground-truth accessor for tests and the oracle benchmark; never part
    // of the learner-facing observation.
    AgentId hidden_state() const { return hidden_; }
    AgentId prev_hidden() const { return prev_hidden_; }

    int episode_return() const { return episode_return_; }
    int step_count() const { return step_count_; }
    bool done() const { return done_; }

    // Element values of the pre-perturbation snapshot for this episode.
    Observation initial_observation() const;

    Observation observation() const { return observation(options_.include_prev_state); }
    Observation observation(bool include_prev_state) const;

private:
    void perturb();

    NetworkGraph base_;
    NetworkGraph graph_;
    EnvOptions options_;
    Rng rng_;
    AgentId hidden_ = 0;
    AgentId prev_hidden_ = 0;
    int episode_return_ = 0;
    int step_count_ = 0;
    bool done_ = true;  // step() before the first reset() is an error
    bool has_episode_ = false;
};

}  // namespace netaudit
