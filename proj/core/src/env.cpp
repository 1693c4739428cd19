#include "netaudit/env.hpp"

#include <cmath>

namespace netaudit {

namespace {
constexpr int kPerturbRetries = 100;
}

AgentId sample_modifier(Rng& rng, int num_agents) {
    if (num_agents < 1) throw DomainError("num_agents must be >= 1");
    std::uniform_int_distribution<int> pick(0, num_agents - 1);
    return pick(rng);
}

AuditEnv::AuditEnv(NetworkGraph base, EnvOptions options, std::uint64_t seed)
    : base_(base), graph_(std::move(base)), options_(options), rng_(seed) {
    if (options_.reward_lower_bound >= 0) {
        throw DomainError("reward_lower_bound must be negative");
    }
    if (!(options_.perturb_min > 0.0) || options_.perturb_max < options_.perturb_min) {
        throw DomainError("perturbation range must satisfy 0 < min <= max");
    }
}

Observation AuditEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    return reset();
}

Observation AuditEnv::reset() {
    prev_hidden_ = has_episode_ ? hidden_ : 0;
    hidden_ = sample_modifier(rng_, base_.num_agents());
    graph_ = base_;
    perturb();
    episode_return_ = 0;
    step_count_ = 0;
    done_ = false;
    has_episode_ = true;
    return observation();
}

void AuditEnv::perturb() {
    const double pool = base_.pool_total();
    std::uniform_real_distribution<double> mag(options_.perturb_min * pool,
                                               options_.perturb_max * pool);
    std::uniform_int_distribution<int> coin(0, 1);

    const auto try_delta = [this](double delta) {
        if (std::abs(delta) <= kValueEpsilon) return false;
        try {
            NetworkGraph next = base_.with_resource_change(hidden_, delta);
            graph_ = std::move(next);
            return true;
        } catch (const Error&) {
            return false;
        }
    };

    for (int i = 0; i < kPerturbRetries; ++i) {
        const double delta = (coin(rng_) == 0 ? 1.0 : -1.0) * mag(rng_);
        if (try_delta(delta)) return;
    }
    // The standard range can be infeasible when the agent holds almost
    // nothing and the pool is nearly saturated; halve toward a feasible move.
    const double held = base_.resources()[static_cast<std::size_t>(hidden_)];
    double headroom = pool;
    for (double r : base_.resources()) headroom -= r;
    for (double scale = 0.5; scale > 1e-6; scale *= 0.5) {
        if (try_delta(-held * scale)) return;
        if (try_delta(headroom * scale)) return;
    }
    throw EnvError("agent " + std::to_string(hidden_) + " has no legal perturbation");
}

StepResult AuditEnv::step(AgentId action) {
    if (done_) throw SteppingFinishedEpisode("episode is finished; call reset()");
    if (action < 0 || action >= base_.num_agents()) {
        throw ActionOutOfRange("action " + std::to_string(action) + " out of range");
    }
    ++step_count_;
    StepResult result;
    if (action == hidden_) {
        result.reward = 1;
        result.done = true;
    } else {
        result.reward = -1;
        // The return floor ends otherwise unbounded episodes.
        result.done = episode_return_ + result.reward <= options_.reward_lower_bound;
    }
    episode_return_ += result.reward;
    done_ = result.done;
    result.observation = observation();
    return result;
}

Observation AuditEnv::initial_observation() const {
    return base_.element_values();
}

Observation AuditEnv::observation(bool include_prev_state) const {
    Observation obs = graph_.element_values();
    if (include_prev_state) {
        obs.push_back(static_cast<double>(prev_hidden_) / base_.num_agents());
    }
    return obs;
}

}  // namespace netaudit
