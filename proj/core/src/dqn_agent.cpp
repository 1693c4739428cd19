#include "netaudit/dqn_agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace netaudit {

std::string to_string(EpsilonSchedule s) {
    return s == EpsilonSchedule::Exponential ? "exponential" : "linear";
}

EpsilonSchedule epsilon_schedule_from_string(const std::string& s) {
    if (s == "exponential") return EpsilonSchedule::Exponential;
    if (s == "linear") return EpsilonSchedule::Linear;
    throw ParseError("unknown epsilon schedule '" + s + "'");
}

double epsilon_at(const AgentHyperparams& hp, int episode) {
    if (episode < 0) throw DomainError("episode must be non-negative");
    if (hp.epsilon_start <= hp.epsilon_end) return hp.epsilon_end;
    double eps;
    if (hp.epsilon_schedule == EpsilonSchedule::Exponential) {
        const double factor = std::pow(hp.epsilon_end / hp.epsilon_start,
                                       1.0 / static_cast<double>(hp.epsilon_decay_episodes));
        eps = hp.epsilon_start * std::pow(factor, static_cast<double>(episode));
    } else {
        eps = hp.epsilon_start - (hp.epsilon_start - hp.epsilon_end) *
                                     static_cast<double>(episode) /
                                     static_cast<double>(hp.epsilon_decay_episodes);
    }
    return std::max(hp.epsilon_end, eps);
}

AgentId select_action(const QNetwork& net, const Observation& obs, double epsilon, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) >= epsilon) {
        const std::vector<double> q = net.forward(obs);
        return static_cast<AgentId>(
            std::distance(q.begin(), std::max_element(q.begin(), q.end())));
    }
    std::uniform_int_distribution<int> pick(0, net.output_dim() - 1);
    return pick(rng);
}

double learn(QNetwork& net, ReplayMemory& memory, const AgentHyperparams& hp, Rng& rng) {
    if (memory.size() < static_cast<std::size_t>(hp.batch_size)) {
        throw InsufficientMemory("replay memory holds " + std::to_string(memory.size()) +
                                 " < batch size " + std::to_string(hp.batch_size));
    }
    const std::vector<Transition> batch = memory.sample(hp.batch_size, rng);
    const std::vector<double> targets = net.td_targets(batch, hp.gamma);
    const double mse = net.loss(batch, targets);
    const std::vector<double> grads = net.gradients(batch, targets);
    net.adam_step(grads, hp.learning_rate);
    return mse;
}

DqnAgent::DqnAgent(int obs_dim, int num_actions, AgentHyperparams hp, std::uint64_t seed)
    : DqnAgent(QNetwork({obs_dim, hp.hidden1, hp.hidden2, num_actions}, hp.activation, seed),
               hp, seed) {}

DqnAgent::DqnAgent(QNetwork net, AgentHyperparams hp, std::uint64_t seed)
    : hp_(hp),
      net_(std::move(net)),
      memory_(hp.memory_capacity, net_.input_dim()),
      rng_(seed),
      seed_(seed) {}

AgentId DqnAgent::act(const Observation& obs, double epsilon) {
    return select_action(net_, obs, epsilon, rng_);
}

AgentId DqnAgent::act_greedy(const Observation& obs) {
    return act(obs, 0.0);
}

void DqnAgent::save_checkpoint(const std::string& path) const {
    std::ostringstream rng_state;
    rng_state << rng_;
    nlohmann::json j{{"version", 1},
                     {"network", nlohmann::json::parse(net_.to_json_string())},
                     {"hyperparams", nlohmann::json::parse(to_json_string(hp_))},
                     {"seed", seed_},
                     {"rng_state", rng_state.str()}};
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint to " + path);
    out << j.dump(2) << '\n';
}

DqnAgent DqnAgent::load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifacts("cannot read checkpoint " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad checkpoint json: ") + e.what());
    }
    if (j.at("version").get<int>() != 1) {
        throw CheckpointMismatch("unsupported checkpoint version");
    }
    QNetwork net = QNetwork::from_json_string(j.at("network").dump());
    AgentHyperparams hp = agent_hyperparams_from_json_string(j.at("hyperparams").dump());
    DqnAgent agent(std::move(net), hp, j.at("seed").get<std::uint64_t>());
    std::istringstream rng_state(j.at("rng_state").get<std::string>());
    rng_state >> agent.rng_;
    return agent;
}

std::string to_json_string(const AgentHyperparams& hp) {
    nlohmann::json j{{"gamma", hp.gamma},
                     {"epsilon_start", hp.epsilon_start},
                     {"epsilon_end", hp.epsilon_end},
                     {"epsilon_decay_episodes", hp.epsilon_decay_episodes},
                     {"epsilon_schedule", to_string(hp.epsilon_schedule)},
                     {"learning_rate", hp.learning_rate},
                     {"batch_size", hp.batch_size},
                     {"memory_capacity", hp.memory_capacity},
                     {"hidden1", hp.hidden1},
                     {"hidden2", hp.hidden2},
                     {"activation", to_string(hp.activation)}};
    return j.dump();
}

AgentHyperparams agent_hyperparams_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad hyperparams json: ") + e.what());
    }
    AgentHyperparams hp;
    if (j.contains("gamma")) hp.gamma = j.at("gamma").get<double>();
    if (j.contains("epsilon_start")) hp.epsilon_start = j.at("epsilon_start").get<double>();
    if (j.contains("epsilon_end")) hp.epsilon_end = j.at("epsilon_end").get<double>();
    if (j.contains("epsilon_decay_episodes")) {
        hp.epsilon_decay_episodes = j.at("epsilon_decay_episodes").get<int>();
    }
    if (j.contains("epsilon_schedule")) {
        hp.epsilon_schedule = epsilon_schedule_from_string(j.at("epsilon_schedule").get<std::string>());
    }
    if (j.contains("learning_rate")) hp.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("batch_size")) hp.batch_size = j.at("batch_size").get<int>();
    if (j.contains("memory_capacity")) hp.memory_capacity = j.at("memory_capacity").get<int>();
    if (j.contains("hidden1")) hp.hidden1 = j.at("hidden1").get<int>();
    if (j.contains("hidden2")) hp.hidden2 = j.at("hidden2").get<int>();
    if (j.contains("activation")) {
        hp.activation = activation_from_string(j.at("activation").get<std::string>());
    }
    if (hp.gamma < 0.0 || hp.gamma > 1.0) throw InvalidConfig("gamma must be in [0,1]");
    if (hp.epsilon_end < 0.0 || hp.epsilon_start > 1.0 || hp.epsilon_end > hp.epsilon_start) {
        throw InvalidConfig("need 0 <= epsilon_end <= epsilon_start <= 1");
    }
    return hp;
}

}  // namespace netaudit
