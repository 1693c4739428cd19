#include "netaudit/episode_log.hpp"

#include "json.hpp"

namespace netaudit {

namespace {

nlohmann::json env_options_json(const EnvOptions& env) {
    return {{"reward_lower_bound", env.reward_lower_bound},
            {"include_prev_state", env.include_prev_state},
            {"perturb_min", env.perturb_min},
            {"perturb_max", env.perturb_max}};
}

EnvOptions env_options_from_json(const nlohmann::json& j) {
    EnvOptions env;
    env.reward_lower_bound = j.at("reward_lower_bound").get<int>();
    env.include_prev_state = j.at("include_prev_state").get<bool>();
    env.perturb_min = j.at("perturb_min").get<double>();
    env.perturb_max = j.at("perturb_max").get<double>();
    return env;
}

}  // namespace

EpisodeLogWriter::EpisodeLogWriter(const std::string& path) : out_(path) {
    if (!out_) throw Error("cannot open episode log " + path);
}

void EpisodeLogWriter::write_run_header(const RunHeader& header) {
    nlohmann::json j{{"type", "run"},
                     {"config_hash", header.config_hash},
                     {"seed", header.seed},
                     {"network", nlohmann::json::parse(to_json_string(header.network))},
                     {"env", env_options_json(header.env)}};
    out_ << j.dump() << '\n';
}

void EpisodeLogWriter::begin_episode(const EpisodeHeader& header) {
    nlohmann::json j{{"type", "episode"},
                     {"episode", header.episode},
                     {"seed", header.seed},
                     {"config_hash", header.config_hash},
                     {"hidden_state", header.hidden_state},
                     {"prev_hidden", header.prev_hidden},
                     {"init_obs", header.init_obs},
                     {"obs", header.obs},
                     {"resources", header.resources}};
    out_ << j.dump() << '\n';
}

void EpisodeLogWriter::write_transition(int episode, const Transition& t) {
    nlohmann::json j{{"type", "transition"}, {"episode", episode},
                     {"obs", t.observation}, {"action", t.action},
                     {"reward", t.reward},   {"next_obs", t.next_observation},
                     {"done", t.done}};
    out_ << j.dump() << '\n';
}

EpisodeLog read_episode_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifacts("cannot read episode log " + path);
    EpisodeLog log;
    bool saw_run_header = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("episode log line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "run") {
            log.run.config_hash = j.at("config_hash").get<std::string>();
            log.run.seed = j.at("seed").get<std::uint64_t>();
            log.run.network = network_config_from_json_string(j.at("network").dump());
            log.run.env = env_options_from_json(j.at("env"));
            saw_run_header = true;
        } else if (type == "episode") {
            if (!saw_run_header) throw ParseError("episode header before run header");
            EpisodeRecord rec;
            rec.header.episode = j.at("episode").get<int>();
            rec.header.seed = j.at("seed").get<std::uint64_t>();
            rec.header.config_hash = j.at("config_hash").get<std::string>();
            rec.header.hidden_state = j.at("hidden_state").get<AgentId>();
            rec.header.prev_hidden = j.at("prev_hidden").get<AgentId>();
            rec.header.init_obs = j.at("init_obs").get<Observation>();
            rec.header.obs = j.at("obs").get<Observation>();
            rec.header.resources = j.at("resources").get<std::vector<double>>();
            log.episodes.push_back(std::move(rec));
        } else if (type == "transition") {
            if (log.episodes.empty()) throw ParseError("transition before episode header");
            Transition t;
            t.observation = j.at("obs").get<Observation>();
            t.action = j.at("action").get<AgentId>();
            t.reward = j.at("reward").get<int>();
            t.next_observation = j.at("next_obs").get<Observation>();
            t.done = j.at("done").get<bool>();
            log.episodes.back().transitions.push_back(std::move(t));
        } else {
            throw ParseError("unknown log record type '" + type + "'");
        }
    }
    if (!saw_run_header) throw ParseError("episode log has no run header");
    return log;
}

}  // namespace netaudit
