#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "netaudit/env.hpp"
#include "netaudit/network.hpp"

namespace netaudit {

// JSON Lines episode/transition log: one run header line, then per episode a
// header line followed by its transition lines. Doubles as the replay-buffer
// checkpoint for offline learners and as the auditors' input.
struct RunHeader {
    std::string config_hash;
    std::uint64_t seed = 0;
    NetworkConfig network;  // fully resolved (explicit links/impact/resources)
    EnvOptions env;
};

struct EpisodeHeader {
    int episode = 0;
    std::uint64_t seed = 0;      // master run seed
    std::string config_hash;
    AgentId hidden_state = 0;    // ground truth, for audit comparison
    AgentId prev_hidden = 0;
    Observation init_obs;        // element values before the perturbation
    Observation obs;             // element values after the perturbation
    std::vector<double> resources;  // post-perturbation allocation snapshot
};

struct EpisodeRecord {
    EpisodeHeader header;
    std::vector<Transition> transitions;
};

struct EpisodeLog {
    RunHeader run;
    std::vector<EpisodeRecord> episodes;
};

class EpisodeLogWriter {
public:
    explicit EpisodeLogWriter(const std::string& path);

    void write_run_header(const RunHeader& header);
    void begin_episode(const EpisodeHeader& header);
    void write_transition(int episode, const Transition& t);

private:
    std::ofstream out_;
};

EpisodeLog read_episode_log(const std::string& path);

}  // namespace netaudit
