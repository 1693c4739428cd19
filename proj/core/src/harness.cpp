#include "netaudit/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "netaudit/audit_math.hpp"
#include "netaudit/dp_oracle.hpp"
#include "netaudit/rng.hpp"

namespace fs = std::filesystem;

namespace netaudit {

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifacts("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::string join_path(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

// Shortest double representation that parses back exactly.
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int observation_dim(const NetworkGraph& graph, const EnvOptions& env) {
    return graph.num_elements() + (env.include_prev_state ? 1 : 0);
}

RunConfig resolve_config(const RunConfig& config, const NetworkGraph& graph) {
    RunConfig resolved = config;
    resolved.network.num_agents = graph.num_agents();
    resolved.network.num_elements = graph.num_elements();
    resolved.network.links = graph.links();
    resolved.network.impact = graph.impact();
    resolved.network.resources = graph.resources();
    resolved.network.pool_total = graph.pool_total();
    return resolved;
}

nlohmann::json env_options_json(const EnvOptions& env) {
    return {{"reward_lower_bound", env.reward_lower_bound},
            {"include_prev_state", env.include_prev_state},
            {"perturb_min", env.perturb_min},
            {"perturb_max", env.perturb_max}};
}

EnvOptions env_options_from_json(const nlohmann::json& j) {
    EnvOptions env;
    if (j.contains("reward_lower_bound")) {
        env.reward_lower_bound = j.at("reward_lower_bound").get<int>();
    }
    if (j.contains("include_prev_state")) {
        env.include_prev_state = j.at("include_prev_state").get<bool>();
    }
    if (j.contains("perturb_min")) env.perturb_min = j.at("perturb_min").get<double>();
    if (j.contains("perturb_max")) env.perturb_max = j.at("perturb_max").get<double>();
    return env;
}

// Eqs-based attribution over the logged snapshots: ratio scan for the changed
// element, ownership lookup, then the responsibility percentages.
AttributionReport equations_attribute(const NetworkGraph& base, const EpisodeHeader& header) {
    const NetworkGraph curr = base.with_resources(header.resources);
    const ChangeIndex change = detect_change(header.init_obs, header.obs);
    if (!change) throw NoChangeDetected("episode " + std::to_string(header.episode) +
                                        " shows no change");
    AttributionReport report;
    report.modifying_agent = identify_agent(curr, change);
    report.change_index = change;
    report.mu = element_responsibility(curr);
    AgentResponsibility ar = agent_responsibility(base, curr);
    report.nu = std::move(ar.nu);
    report.delta_nu = std::move(ar.delta_nu);
    return report;
}

}  // namespace

NetworkConfig RunConfig::default_network_config() {
    NetworkConfig cfg;
    cfg.num_agents = 3;
    cfg.num_elements = 8;
    cfg.links = std::vector<AgentId>{0, 0, 1, 1, 1, 1, 2, 2};
    cfg.impact = std::vector<double>(8, 1.0);
    cfg.resources = std::vector<double>{0.5, 0.3, 0.2};
    cfg.pool_total = 1.0;
    return cfg;
}

std::string to_json_string(const RunConfig& config) {
    nlohmann::json j{{"network", nlohmann::json::parse(to_json_string(config.network))},
                     {"env", env_options_json(config.env)},
                     {"agent", nlohmann::json::parse(to_json_string(config.agent))},
                     {"episodes", config.episodes},
                     {"eval_episodes", config.eval_episodes},
                     {"seed", config.seed},
                     {"moving_average_window", config.moving_average_window}};
    return j.dump();
}

RunConfig run_config_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad run config json: ") + e.what());
    }
    RunConfig config;
    if (j.contains("network")) {
        config.network = network_config_from_json_string(j.at("network").dump());
    }
    if (j.contains("env")) config.env = env_options_from_json(j.at("env"));
    if (j.contains("agent")) {
        config.agent = agent_hyperparams_from_json_string(j.at("agent").dump());
    }
    if (j.contains("episodes")) config.episodes = j.at("episodes").get<int>();
    if (j.contains("eval_episodes")) config.eval_episodes = j.at("eval_episodes").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("moving_average_window")) {
        config.moving_average_window = j.at("moving_average_window").get<int>();
    }
    if (config.episodes < 1) throw InvalidConfig("episodes must be >= 1");
    if (config.eval_episodes < 1) throw InvalidConfig("eval_episodes must be >= 1");
    return config;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json_string(read_text_file(path));
}

std::string config_hash(const RunConfig& config) {
    const std::string canonical = to_json_string(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> moving_average(const std::vector<int>& values, int window) {
    if (window < 1) throw DomainError("window must be positive");
    std::vector<double> avg(values.size(), 0.0);
    double running = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        running += values[i];
        if (i >= static_cast<std::size_t>(window)) {
            running -= values[i - static_cast<std::size_t>(window)];
        }
        const std::size_t n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        avg[i] = running / static_cast<double>(n);
    }
    return avg;
}

std::string TrainingReport::to_json_string() const {
    nlohmann::json j{{"returns", returns},
                     {"moving_avg", moving_avg},
                     {"moving_average_window", moving_average_window},
                     {"wall_clock_seconds", wall_clock_seconds},
                     {"checkpoint_path", checkpoint_path},
                     {"config_hash", config_hash}};
    return j.dump();
}

TrainingReport TrainingReport::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad training report json: ") + e.what());
    }
    TrainingReport r;
    r.returns = j.at("returns").get<std::vector<int>>();
    r.moving_avg = j.at("moving_avg").get<std::vector<double>>();
    r.moving_average_window = j.at("moving_average_window").get<int>();
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    r.checkpoint_path = j.at("checkpoint_path").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    return r;
}

std::string EvalReport::to_json_string() const {
    nlohmann::json j{{"episodes", episodes},
                     {"first_try_correct", first_try_correct},
                     {"accuracy", accuracy},
                     {"confusion", confusion},
                     {"config_hash", config_hash}};
    return j.dump();
}

EvalReport EvalReport::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad eval report json: ") + e.what());
    }
    EvalReport r;
    r.episodes = j.at("episodes").get<int>();
    r.first_try_correct = j.at("first_try_correct").get<int>();
    r.accuracy = j.at("accuracy").get<double>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<int>>>();
    r.config_hash = j.at("config_hash").get<std::string>();
    return r;
}

std::string to_string(AuditMode mode) {
    return mode == AuditMode::Oracle ? "oracle" : "equations";
}

AuditMode audit_mode_from_string(const std::string& s) {
    if (s == "oracle") return AuditMode::Oracle;
    if (s == "equations") return AuditMode::Equations;
    throw ParseError("unknown audit mode '" + s + "'");
}

std::string AuditSummary::to_json_string() const {
    nlohmann::json j{{"episodes", episodes},
                     {"mode", to_string(mode)},
                     {"ground_truth_matches", ground_truth_matches},
                     {"attributions", attributions},
                     {"responsibility_totals", responsibility_totals},
                     {"disagreements", 0}};
    return j.dump();
}

void write_train_csv(const std::string& path, const TrainingReport& report) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "episode,return,moving_avg\n";
    for (std::size_t i = 0; i < report.returns.size(); ++i) {
        out << i << ',' << report.returns[i] << ',' << format_double(report.moving_avg[i])
            << '\n';
    }
}

std::vector<std::pair<int, double>> parse_train_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifacts("cannot read " + path);
    std::vector<std::pair<int, double>> rows;
    std::string line;
    if (!std::getline(in, line) || line != "episode,return,moving_avg") {
        throw ParseError("unexpected train.csv header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int episode = 0, ret = 0;
        double avg = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &episode, &ret, &avg) != 3) {
            throw ParseError("bad train.csv row: " + line);
        }
        rows.emplace_back(ret, avg);
    }
    return rows;
}

TrainingReport train(const RunConfig& config, const std::string& out_dir) {
    if (config.episodes < 1) throw InvalidConfig("episodes must be >= 1");
    fs::create_directories(out_dir);

    const NetworkGraph graph = NetworkGraph::build(config.network);
    const RunConfig resolved = resolve_config(config, graph);
    const std::string hash = config_hash(resolved);
    {
        nlohmann::json j = nlohmann::json::parse(to_json_string(resolved));
        j["config_hash"] = hash;
        write_text_file(join_path(out_dir, kConfigFile), j.dump(2) + "\n");
    }

    AuditEnv env(graph, config.env, derive_seed(config.seed, SeedStream::TrainEnv));
    DqnAgent agent(observation_dim(graph, config.env), graph.num_agents(), config.agent,
                   derive_seed(config.seed, SeedStream::Agent));

    EpisodeLogWriter log(join_path(out_dir, kEpisodeLogFile));
    log.write_run_header({hash, config.seed, resolved.network, config.env});

    const auto start = std::chrono::steady_clock::now();
    TrainingReport report;
    report.moving_average_window = config.moving_average_window;
    report.config_hash = hash;
    report.returns.reserve(static_cast<std::size_t>(config.episodes));

    for (int ep = 0; ep < config.episodes; ++ep) {
        Observation obs = env.reset();
        log.begin_episode({ep, config.seed, hash, env.hidden_state(), env.prev_hidden(),
                           env.initial_observation(), env.observation(false),
                           env.graph().resources()});
        const double eps = epsilon_at(config.agent, ep);
        while (!env.done()) {
            const AgentId action = agent.act(obs, eps);
            const StepResult result = env.step(action);
            Transition t{obs, action, result.reward, result.observation, result.done};
            log.write_transition(ep, t);
            agent.store(std::move(t));
            if (agent.can_learn()) agent.learn_step();
            obs = result.observation;
        }
        report.returns.push_back(env.episode_return());
    }

    report.moving_avg = moving_average(report.returns, config.moving_average_window);
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checkpoint_path = join_path(out_dir, kCheckpointFile);
    agent.save_checkpoint(report.checkpoint_path);
    write_train_csv(join_path(out_dir, kTrainCsvFile), report);
    write_text_file(join_path(out_dir, kTrainReportFile), report.to_json_string() + "\n");
    return report;
}

std::vector<TrainingReport> train_sweep(const RunConfig& config, const std::string& out_dir,
                                        int parallel) {
    if (parallel < 1) throw DomainError("parallel must be >= 1");
    std::vector<TrainingReport> reports(static_cast<std::size_t>(parallel));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(parallel));
    std::vector<std::thread> workers;
    for (int k = 0; k < parallel; ++k) {
        workers.emplace_back([&, k] {
            try {
                RunConfig c = config;
                c.seed = config.seed + static_cast<std::uint64_t>(k);
                const std::string dir = (fs::path(out_dir) / ("run-" + std::to_string(k))).string();
                reports[static_cast<std::size_t>(k)] = train(c, dir);
            } catch (...) {
                errors[static_cast<std::size_t>(k)] = std::current_exception();
            }
        });
    }
    for (std::thread& w : workers) w.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return reports;
}

EvalReport evaluate(const std::string& checkpoint_path, const RunConfig& config,
                    int eval_episodes, const std::string& out_dir) {
    if (eval_episodes < 1) throw InvalidConfig("eval_episodes must be >= 1");
    const NetworkGraph graph = NetworkGraph::build(config.network);
    DqnAgent agent = DqnAgent::load_checkpoint(checkpoint_path);
    if (agent.network().input_dim() != observation_dim(graph, config.env) ||
        agent.network().output_dim() != graph.num_agents()) {
        throw CheckpointMismatch("checkpoint dims do not match configuration");
    }

    // Evaluation episodes draw from their own stream, disjoint from training.
    AuditEnv env(graph, config.env, derive_seed(config.seed, SeedStream::EvalEnv));
    EvalReport report;
    report.episodes = eval_episodes;
    report.config_hash = config_hash(resolve_config(config, graph));
    report.confusion.assign(static_cast<std::size_t>(graph.num_agents()),
                            std::vector<int>(static_cast<std::size_t>(graph.num_agents()), 0));
    for (int ep = 0; ep < eval_episodes; ++ep) {
        const Observation obs = env.reset();
        const AgentId first = agent.act_greedy(obs);
        report.confusion[static_cast<std::size_t>(env.hidden_state())]
                        [static_cast<std::size_t>(first)]++;
        if (first == env.hidden_state()) ++report.first_try_correct;
    }
    report.accuracy =
        static_cast<double>(report.first_try_correct) / static_cast<double>(eval_episodes);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text_file(join_path(out_dir, kEvalReportFile), report.to_json_string() + "\n");
    }
    return report;
}

EvalReport baseline_random(const RunConfig& config, int episodes, const std::string& out_dir,
                           bool write_log) {
    if (episodes < 1) throw InvalidConfig("episodes must be >= 1");
    const NetworkGraph graph = NetworkGraph::build(config.network);
    const RunConfig resolved = resolve_config(config, graph);
    const std::string hash = config_hash(resolved);

    AuditEnv env(graph, config.env, derive_seed(config.seed, SeedStream::BaselineEnv));
    Rng policy_rng(derive_seed(config.seed, SeedStream::Fuzz));
    std::uniform_int_distribution<int> pick(0, graph.num_agents() - 1);

    std::unique_ptr<EpisodeLogWriter> log;
    if (write_log) {
        if (out_dir.empty()) throw DomainError("write_log requires an output directory");
        fs::create_directories(out_dir);
        log = std::make_unique<EpisodeLogWriter>(join_path(out_dir, kEpisodeLogFile));
        log->write_run_header({hash, config.seed, resolved.network, config.env});
    }

    EvalReport report;
    report.episodes = episodes;
    report.config_hash = hash;
    report.confusion.assign(static_cast<std::size_t>(graph.num_agents()),
                            std::vector<int>(static_cast<std::size_t>(graph.num_agents()), 0));
    for (int ep = 0; ep < episodes; ++ep) {
        Observation obs = env.reset();
        if (log) {
            log->begin_episode({ep, config.seed, hash, env.hidden_state(), env.prev_hidden(),
                                env.initial_observation(), env.observation(false),
                                env.graph().resources()});
        }
        const AgentId first = pick(policy_rng);
        report.confusion[static_cast<std::size_t>(env.hidden_state())]
                        [static_cast<std::size_t>(first)]++;
        if (first == env.hidden_state()) ++report.first_try_correct;

        AgentId action = first;
        while (!env.done()) {
            const StepResult result = env.step(action);
            if (log) {
                log->write_transition(ep, {obs, action, result.reward, result.observation,
                                           result.done});
            }
            obs = result.observation;
            if (!result.done) action = pick(policy_rng);
        }
    }
    report.accuracy =
        static_cast<double>(report.first_try_correct) / static_cast<double>(episodes);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text_file(join_path(out_dir, "baseline.json"), report.to_json_string() + "\n");
    }
    return report;
}

AuditSummary audit(const std::string& log_path, AuditMode mode, const std::string& out_dir,
                   std::vector<AttributionReport>* reports) {
    const EpisodeLog log = read_episode_log(log_path);
    const NetworkGraph base = NetworkGraph::build(log.run.network);

    AuditSummary summary;
    summary.mode = mode;
    summary.episodes = static_cast<int>(log.episodes.size());
    summary.attributions.assign(static_cast<std::size_t>(base.num_agents()), 0);
    summary.responsibility_totals.assign(static_cast<std::size_t>(base.num_agents()), 0.0);

    std::unique_ptr<std::ofstream> audit_out;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        audit_out = std::make_unique<std::ofstream>(join_path(out_dir, kAuditLogFile));
        if (!*audit_out) throw Error("cannot write audit log");
    }

    for (const EpisodeRecord& rec : log.episodes) {
        const AttributionReport oracle_report =
            dp::attribute(rec.header.init_obs, rec.header.obs, *log.run.network.links,
                          *log.run.network.impact, log.run.network.pool_total);
        const AttributionReport equation_report = equations_attribute(base, rec.header);
        if (oracle_report.modifying_agent != equation_report.modifying_agent) {
            throw ContractViolation(
                "audit modes disagree on episode " + std::to_string(rec.header.episode) +
                ": oracle names " + std::to_string(oracle_report.modifying_agent) +
                ", equations name " + std::to_string(equation_report.modifying_agent));
        }
        const AttributionReport& chosen =
            mode == AuditMode::Oracle ? oracle_report : equation_report;
        if (chosen.modifying_agent == rec.header.hidden_state) {
            ++summary.ground_truth_matches;
        }
        summary.attributions[static_cast<std::size_t>(chosen.modifying_agent)]++;
        for (std::size_t a = 0; a < summary.responsibility_totals.size(); ++a) {
            summary.responsibility_totals[a] += oracle_report.responsibility[a];
        }
        if (audit_out) *audit_out << chosen.to_json_string() << '\n';
        if (reports) reports->push_back(chosen);
    }

    if (!out_dir.empty()) {
        write_text_file(join_path(out_dir, kAuditSummaryFile), summary.to_json_string() + "\n");
    }
    return summary;
}

ExportFormat export_format_from_string(const std::string& s) {
    if (s == "csv") return ExportFormat::Csv;
    if (s == "json") return ExportFormat::Json;
    throw ParseError("unknown export format '" + s + "'");
}

std::vector<std::string> export_run(const std::string& run_dir, ExportFormat format,
                                    std::string out_dir) {
    const std::string report_path = join_path(run_dir, kTrainReportFile);
    if (!fs::exists(report_path)) {
        throw MissingArtifacts("no training report in " + run_dir);
    }
    if (out_dir.empty()) out_dir = (fs::path(run_dir) / "export").string();
    fs::create_directories(out_dir);

    const TrainingReport report = TrainingReport::from_json_string(read_text_file(report_path));
    std::vector<std::string> written;
    if (format == ExportFormat::Csv) {
        const std::string path = join_path(out_dir, kTrainCsvFile);
        write_train_csv(path, report);
        written.push_back(path);
    } else {
        const std::string path = join_path(out_dir, kTrainReportFile);
        write_text_file(path, report.to_json_string() + "\n");
        written.push_back(path);
    }
    for (const char* artifact : {kEvalReportFile, kAuditSummaryFile}) {
        const std::string src = join_path(run_dir, artifact);
        if (fs::exists(src)) {
            const std::string dst = join_path(out_dir, artifact);
            fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
            written.push_back(dst);
        }
    }
    return written;
}

}  // namespace netaudit
