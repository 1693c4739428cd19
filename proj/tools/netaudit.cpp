// Command-line front end: train, eval, audit, baseline and export verbs
// around the netaudit core library. Exit code 0 on success; on failure a
// machine-readable error JSON is printed to stderr.

#include <cxxabi.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "netaudit/harness.hpp"

namespace {

using namespace netaudit;

std::string type_name(const std::exception& e) {
    int status = 0;
    std::unique_ptr<char, void (*)(void*)> demangled(
        abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status), std::free);
    std::string name = status == 0 ? demangled.get() : typeid(e).name();
    const std::string prefix = "netaudit::";
    if (name.rfind(prefix, 0) == 0) name = name.substr(prefix.size());
    return name;
}

// Flag holders shared by the verbs that build a RunConfig. Values are applied
// over the config file only when actually provided, so precedence is
// defaults < --config file < NETAUDIT_SEED < explicit flags.
struct ConfigFlags {
    std::string config_path;
    int num_agents = 0, num_elements = 0;
    std::vector<int> links;
    std::vector<double> impact, resources;
    double pool_total = 0.0;
    std::uint64_t net_seed = 0;
    int lower_bound = 0;
    bool include_prev_state = false;
    double perturb_min = 0.0, perturb_max = 0.0;
    double gamma = 0.0, epsilon_start = 0.0, epsilon_end = 0.0, learning_rate = 0.0;
    int epsilon_decay_episodes = 0, batch_size = 0, memory_capacity = 0;
    int hidden1 = 0, hidden2 = 0;
    std::string epsilon_schedule, activation;
    int episodes = 0, eval_episodes = 0, ma_window = 0;
    std::uint64_t seed = 0;

    void add_options(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "Run configuration JSON file");
        cmd.add_option("--num-agents", num_agents, "Management agents in the network");
        cmd.add_option("--num-elements", num_elements, "Service elements in the network");
        cmd.add_option("--links", links, "Element-to-agent ownership (one entry per element)");
        cmd.add_option("--impact", impact, "Per-element impact factors");
        cmd.add_option("--resources", resources, "Per-agent resource shares");
        cmd.add_option("--pool-total", pool_total, "Total resource pool");
        cmd.add_option("--net-seed", net_seed, "Seed for random network assignment");
        cmd.add_option("--lower-bound", lower_bound, "Episode return floor (negative)");
        cmd.add_flag("--include-prev-state", include_prev_state,
                     "Append the previous hidden state to observations");
        cmd.add_option("--perturb-min", perturb_min, "Min perturbation (fraction of pool)");
        cmd.add_option("--perturb-max", perturb_max, "Max perturbation (fraction of pool)");
        cmd.add_option("--gamma", gamma, "Discount factor");
        cmd.add_option("--epsilon-start", epsilon_start, "Initial exploration rate");
        cmd.add_option("--epsilon-end", epsilon_end, "Final exploration rate");
        cmd.add_option("--epsilon-decay-episodes", epsilon_decay_episodes,
                       "Episode at which epsilon reaches its end value");
        cmd.add_option("--epsilon-schedule", epsilon_schedule, "exponential or linear");
        cmd.add_option("--lr", learning_rate, "Learning rate");
        cmd.add_option("--batch-size", batch_size, "Replay batch size");
        cmd.add_option("--memory-capacity", memory_capacity, "Replay memory capacity");
        cmd.add_option("--hidden1", hidden1, "First hidden layer width");
        cmd.add_option("--hidden2", hidden2, "Second hidden layer width");
        cmd.add_option("--activation", activation, "Hidden activation: relu or linear");
        cmd.add_option("--episodes", episodes, "Training episodes");
        cmd.add_option("--eval-episodes", eval_episodes, "Evaluation episodes");
        cmd.add_option("--ma-window", ma_window, "Reward-curve moving-average window");
        cmd.add_option("--seed", seed, "Master run seed");
    }

    // Applies NETAUDIT_SEED and any explicitly provided flags onto a base
    // configuration (defaults, a --config file, or a run directory's).
    RunConfig apply(const CLI::App& cmd, RunConfig cfg) const {
        if (const char* env_seed = std::getenv("NETAUDIT_SEED")) {
            cfg.seed = std::stoull(env_seed);
        }
        if (cmd.count("--num-agents")) cfg.network.num_agents = num_agents;
        if (cmd.count("--num-elements")) cfg.network.num_elements = num_elements;
        if (cmd.count("--links")) cfg.network.links = links;
        if (cmd.count("--impact")) cfg.network.impact = impact;
        if (cmd.count("--resources")) cfg.network.resources = resources;
        if (cmd.count("--pool-total")) cfg.network.pool_total = pool_total;
        if (cmd.count("--net-seed")) cfg.network.seed = net_seed;
        // A random layout was requested: drop the built-in explicit layout.
        if (cmd.count("--net-seed") && !cmd.count("--links")) cfg.network.links.reset();
        if (cmd.count("--net-seed") && !cmd.count("--impact")) cfg.network.impact.reset();
        if (cmd.count("--net-seed") && !cmd.count("--resources")) cfg.network.resources.reset();
        if (cmd.count("--lower-bound")) cfg.env.reward_lower_bound = lower_bound;
        if (cmd.count("--include-prev-state")) cfg.env.include_prev_state = include_prev_state;
        if (cmd.count("--perturb-min")) cfg.env.perturb_min = perturb_min;
        if (cmd.count("--perturb-max")) cfg.env.perturb_max = perturb_max;
        if (cmd.count("--gamma")) cfg.agent.gamma = gamma;
        if (cmd.count("--epsilon-start")) cfg.agent.epsilon_start = epsilon_start;
        if (cmd.count("--epsilon-end")) cfg.agent.epsilon_end = epsilon_end;
        if (cmd.count("--epsilon-decay-episodes")) {
            cfg.agent.epsilon_decay_episodes = epsilon_decay_episodes;
        }
        if (cmd.count("--epsilon-schedule")) {
            cfg.agent.epsilon_schedule = epsilon_schedule_from_string(epsilon_schedule);
        }
        if (cmd.count("--lr")) cfg.agent.learning_rate = learning_rate;
        if (cmd.count("--batch-size")) cfg.agent.batch_size = batch_size;
        if (cmd.count("--memory-capacity")) cfg.agent.memory_capacity = memory_capacity;
        if (cmd.count("--hidden1")) cfg.agent.hidden1 = hidden1;
        if (cmd.count("--hidden2")) cfg.agent.hidden2 = hidden2;
        if (cmd.count("--activation")) {
            cfg.agent.activation = activation_from_string(activation);
        }
        if (cmd.count("--episodes")) cfg.episodes = episodes;
        if (cmd.count("--eval-episodes")) cfg.eval_episodes = eval_episodes;
        if (cmd.count("--ma-window")) cfg.moving_average_window = ma_window;
        if (cmd.count("--seed")) cfg.seed = seed;
        return cfg;
    }

    RunConfig resolve(const CLI::App& cmd) const {
        RunConfig base;
        if (cmd.count("--config")) base = load_run_config(config_path);
        return apply(cmd, std::move(base));
    }
};

int run(int argc, char** argv) {
    CLI::App app{"netaudit: network-change responsibility audit experiments"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the DQN identifier");
    ConfigFlags train_flags;
    train_flags.add_options(*train_cmd);
    std::string train_out = "runs/latest";
    int parallel = 1;
    train_cmd->add_option("--out", train_out, "Run output directory");
    train_cmd->add_option("--parallel", parallel, "Independent seeded runs to launch");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint greedily");
    ConfigFlags eval_flags;
    eval_flags.add_options(*eval_cmd);
    std::string eval_run_dir, eval_checkpoint, eval_out;
    eval_cmd->add_option("--run-dir", eval_run_dir,
                         "Run directory holding config.json and checkpoint.json");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "Explicit checkpoint path");
    eval_cmd->add_option("--out", eval_out, "Directory for eval.json");

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "Attribute episodes of a log");
    std::string audit_log, audit_mode = "oracle", audit_out;
    audit_cmd->add_option("--log", audit_log, "Episode log (JSON Lines)")->required();
    audit_cmd->add_option("--mode", audit_mode, "oracle or equations")
        ->check(CLI::IsMember({"oracle", "equations"}));
    audit_cmd->add_option("--out", audit_out, "Directory for audit.jsonl and summary");

    // baseline
    auto* baseline_cmd = app.add_subcommand("baseline", "Uniform-random policy reference");
    ConfigFlags baseline_flags;
    baseline_flags.add_options(*baseline_cmd);
    std::string baseline_out;
    bool baseline_log = false;
    baseline_cmd->add_option("--out", baseline_out, "Output directory");
    baseline_cmd->add_flag("--write-log", baseline_log, "Also write episodes.jsonl");

    // export
    auto* export_cmd = app.add_subcommand("export", "Re-emit run artifacts");
    std::string export_run_dir, export_format = "csv", export_out;
    export_cmd->add_option("--run-dir", export_run_dir, "Run directory")->required();
    export_cmd->add_option("--format", export_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    export_cmd->add_option("--out", export_out, "Export directory");

    CLI11_PARSE(app, argc, argv);

    if (train_cmd->parsed()) {
        const RunConfig cfg = train_flags.resolve(*train_cmd);
        if (parallel > 1) {
            const auto reports = train_sweep(cfg, train_out, parallel);
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : reports) {
                j.push_back({{"config_hash", r.config_hash},
                             {"episodes", r.returns.size()},
                             {"wall_clock_seconds", r.wall_clock_seconds}});
            }
            std::cout << j.dump() << '\n';
        } else {
            const TrainingReport report = train(cfg, train_out);
            const std::size_t n = report.returns.size();
            std::cout << nlohmann::json{{"config_hash", report.config_hash},
                                        {"episodes", n},
                                        {"final_moving_avg", report.moving_avg.back()},
                                        {"wall_clock_seconds", report.wall_clock_seconds},
                                        {"checkpoint", report.checkpoint_path}}
                             .dump()
                      << '\n';
        }
        return 0;
    }
    if (eval_cmd->parsed()) {
        RunConfig base;
        std::string checkpoint = eval_checkpoint;
        if (eval_cmd->count("--config")) {
            base = load_run_config(eval_flags.config_path);
        } else if (!eval_run_dir.empty()) {
            base = load_run_config((std::filesystem::path(eval_run_dir) / kConfigFile).string());
        }
        if (!eval_run_dir.empty()) {
            if (checkpoint.empty()) {
                checkpoint = (std::filesystem::path(eval_run_dir) / kCheckpointFile).string();
            }
            if (eval_out.empty()) eval_out = eval_run_dir;
        }
        if (checkpoint.empty()) {
            throw MissingArtifacts("eval needs --run-dir or --checkpoint");
        }
        const RunConfig cfg = eval_flags.apply(*eval_cmd, std::move(base));
        const EvalReport report = evaluate(checkpoint, cfg, cfg.eval_episodes, eval_out);
        std::cout << report.to_json_string() << '\n';
        return 0;
    }
    if (audit_cmd->parsed()) {
        const AuditSummary summary =
            audit(audit_log, audit_mode_from_string(audit_mode), audit_out);
        std::cout << summary.to_json_string() << '\n';
        return 0;
    }
    if (baseline_cmd->parsed()) {
        const RunConfig cfg = baseline_flags.resolve(*baseline_cmd);
        const EvalReport report =
            baseline_random(cfg, cfg.eval_episodes, baseline_out, baseline_log);
        std::cout << report.to_json_string() << '\n';
        return 0;
    }
    if (export_cmd->parsed()) {
        const auto written =
            export_run(export_run_dir, export_format_from_string(export_format), export_out);
        std::cout << nlohmann::json{{"written", written}}.dump() << '\n';
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", type_name(e)}, {"message", e.what()}}.dump()
                  << std::endl;
        return 1;
    }
}
