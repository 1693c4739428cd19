#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netaudit/dqn_agent.hpp"
#include "netaudit/env.hpp"
#include "netaudit/episode_log.hpp"
#include "netaudit/network.hpp"
#include "netaudit/report.hpp"

namespace netaudit {

// Everything one experiment needs; resolved copies are persisted next to
// run outputs and content-hashed for provenance.
struct RunConfig {
    NetworkConfig network = default_network_config();
    EnvOptions env;
    AgentHyperparams agent;
    int episodes = 3000;
    int eval_episodes = 1000;
    std::uint64_t seed = 1;
    int moving_average_window = 50;

    // The canonical desk-scale setup: 3 agents controlling {2,4,2} of the
    // 8 service elements, unit impacts, resources {0.5, 0.3, 0.2} of pool 1.
    static NetworkConfig default_network_config();
};

std::string to_json_string(const RunConfig& config);
RunConfig run_config_from_json_string(const std::string& text);
RunConfig load_run_config(const std::string& path);

// FNV-1a over the canonical JSON encoding.
std::string config_hash(const RunConfig& config);

// Run directory artifact names.
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kTrainCsvFile = "train.csv";
inline constexpr const char* kTrainReportFile = "train.json";
inline constexpr const char* kCheckpointFile = "checkpoint.json";
inline constexpr const char* kEpisodeLogFile = "episodes.jsonl";
inline constexpr const char* kEvalReportFile = "eval.json";
inline constexpr const char* kAuditLogFile = "audit.jsonl";
inline constexpr const char* kAuditSummaryFile = "audit_summary.json";

struct TrainingReport {
    std::vector<int> returns;         // one entry per episode
    std::vector<double> moving_avg;
    int moving_average_window = 50;
    double wall_clock_seconds = 0.0;
    std::string checkpoint_path;
    std::string config_hash;

    std::string to_json_string() const;
    static TrainingReport from_json_string(const std::string& text);
};

struct EvalReport {
    int episodes = 0;
    int first_try_correct = 0;
    double accuracy = 0.0;
    // confusion[true_agent][first_action]
    std::vector<std::vector<int>> confusion;
    std::string config_hash;

    std::string to_json_string() const;
    static EvalReport from_json_string(const std::string& text);
};

enum class AuditMode { Oracle, Equations };

std::string to_string(AuditMode mode);
AuditMode audit_mode_from_string(const std::string& s);

struct AuditSummary {
    int episodes = 0;
    AuditMode mode = AuditMode::Oracle;
    int ground_truth_matches = 0;          // named agent == logged hidden state
    std::vector<int> attributions;         // episodes attributed per agent
    std::vector<double> responsibility_totals;  // summed per-agent percentages

    std::string to_json_string() const;
};

// Runs the episode loop with epsilon-greedy learning and writes config.json,
// episodes.jsonl, train.csv, train.json and checkpoint.json into out_dir.
TrainingReport train(const RunConfig& config, const std::string& out_dir);

// N independent seeded runs (seed, seed+1, ...) in out_dir/run-<k>.
std::vector<TrainingReport> train_sweep(const RunConfig& config, const std::string& out_dir,
                                        int parallel);

// Greedy first-try identification over freshly seeded evaluation episodes.
// Writes eval.json into out_dir when non-empty.
EvalReport evaluate(const std::string& checkpoint_path, const RunConfig& config,
                    int eval_episodes, const std::string& out_dir = "");

// Uniform-random policy through the same protocol; optionally logs full
// episodes (useful as audit input).
EvalReport baseline_random(const RunConfig& config, int episodes,
                           const std::string& out_dir = "", bool write_log = false);

// Attributes every episode of a log. Both pipelines always run and must name
// the same agent (ContractViolation otherwise); `mode` selects which report
// is emitted. Writes audit.jsonl and audit_summary.json when out_dir given.
AuditSummary audit(const std::string& log_path, AuditMode mode,
                   const std::string& out_dir = "",
                   std::vector<AttributionReport>* reports = nullptr);

enum class ExportFormat { Csv, Json };

ExportFormat export_format_from_string(const std::string& s);

// Re-emits run artifacts (reward curve in the chosen format, eval and audit
// summaries) into out_dir; defaults to <run_dir>/export.
std::vector<std::string> export_run(const std::string& run_dir, ExportFormat format,
                                    std::string out_dir = "");

// Reward-curve CSV helpers (also used by the determinism checks).
void write_train_csv(const std::string& path, const TrainingReport& report);
std::vector<std::pair<int, double>> parse_train_csv(const std::string& path);

std::vector<double> moving_average(const std::vector<int>& values, int window);

}  // namespace netaudit
