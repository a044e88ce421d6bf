#pragma once

// Trial and suite runners. A trial is one full episode: plan with a
// dialogue framework, verify, execute, repeat until the goal is reached
// or a failure cause fires. A suite is a (environment x framework x team
// size x trial index) matrix of trials sharing one seed, with every
// framework facing identical initial states.
//
// Records are canonical: key-sorted JSON with no wall-clock fields, so a
// recorded run and its cassette replay serialize byte-identically.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrtp/gateway.hpp"
#include "mrtp/planner.hpp"
#include "mrtp/protocol.hpp"
#include "mrtp/prompt.hpp"
#include "mrtp/scenario.hpp"

namespace mrtp {

// ---------------------------------------------------------------------------
// Trial configuration and record.

struct TrialConfig {
    std::string trial_id;
    ScenarioSpec scenario;
    FrameworkKind framework = FrameworkKind::CMAS;
    StepHistoryMode history_mode = StepHistoryMode::StateActionOnly;
    std::string model = "gpt-4-0613";
    PromptBudget budget;
    ProtocolLimits limits;
    int max_planning_iterations = 25;
    double noise_probability = 0.0;
    std::uint64_t noise_seed = 0;

    bool operator==(const TrialConfig&) const = default;
};

json trial_config_to_json(const TrialConfig& config);
TrialConfig trial_config_from_json(const json& j);
std::string trial_config_digest(const TrialConfig& config);

enum class TrialOutcome { Success, Failure };
std::string trial_outcome_name(TrialOutcome outcome);

// One planning iteration: the dialogue that produced (or failed to
// produce) a joint action, and what the environment did with it.
struct StepRecord {
    int step = 0;                 // environment step index at planning time
    std::string state_digest;     // digest of the pre-step state
    bool planned = false;         // the framework produced a verified plan
    ActionAssignment assignment;  // meaningful when planned
    std::string step_result;      // "advanced"/"collision"/"invalid", "" if unplanned
    int api_calls = 0;            // backend calls consumed by this iteration
    Usage usage;                  // tokens consumed by this iteration
    int syntax_retries = 0;
    DialogueTranscript transcript;
};

struct TrialRecord {
    std::string trial_id;
    TrialConfig config;
    std::string config_digest;
    TrialOutcome outcome = TrialOutcome::Failure;
    FailCause fail_cause = FailCause::None;
    std::string fail_detail;
    int steps_taken = 0;           // environment steps that advanced
    int planning_iterations = 0;   // plan_step invocations
    int api_calls = 0;
    Usage usage;
    std::vector<StepRecord> steps;
    std::string final_state_digest;
};

json trial_record_to_json(const TrialRecord& record);
TrialRecord trial_record_from_json(const json& j);

// ---------------------------------------------------------------------------
// Runners.

// Runs one episode against the given backend. The cassette, when present,
// captures every backend exchange for later replay.
TrialRecord run_trial(const TrialConfig& config, std::shared_ptr<Backend> backend,
                      CassetteWriter* cassette = nullptr);

// Scenario seeds depend on the suite seed, environment, team size and
// trial index -- and deliberately not on the framework, so frameworks are
// compared on identical initial states.
std::uint64_t derive_scenario_seed(std::uint64_t suite_seed, EnvKind env, int robot_count,
                                   int trial_index);

// Step budget for an episode: three times the optimal step count for
// teams small enough to solve exactly (at least 10), a flat 25 otherwise.
int planning_iteration_budget(const EnvState& initial, const SearchLimits& limits = {});

std::string make_trial_id(EnvKind env, FrameworkKind framework, int robot_count,
                          int trial_index);

// ---------------------------------------------------------------------------
// Suites.

struct SuiteConfig {
    std::uint64_t suite_seed = 1;
    std::vector<EnvKind> envs;
    std::vector<FrameworkKind> frameworks;
    // Team sizes per environment; empty means default_robot_schedule(env).
    std::vector<int> robot_counts;
    int trials_per_cell = 10;
    std::string model = "gpt-4-0613";
    StepHistoryMode history_mode = StepHistoryMode::StateActionOnly;
    PromptBudget budget;
    ProtocolLimits limits;
    double noise_probability = 0.0;
    std::string output_dir = "out";
    int threads = 1;
};

enum class SuiteMode {
    Record,  // live backend; writes cassettes/<trial_id>.jsonl
    Replay,  // serves each trial from its recorded cassette
};

struct SuiteResult {
    std::vector<TrialRecord> records;  // sorted by trial_id
    int infra_errors = 0;              // trials excluded from aggregates
};

// Expands the matrix into per-trial configs (sorted by trial_id).
std::vector<TrialConfig> expand_suite(const SuiteConfig& config);

// Runs every trial not already present in <output_dir>/records.jsonl with
// a matching config digest (so an interrupted suite resumes), then
// rewrites records.jsonl sorted by trial_id. `backend` drives Record
// mode and is ignored in Replay mode.
SuiteResult run_suite(const SuiteConfig& config, SuiteMode mode,
                      std::shared_ptr<Backend> backend);

// ---------------------------------------------------------------------------
// Aggregation.

// Normalized metric: each value divided by the smallest. Throws
// std::invalid_argument when values is empty or min(values) <= 0.
std::vector<double> normalize(const std::vector<double>& values);

struct AggregateRow {
    EnvKind env = EnvKind::BoxNet1;
    FrameworkKind framework = FrameworkKind::CMAS;
    int robots = 0;
    int trials = 0;        // infra-error trials excluded
    int infra_errors = 0;  // excluded count, reported separately
    int successes = 0;
    std::map<std::string, int> failure_counts;  // by fail cause name
    double success_rate = 0.0;
    // Means over successful trials; NaN when there were no successes.
    double mean_steps = 0.0;
    double mean_api_calls = 0.0;
    double mean_tokens = 0.0;  // prompt + completion
    // Means divided by the best framework's mean within the same
    // (environment, team size) cell; NaN when undefined.
    double norm_steps = 0.0;
    double norm_api_calls = 0.0;
    double norm_tokens = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);

std::string summary_csv(const std::vector<AggregateRow>& rows);
std::string success_by_robots_csv(const std::vector<AggregateRow>& rows);

// Reads/writes records.jsonl (one canonical record per line).
std::vector<TrialRecord> load_records(const std::string& path);
void save_records(const std::string& path, const std::vector<TrialRecord>& records);

}  // namespace mrtp
