// Command-line front end: record or replay benchmark suites, aggregate
// records into CSV tables, and inspect generated scenarios.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrtp/env.hpp"
#include "mrtp/harness.hpp"
#include "mrtp/util.hpp"

namespace {

struct SuiteOpts {
    std::uint64_t seed = 1;
    std::vector<std::string> envs = {"boxnet1", "boxnet2", "warehouse", "boxlift"};
    std::vector<std::string> frameworks = {"cmas", "dmas", "hmas1", "hmas2"};
    std::vector<int> robots;  // empty = per-environment default schedule
    int trials = 10;
    std::string model = "gpt-4-0613";
    std::string history = "state_action";
    std::string out = "out";
    int threads = 1;
    double noise = 0.0;
};

void add_suite_options(CLI::App* cmd, SuiteOpts& o) {
    cmd->add_option("--seed", o.seed, "Suite seed; scenarios derive from it");
    cmd->add_option("--envs", o.envs, "Environments (boxnet1,boxnet2,warehouse,boxlift)")
        ->delimiter(',');
    cmd->add_option("--frameworks", o.frameworks, "Frameworks (cmas,dmas,hmas1,hmas2)")
        ->delimiter(',');
    cmd->add_option("--robots", o.robots, "Team sizes; default is the per-environment schedule")
        ->delimiter(',');
    cmd->add_option("--trials", o.trials, "Trials per (env, framework, team size) cell");
    cmd->add_option("--model", o.model, "Model profile (gpt-4-0613 or gpt-3.5-turbo-0613)");
    cmd->add_option("--history", o.history, "Step history mode: none, state_action, full");
    cmd->add_option("--out", o.out, "Output directory (records.jsonl, cassettes/)");
    cmd->add_option("--threads", o.threads, "Worker threads");
    cmd->add_option("--noise", o.noise, "Per-robot action failure probability");
}

mrtp::SuiteConfig to_suite_config(const SuiteOpts& o) {
    mrtp::SuiteConfig c;
    c.suite_seed = o.seed;
    for (const std::string& e : o.envs) c.envs.push_back(mrtp::env_kind_from_name(e));
    for (const std::string& f : o.frameworks) {
        c.frameworks.push_back(mrtp::framework_from_name(f));
    }
    c.robot_counts = o.robots;
    c.trials_per_cell = o.trials;
    c.model = o.model;
    c.history_mode = mrtp::history_mode_from_name(o.history);
    c.noise_probability = o.noise;
    c.output_dir = o.out;
    c.threads = o.threads;
    return c;
}

std::shared_ptr<mrtp::Backend> make_backend(const std::string& name) {
    if (name == "oracle") return std::make_shared<mrtp::OracleBackend>();
    if (name == "remote") return std::make_shared<mrtp::RemoteBackend>(mrtp::RemoteConfig{});
    throw CLI::ValidationError("--backend", "must be 'oracle' or 'remote'");
}

int report_suite(const mrtp::SuiteResult& result) {
    int successes = 0;
    for (const mrtp::TrialRecord& r : result.records) {
        std::printf("%-32s %-8s %-24s steps=%-3d calls=%-4d tokens=%d\n", r.trial_id.c_str(),
                    mrtp::trial_outcome_name(r.outcome).c_str(),
                    mrtp::fail_cause_name(r.fail_cause).c_str(), r.steps_taken, r.api_calls,
                    r.usage.prompt_tokens + r.usage.completion_tokens);
        if (r.outcome == mrtp::TrialOutcome::Success) ++successes;
    }
    std::printf("%d/%zu trials succeeded, %d infra error(s)\n", successes,
                result.records.size(), result.infra_errors);
    return result.infra_errors > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for LLM dialogue frameworks on multi-robot task planning"};
    app.require_subcommand(1);

    SuiteOpts run_opts;
    std::string backend_name = "oracle";
    CLI::App* run_cmd = app.add_subcommand("run", "Run a suite and record cassettes");
    add_suite_options(run_cmd, run_opts);
    run_cmd->add_option("--backend", backend_name,
                        "Response source: 'oracle' (built-in exact planner) or 'remote' "
                        "(OpenAI-compatible API; reads MRTP_API_KEY or OPENAI_API_KEY)");

    SuiteOpts replay_opts;
    CLI::App* replay_cmd =
        app.add_subcommand("replay", "Re-run a suite from recorded cassettes");
    add_suite_options(replay_cmd, replay_opts);

    std::string agg_records = "out/records.jsonl";
    std::string agg_out = "out";
    CLI::App* agg_cmd = app.add_subcommand("aggregate", "Summarize records into CSV tables");
    agg_cmd->add_option("--records", agg_records, "records.jsonl to read");
    agg_cmd->add_option("--out", agg_out, "Directory for summary.csv and success_by_robots.csv");

    std::uint64_t gen_seed = 1;
    std::string gen_env = "boxnet1";
    std::vector<int> gen_robots;
    int gen_trials = 10;
    CLI::App* gen_cmd =
        app.add_subcommand("gen-scenarios", "Print the scenarios a suite would use");
    gen_cmd->add_option("--seed", gen_seed, "Suite seed");
    gen_cmd->add_option("--env", gen_env, "Environment");
    gen_cmd->add_option("--robots", gen_robots, "Team sizes")->delimiter(',');
    gen_cmd->add_option("--trials", gen_trials, "Trials per team size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const mrtp::SuiteResult result =
                mrtp::run_suite(to_suite_config(run_opts), mrtp::SuiteMode::Record,
                                make_backend(backend_name));
            return report_suite(result);
        }
        if (replay_cmd->parsed()) {
            const mrtp::SuiteResult result =
                mrtp::run_suite(to_suite_config(replay_opts), mrtp::SuiteMode::Replay, nullptr);
            return report_suite(result);
        }
        if (agg_cmd->parsed()) {
            const std::vector<mrtp::TrialRecord> records = mrtp::load_records(agg_records);
            const std::vector<mrtp::AggregateRow> rows = mrtp::aggregate(records);
            const std::string summary = mrtp::summary_csv(rows);
            std::filesystem::create_directories(agg_out);
            mrtp::write_file((std::filesystem::path(agg_out) / "summary.csv").string(), summary);
            mrtp::write_file(
                (std::filesystem::path(agg_out) / "success_by_robots.csv").string(),
                mrtp::success_by_robots_csv(rows));
            std::fputs(summary.c_str(), stdout);
            return 0;
        }
        if (gen_cmd->parsed()) {
            const mrtp::EnvKind env = mrtp::env_kind_from_name(gen_env);
            const std::vector<int> counts =
                gen_robots.empty() ? mrtp::default_robot_schedule(env) : gen_robots;
            for (const int rc : counts) {
                for (int t = 0; t < gen_trials; ++t) {
                    mrtp::ScenarioSpec spec;
                    spec.env = env;
                    spec.robot_count = rc;
                    spec.seed = mrtp::derive_scenario_seed(gen_seed, env, rc, t);
                    mrtp::json j;
                    j["scenario"] = mrtp::scenario_to_json(spec);
                    j["state"] = mrtp::state_to_json(mrtp::generate_scenario(spec));
                    std::printf("%s\n", j.dump().c_str());
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
