#include "mrtp/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mrtp/util.hpp"

namespace mrtp {

namespace {

json action_to_json(const Action& action) {
    json j;
    j["kind"] = action.kind;
    j["params"] = action.params;
    return j;
}

Action action_from_json(const json& j) {
    Action a;
    a.kind = j.at("kind").get<std::string>();
    a.params = j.at("params").get<std::vector<std::string>>();
    return a;
}

json assignment_to_json(const ActionAssignment& assignment) {
    json arr = json::array();
    for (const auto& [robot, action] : assignment.entries()) {
        json e;
        e["robot"] = robot;
        e["action"] = action_to_json(action);
        arr.push_back(std::move(e));
    }
    return arr;
}

ActionAssignment assignment_from_json(const json& arr) {
    ActionAssignment a;
    for (const auto& e : arr) {
        a.set(e.at("robot").get<int>(), action_from_json(e.at("action")));
    }
    return a;
}

json usage_to_json(const Usage& usage) {
    json j;
    j["completion_tokens"] = usage.completion_tokens;
    j["prompt_tokens"] = usage.prompt_tokens;
    return j;
}

Usage usage_from_json(const json& j) {
    Usage u;
    u.prompt_tokens = j.at("prompt_tokens").get<int>();
    u.completion_tokens = j.at("completion_tokens").get<int>();
    return u;
}

TurnPurpose turn_purpose_from_name(const std::string& name) {
    for (TurnPurpose p : {TurnPurpose::Comment, TurnPurpose::InitialPlan,
                          TurnPurpose::PlanProposal, TurnPurpose::Feedback,
                          TurnPurpose::Execute}) {
        if (turn_purpose_name(p) == name) return p;
    }
    throw std::invalid_argument("unknown turn purpose: " + name);
}

json transcript_to_json(const DialogueTranscript& transcript) {
    json arr = json::array();
    for (const Turn& t : transcript.turns) {
        json j;
        j["prompt"] = t.prompt;
        j["purpose"] = turn_purpose_name(t.purpose);
        j["response"] = t.response;
        j["speaker"] = t.speaker;
        j["usage"] = usage_to_json(t.usage);
        arr.push_back(std::move(j));
    }
    return arr;
}

DialogueTranscript transcript_from_json(const json& arr) {
    DialogueTranscript t;
    for (const auto& j : arr) {
        Turn turn;
        turn.speaker = j.at("speaker").get<std::string>();
        turn.purpose = turn_purpose_from_name(j.at("purpose").get<std::string>());
        turn.prompt = j.at("prompt").get<std::string>();
        turn.response = j.at("response").get<std::string>();
        turn.usage = usage_from_json(j.at("usage"));
        t.turns.push_back(std::move(turn));
    }
    return t;
}

json step_record_to_json(const StepRecord& step) {
    json j;
    j["api_calls"] = step.api_calls;
    j["assignment"] = assignment_to_json(step.assignment);
    j["planned"] = step.planned;
    j["state_digest"] = step.state_digest;
    j["step"] = step.step;
    j["step_result"] = step.step_result;
    j["syntax_retries"] = step.syntax_retries;
    j["transcript"] = transcript_to_json(step.transcript);
    j["usage"] = usage_to_json(step.usage);
    return j;
}

StepRecord step_record_from_json(const json& j) {
    StepRecord s;
    s.step = j.at("step").get<int>();
    s.state_digest = j.at("state_digest").get<std::string>();
    s.planned = j.at("planned").get<bool>();
    s.assignment = assignment_from_json(j.at("assignment"));
    s.step_result = j.at("step_result").get<std::string>();
    s.api_calls = j.at("api_calls").get<int>();
    s.usage = usage_from_json(j.at("usage"));
    s.syntax_retries = j.at("syntax_retries").get<int>();
    s.transcript = transcript_from_json(j.at("transcript"));
    return s;
}

// One-line summary of what every robot actually did this step.
std::string executed_summary(const std::vector<ExecutedAction>& executed) {
    std::vector<std::string> parts;
    parts.reserve(executed.size());
    for (const ExecutedAction& e : executed) {
        std::string part = robot_name(e.robot) + " " + e.action.render();
        if (!e.ok) part += " (failed)";
        parts.push_back(std::move(part));
    }
    return join(parts, " | ");
}

// Post-step feedback the environment reports back to the agents. Only
// BoxLift produces any: per-box lift results, never weights.
std::string environment_feedback(const EnvState& next) {
    if (const auto* s = std::get_if<BoxLiftState>(&next)) {
        if (!s->last_feedback.empty()) {
            std::vector<std::string> parts;
            for (const LiftAttempt& a : s->last_feedback) {
                parts.push_back(a.box + (a.lifted ? " was lifted" : " was not lifted"));
            }
            return join(parts, "; ");
        }
    }
    return "";
}

std::string csv_num(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config and record serialization.

json trial_config_to_json(const TrialConfig& config) {
    json j;
    j["budget"]["cap_includes_dialogue_context"] = config.budget.cap_includes_dialogue_context;
    j["budget"]["max_prompt_tokens"] = config.budget.max_prompt_tokens;
    j["framework"] = framework_name(config.framework);
    j["history_mode"] = history_mode_name(config.history_mode);
    j["limits"]["max_dialogue_rounds"] = config.limits.max_dialogue_rounds;
    j["limits"]["max_replan_iterations"] = config.limits.max_replan_iterations;
    j["limits"]["max_syntax_retries"] = config.limits.max_syntax_retries;
    j["max_planning_iterations"] = config.max_planning_iterations;
    j["model"] = config.model;
    j["noise_probability"] = config.noise_probability;
    j["noise_seed"] = config.noise_seed;
    j["scenario"] = scenario_to_json(config.scenario);
    j["trial_id"] = config.trial_id;
    return j;
}

TrialConfig trial_config_from_json(const json& j) {
    TrialConfig c;
    c.trial_id = j.at("trial_id").get<std::string>();
    c.scenario = scenario_from_json(j.at("scenario"));
    c.framework = framework_from_name(j.at("framework").get<std::string>());
    c.history_mode = history_mode_from_name(j.at("history_mode").get<std::string>());
    c.model = j.at("model").get<std::string>();
    c.budget.max_prompt_tokens = j.at("budget").at("max_prompt_tokens").get<int>();
    c.budget.cap_includes_dialogue_context =
        j.at("budget").at("cap_includes_dialogue_context").get<bool>();
    c.limits.max_dialogue_rounds = j.at("limits").at("max_dialogue_rounds").get<int>();
    c.limits.max_replan_iterations = j.at("limits").at("max_replan_iterations").get<int>();
    c.limits.max_syntax_retries = j.at("limits").at("max_syntax_retries").get<int>();
    c.max_planning_iterations = j.at("max_planning_iterations").get<int>();
    c.noise_probability = j.at("noise_probability").get<double>();
    c.noise_seed = j.at("noise_seed").get<std::uint64_t>();
    return c;
}

std::string trial_config_digest(const TrialConfig& config) {
    return hex64(fnv1a(trial_config_to_json(config).dump()));
}

std::string trial_outcome_name(TrialOutcome outcome) {
    return outcome == TrialOutcome::Success ? "success" : "failure";
}

json trial_record_to_json(const TrialRecord& record) {
    json j;
    j["api_calls"] = record.api_calls;
    j["config"] = trial_config_to_json(record.config);
    j["config_digest"] = record.config_digest;
    j["fail_cause"] = fail_cause_name(record.fail_cause);
    j["fail_detail"] = record.fail_detail;
    j["final_state_digest"] = record.final_state_digest;
    j["outcome"] = trial_outcome_name(record.outcome);
    j["planning_iterations"] = record.planning_iterations;
    json steps = json::array();
    for (const StepRecord& s : record.steps) steps.push_back(step_record_to_json(s));
    j["steps"] = std::move(steps);
    j["steps_taken"] = record.steps_taken;
    j["trial_id"] = record.trial_id;
    j["usage"] = usage_to_json(record.usage);
    return j;
}

TrialRecord trial_record_from_json(const json& j) {
    TrialRecord r;
    r.trial_id = j.at("trial_id").get<std::string>();
    r.config = trial_config_from_json(j.at("config"));
    r.config_digest = j.at("config_digest").get<std::string>();
    r.outcome = j.at("outcome").get<std::string>() == "success" ? TrialOutcome::Success
                                                                : TrialOutcome::Failure;
    r.fail_cause = fail_cause_from_name(j.at("fail_cause").get<std::string>());
    r.fail_detail = j.at("fail_detail").get<std::string>();
    r.steps_taken = j.at("steps_taken").get<int>();
    r.planning_iterations = j.at("planning_iterations").get<int>();
    r.api_calls = j.at("api_calls").get<int>();
    r.usage = usage_from_json(j.at("usage"));
    for (const auto& s : j.at("steps")) r.steps.push_back(step_record_from_json(s));
    r.final_state_digest = j.at("final_state_digest").get<std::string>();
    return r;
}

// ---------------------------------------------------------------------------
// Trial runner.

TrialRecord run_trial(const TrialConfig& config, std::shared_ptr<Backend> backend,
                      CassetteWriter* cassette) {
    TrialRecord rec;
    rec.trial_id = config.trial_id;
    rec.config = config;
    rec.config_digest = trial_config_digest(config);

    EnvState state;
    ModelProfile profile;
    try {
        state = generate_scenario(config.scenario);
        profile = model_profile(config.model);
    } catch (const std::exception& e) {
        rec.fail_cause = FailCause::InfraError;
        rec.fail_detail = std::string("trial setup failed: ") + e.what();
        return rec;
    }

    const TokenCounter counter;
    Gateway gateway(config.trial_id, std::move(backend), profile, counter);
    if (cassette != nullptr) gateway.attach_cassette(cassette);
    const PromptBuilder builder(PromptTemplates::defaults(), counter, config.budget);
    const ProtocolEngine engine(config.framework, builder, config.limits);
    const ExecutionNoise noise{config.noise_probability, config.noise_seed};

    StepHistory history;
    for (int iter = 0;; ++iter) {
        if (is_goal(state)) {
            rec.outcome = TrialOutcome::Success;
            rec.fail_cause = FailCause::None;
            break;
        }
        if (iter >= config.max_planning_iterations) {
            rec.fail_cause = FailCause::IterationLimit;
            rec.fail_detail = "goal not reached within " +
                              std::to_string(config.max_planning_iterations) +
                              " planning iterations";
            break;
        }

        const int calls_before = gateway.calls();
        const Usage usage_before = gateway.total_usage();
        PlanStepResult plan;
        try {
            plan = engine.plan_step(state, history, config.history_mode, gateway);
        } catch (const std::exception& e) {
            rec.fail_cause = FailCause::InfraError;
            rec.fail_detail = std::string("planning raised: ") + e.what();
            break;
        }
        ++rec.planning_iterations;

        StepRecord sr;
        sr.step = iter;
        sr.state_digest = state_digest(state);
        sr.api_calls = gateway.calls() - calls_before;
        sr.usage.prompt_tokens = gateway.total_usage().prompt_tokens - usage_before.prompt_tokens;
        sr.usage.completion_tokens =
            gateway.total_usage().completion_tokens - usage_before.completion_tokens;
        sr.syntax_retries = plan.syntax_retries_used;
        sr.transcript = plan.transcript;

        if (!plan.ok) {
            rec.steps.push_back(std::move(sr));
            rec.fail_cause = plan.cause;
            rec.fail_detail = plan.detail;
            break;
        }
        sr.planned = true;
        sr.assignment = plan.assignment;

        const StepOutcome out = apply_joint_action(state, plan.assignment, noise);
        sr.step_result = step_result_name(out.result);
        rec.steps.push_back(std::move(sr));

        if (out.result == StepResult::Collision) {
            rec.fail_cause = FailCause::Collision;
            rec.fail_detail = out.detail;
            break;
        }
        if (out.result == StepResult::Invalid) {
            // The verifier admitted the plan, so the environment must too.
            rec.fail_cause = FailCause::InfraError;
            rec.fail_detail = "verified plan rejected by the environment: " + out.detail;
            break;
        }

        HistoryEntry entry;
        entry.step = iter;
        entry.state_summary = state_facts(state).render_compact();
        entry.actions_summary = executed_summary(out.executed);
        for (const Turn& t : plan.transcript.turns) {
            entry.dialogue.push_back({t.speaker, t.response});
        }
        entry.feedback = environment_feedback(out.next);
        history.push_back(std::move(entry));

        state = out.next;
        ++rec.steps_taken;
    }

    rec.final_state_digest = state_digest(state);
    rec.api_calls = gateway.calls();
    rec.usage = gateway.total_usage();
    return rec;
}

// ---------------------------------------------------------------------------
// Suite plumbing.

std::uint64_t derive_scenario_seed(std::uint64_t suite_seed, EnvKind env, int robot_count,
                                   int trial_index) {
    const std::string key = "scenario|" + hex64(suite_seed) + "|" + env_kind_name(env) + "|r" +
                            std::to_string(robot_count) + "|t" + std::to_string(trial_index);
    return fnv1a(key);
}

int planning_iteration_budget(const EnvState& initial, const SearchLimits& limits) {
    if (robot_count(initial) <= 4) {
        try {
            return std::max(10, 3 * optimal_steps(initial, limits));
        } catch (const std::exception&) {
            // Fall through to the flat budget when exact search is off the table.
        }
    }
    return 25;
}

std::string make_trial_id(EnvKind env, FrameworkKind framework, int robot_count,
                          int trial_index) {
    return env_kind_name(env) + "-" + framework_name(framework) + "-r" +
           std::to_string(robot_count) + "-t" + std::to_string(trial_index);
}

std::vector<TrialConfig> expand_suite(const SuiteConfig& config) {
    std::vector<TrialConfig> out;
    for (const EnvKind env : config.envs) {
        const std::vector<int> counts =
            config.robot_counts.empty() ? default_robot_schedule(env) : config.robot_counts;
        for (const int rc : counts) {
            for (const FrameworkKind fw : config.frameworks) {
                for (int t = 0; t < config.trials_per_cell; ++t) {
                    TrialConfig c;
                    c.trial_id = make_trial_id(env, fw, rc, t);
                    c.scenario.env = env;
                    c.scenario.robot_count = rc;
                    c.scenario.seed = derive_scenario_seed(config.suite_seed, env, rc, t);
                    c.framework = fw;
                    c.history_mode = config.history_mode;
                    c.model = config.model;
                    c.budget = config.budget;
                    c.limits = config.limits;
                    c.noise_probability = config.noise_probability;
                    c.noise_seed = fnv1a("noise|" + hex64(config.suite_seed) + "|" + c.trial_id);
                    c.max_planning_iterations =
                        planning_iteration_budget(generate_scenario(c.scenario));
                    out.push_back(std::move(c));
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const TrialConfig& a, const TrialConfig& b) { return a.trial_id < b.trial_id; });
    return out;
}

std::vector<TrialRecord> load_records(const std::string& path) {
    std::vector<TrialRecord> out;
    if (!std::filesystem::exists(path)) return out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        out.push_back(trial_record_from_json(json::parse(t)));
    }
    return out;
}

void save_records(const std::string& path, const std::vector<TrialRecord>& records) {
    std::string body;
    for (const TrialRecord& r : records) {
        body += trial_record_to_json(r).dump();
        body += '\n';
    }
    write_file(path, body);
}

SuiteResult run_suite(const SuiteConfig& config, SuiteMode mode,
                      std::shared_ptr<Backend> backend) {
    namespace fs = std::filesystem;
    const fs::path out_dir(config.output_dir);
    const fs::path records_path = out_dir / "records.jsonl";
    const fs::path cassette_dir = out_dir / "cassettes";
    fs::create_directories(cassette_dir);

    const std::vector<TrialConfig> todo = expand_suite(config);

    std::map<std::string, TrialRecord> existing;
    if (fs::exists(records_path)) {
        for (TrialRecord& r : load_records(records_path.string())) {
            existing.emplace(r.trial_id, std::move(r));
        }
    }

    std::map<std::string, TrialRecord> finished;
    std::vector<TrialConfig> pending;
    for (const TrialConfig& c : todo) {
        const auto it = existing.find(c.trial_id);
        if (it != existing.end() && it->second.config_digest == trial_config_digest(c)) {
            finished.emplace(c.trial_id, it->second);
        } else {
            pending.push_back(c);
        }
    }

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            const TrialConfig& c = pending[i];
            const std::string cassette_path = (cassette_dir / (c.trial_id + ".jsonl")).string();
            TrialRecord r;
            if (mode == SuiteMode::Record) {
                CassetteWriter writer(cassette_path);
                r = run_trial(c, backend, &writer);
            } else {
                try {
                    r = run_trial(c, std::make_shared<CassetteReplayBackend>(cassette_path));
                } catch (const std::exception& e) {
                    r.trial_id = c.trial_id;
                    r.config = c;
                    r.config_digest = trial_config_digest(c);
                    r.fail_cause = FailCause::InfraError;
                    r.fail_detail = std::string("replay unavailable: ") + e.what();
                }
            }
            const std::lock_guard<std::mutex> lock(mu);
            finished.emplace(r.trial_id, std::move(r));
        }
    };

    const int thread_count = std::clamp<int>(
        config.threads, 1, static_cast<int>(std::max<std::size_t>(1, pending.size())));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    SuiteResult result;
    for (auto& [id, record] : finished) {
        if (record.fail_cause == FailCause::InfraError) ++result.infra_errors;
        result.records.push_back(std::move(record));
    }
    save_records(records_path.string(), result.records);
    return result;
}

// ---------------------------------------------------------------------------
// Aggregation.

std::vector<double> normalize(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("normalize: no values");
    const double mn = *std::min_element(values.begin(), values.end());
    if (!(mn > 0.0)) throw std::invalid_argument("normalize: minimum must be positive");
    std::vector<double> out;
    out.reserve(values.size());
    for (const double v : values) out.push_back(v / mn);
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    struct Accum {
        AggregateRow row;
        double steps = 0, calls = 0, tokens = 0;
    };
    std::map<std::tuple<int, int, int>, Accum> cells;  // (env, robots, framework)

    for (const TrialRecord& r : records) {
        const EnvKind env = r.config.scenario.env;
        const int robots = r.config.scenario.robot_count;
        const FrameworkKind fw = r.config.framework;
        Accum& acc = cells[{static_cast<int>(env), robots, static_cast<int>(fw)}];
        acc.row.env = env;
        acc.row.robots = robots;
        acc.row.framework = fw;
        if (r.fail_cause == FailCause::InfraError) {
            ++acc.row.infra_errors;
            continue;
        }
        ++acc.row.trials;
        if (r.outcome == TrialOutcome::Success) {
            ++acc.row.successes;
            acc.steps += r.steps_taken;
            acc.calls += r.api_calls;
            acc.tokens += r.usage.prompt_tokens + r.usage.completion_tokens;
        } else {
            ++acc.row.failure_counts[fail_cause_name(r.fail_cause)];
        }
    }

    std::vector<AggregateRow> rows;
    rows.reserve(cells.size());
    for (auto& [key, acc] : cells) {
        AggregateRow& row = acc.row;
        row.success_rate = row.trials > 0 ? static_cast<double>(row.successes) / row.trials : nan;
        if (row.successes > 0) {
            row.mean_steps = acc.steps / row.successes;
            row.mean_api_calls = acc.calls / row.successes;
            row.mean_tokens = acc.tokens / row.successes;
        } else {
            row.mean_steps = row.mean_api_calls = row.mean_tokens = nan;
        }
        row.norm_steps = row.norm_api_calls = row.norm_tokens = nan;
        rows.push_back(row);
    }

    // Normalize against the best framework within each (env, robots) cell.
    std::map<std::pair<int, int>, std::array<double, 3>> best;
    for (const AggregateRow& row : rows) {
        if (row.successes == 0) continue;
        const std::pair<int, int> key{static_cast<int>(row.env), row.robots};
        auto [it, inserted] = best.emplace(
            key, std::array<double, 3>{row.mean_steps, row.mean_api_calls, row.mean_tokens});
        if (!inserted) {
            it->second[0] = std::min(it->second[0], row.mean_steps);
            it->second[1] = std::min(it->second[1], row.mean_api_calls);
            it->second[2] = std::min(it->second[2], row.mean_tokens);
        }
    }
    for (AggregateRow& row : rows) {
        if (row.successes == 0) continue;
        const auto it = best.find({static_cast<int>(row.env), row.robots});
        if (it == best.end()) continue;
        if (it->second[0] > 0) row.norm_steps = row.mean_steps / it->second[0];
        if (it->second[1] > 0) row.norm_api_calls = row.mean_api_calls / it->second[1];
        if (it->second[2] > 0) row.norm_tokens = row.mean_tokens / it->second[2];
    }
    return rows;
}

std::string summary_csv(const std::vector<AggregateRow>& rows) {
    static const std::vector<FailCause> kCauses = {
        FailCause::ContextOverflow, FailCause::ConsensusTimeout,
        FailCause::SyntaxRetriesExhausted, FailCause::IterationLimit, FailCause::Collision};
    std::string out =
        "env,framework,robots,trials,infra_errors,successes,success_rate,"
        "mean_steps,mean_api_calls,mean_tokens,norm_steps,norm_api_calls,norm_tokens";
    for (const FailCause c : kCauses) out += ",fail_" + fail_cause_name(c);
    out += "\n";
    for (const AggregateRow& row : rows) {
        out += env_kind_name(row.env) + "," + framework_name(row.framework) + "," +
               std::to_string(row.robots) + "," + std::to_string(row.trials) + "," +
               std::to_string(row.infra_errors) + "," + std::to_string(row.successes) + "," +
               csv_num(row.success_rate) + "," + csv_num(row.mean_steps) + "," +
               csv_num(row.mean_api_calls) + "," + csv_num(row.mean_tokens) + "," +
               csv_num(row.norm_steps) + "," + csv_num(row.norm_api_calls) + "," +
               csv_num(row.norm_tokens);
        for (const FailCause c : kCauses) {
            const auto it = row.failure_counts.find(fail_cause_name(c));
            out += "," + std::to_string(it == row.failure_counts.end() ? 0 : it->second);
        }
        out += "\n";
    }
    return out;
}

std::string success_by_robots_csv(const std::vector<AggregateRow>& rows) {
    std::string out = "env,framework,robots,success_rate\n";
    for (const AggregateRow& row : rows) {
        out += env_kind_name(row.env) + "," + framework_name(row.framework) + "," +
               std::to_string(row.robots) + "," + csv_num(row.success_rate) + "\n";
    }
    return out;
}

}  // namespace mrtp
