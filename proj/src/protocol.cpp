#include "mrtp/protocol.hpp"

#include <stdexcept>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"

namespace mrtp {

std::string framework_name(FrameworkKind kind) {
    switch (kind) {
        case FrameworkKind::DMAS: return "dmas";
        case FrameworkKind::CMAS: return "cmas";
        case FrameworkKind::HMAS1: return "hmas1";
        case FrameworkKind::HMAS2: return "hmas2";
    }
    return "unknown";
}

FrameworkKind framework_from_name(const std::string& name) {
    if (name == "dmas") return FrameworkKind::DMAS;
    if (name == "cmas") return FrameworkKind::CMAS;
    if (name == "hmas1") return FrameworkKind::HMAS1;
    if (name == "hmas2") return FrameworkKind::HMAS2;
    throw std::invalid_argument("unknown framework: " + name);
}

std::string turn_purpose_name(TurnPurpose purpose) {
    switch (purpose) {
        case TurnPurpose::Comment: return "comment";
        case TurnPurpose::InitialPlan: return "initial_plan";
        case TurnPurpose::PlanProposal: return "plan_proposal";
        case TurnPurpose::Feedback: return "feedback";
        case TurnPurpose::Execute: return "execute";
    }
    return "unknown";
}

std::string fail_cause_name(FailCause cause) {
    switch (cause) {
        case FailCause::None: return "none";
        case FailCause::ContextOverflow: return "context_overflow";
        case FailCause::ConsensusTimeout: return "consensus_timeout";
        case FailCause::SyntaxRetriesExhausted: return "syntax_retries_exhausted";
        case FailCause::IterationLimit: return "iteration_limit";
        case FailCause::Collision: return "collision";
        case FailCause::InfraError: return "infra_error";
    }
    return "unknown";
}

FailCause fail_cause_from_name(const std::string& name) {
    for (FailCause c : {FailCause::None, FailCause::ContextOverflow, FailCause::ConsensusTimeout,
                        FailCause::SyntaxRetriesExhausted, FailCause::IterationLimit,
                        FailCause::Collision, FailCause::InfraError}) {
        if (fail_cause_name(c) == name) return c;
    }
    throw std::invalid_argument("unknown fail cause: " + name);
}

std::vector<RobotId> active_agents(const EnvState& state) {
    std::vector<RobotId> active;
    const int n = robot_count(state);
    for (RobotId r = 0; r < n; ++r) {
        if (available_actions(state, r).size() > 1) active.push_back(r);
    }
    return active;
}

// ---------------------------------------------------------------------------

namespace {

struct CallResult {
    bool ok = false;
    std::string text;
    FailCause cause = FailCause::None;
    std::string detail;
};

constexpr const char* kNoBlockFeedback = "- your reply did not contain an EXECUTE block";

}  // namespace

struct ProtocolEngine::StepScope {
    const EnvState& state;
    const StepHistory& history;
    StepHistoryMode mode;
    Gateway& gateway;
    const PromptBuilder& builder;
    FrameworkKind framework;
    PlanVerifier verifier;
    StateFacts facts;
    std::string task;
    int robots;
    DialogueTranscript transcript;
    int retries_used = 0;

    StepScope(const EnvState& st, const StepHistory& h, StepHistoryMode m, Gateway& g,
              const PromptBuilder& b, FrameworkKind fw)
        : state(st),
          history(h),
          mode(m),
          gateway(g),
          builder(b),
          framework(fw),
          verifier(st),
          facts(state_facts(st)),
          task(task_description(env_kind(st))),
          robots(robot_count(st)) {}

    CallResult call(const AgentRole& role, const DialogueContext& dctx,
                    const std::string& purpose_label, TurnPurpose turn_purpose,
                    const ActionAssignment* proposal = nullptr, std::string own_action = {}) {
        PromptInputs in;
        in.task = task;
        in.facts = facts;
        in.history = history;
        in.mode = mode;
        in.role = role;
        in.context = dctx;
        const BuiltPrompt prompt = builder.build(in);

        PlanningContext pctx;
        pctx.state = &state;
        pctx.framework = framework;
        pctx.role = role;
        pctx.proposal = proposal;
        pctx.own_action = std::move(own_action);

        const std::string speaker = role.central ? "central" : robot_name(role.robot);
        const CompletionResult res = gateway.complete(speaker, purpose_label, prompt.text, &pctx);

        CallResult out;
        if (res.status != CompletionStatus::Ok) {
            out.cause = res.status == CompletionStatus::ContextOverflow ? FailCause::ContextOverflow
                                                                        : FailCause::InfraError;
            out.detail = completion_status_name(res.status) + ": " + res.detail;
            return out;
        }
        transcript.turns.push_back({speaker, turn_purpose, prompt.text, res.text, res.usage});
        out.ok = true;
        out.text = res.text;
        return out;
    }

    PlanStepResult fail(FailCause cause, std::string detail) {
        PlanStepResult r;
        r.ok = false;
        r.cause = cause;
        r.detail = std::move(detail);
        r.transcript = std::move(transcript);
        r.syntax_retries_used = retries_used;
        return r;
    }

    PlanStepResult success(ActionAssignment assignment) {
        PlanStepResult r;
        r.ok = true;
        r.assignment = std::move(assignment);
        r.transcript = std::move(transcript);
        r.syntax_retries_used = retries_used;
        return r;
    }
};

// ---------------------------------------------------------------------------

ProtocolEngine::ProtocolEngine(FrameworkKind framework, PromptBuilder builder,
                               ProtocolLimits limits)
    : framework_(framework), builder_(std::move(builder)), limits_(limits) {}

PlanStepResult ProtocolEngine::plan_step(const EnvState& state, const StepHistory& history,
                                         StepHistoryMode mode, Gateway& gateway) const {
    StepScope scope(state, history, mode, gateway, builder_, framework_);
    switch (framework_) {
        case FrameworkKind::CMAS: return run_cmas(scope);
        case FrameworkKind::DMAS: {
            const int n = robot_count(state);
            std::vector<RobotId> all(n);
            for (int r = 0; r < n; ++r) all[r] = r;
            return run_dmas(scope, "", all);
        }
        case FrameworkKind::HMAS1: return run_hmas1(scope);
        case FrameworkKind::HMAS2: return run_hmas2(scope);
    }
    return scope.fail(FailCause::InfraError, "unknown framework");
}

PlanStepResult ProtocolEngine::run_cmas(StepScope& s) const {
    const AgentRole central{true, 0, {}};
    DialogueContext d;
    d.ask = DialogueContext::Ask::ProposeExecute;
    std::string feedback;
    for (int attempt = 0;; ++attempt) {
        d.syntax_feedback = feedback;
        const CallResult c = s.call(central, d, "propose", TurnPurpose::PlanProposal);
        if (!c.ok) return s.fail(c.cause, c.detail);
        if (contains_execute_marker(c.text)) {
            const ParsedPlan parsed = parse_execute_block(c.text, s.robots);
            const VerifyReport report = s.verifier.verify_entries(parsed.entries);
            if (parsed.parse_errors.empty() && report.ok) {
                s.transcript.turns.back().purpose = TurnPurpose::Execute;
                return s.success(report.assignment);
            }
            feedback = feedback_message(parsed.parse_errors, report);
        } else {
            feedback = kNoBlockFeedback;
        }
        if (attempt == limits_.max_syntax_retries) {
            return s.fail(FailCause::SyntaxRetriesExhausted, "central planner: " + feedback);
        }
        ++s.retries_used;
    }
}

PlanStepResult ProtocolEngine::run_dmas(StepScope& s, const std::string& initial_plan,
                                        const std::vector<RobotId>& speakers) const {
    if (speakers.empty()) {
        return s.fail(FailCause::ConsensusTimeout, "no agents with available actions");
    }
    std::vector<std::pair<std::string, std::string>> comments;
    for (int round = 0; round < limits_.max_dialogue_rounds; ++round) {
        for (const RobotId robot : speakers) {
            const AgentRole role{false, robot, {}};
            DialogueContext d;
            d.ask = DialogueContext::Ask::CommentOrExecute;
            d.initial_plan = initial_plan;
            d.prior_comments = comments;
            std::string feedback;
            for (int attempt = 0;; ++attempt) {
                d.syntax_feedback = feedback;
                const CallResult c = s.call(role, d, "dialogue", TurnPurpose::Comment);
                if (!c.ok) return s.fail(c.cause, c.detail);
                if (!contains_execute_marker(c.text)) {
                    if (attempt == 0) {
                        // A plain comment: next speaker's turn.
                        comments.push_back({robot_name(robot), c.text});
                        break;
                    }
                    feedback = kNoBlockFeedback;
                } else {
                    const ParsedPlan parsed = parse_execute_block(c.text, s.robots);
                    const VerifyReport report = s.verifier.verify_entries(parsed.entries);
                    if (parsed.parse_errors.empty() && report.ok) {
                        s.transcript.turns.back().purpose = TurnPurpose::Execute;
                        return s.success(report.assignment);
                    }
                    feedback = feedback_message(parsed.parse_errors, report);
                }
                if (attempt == limits_.max_syntax_retries) {
                    return s.fail(FailCause::SyntaxRetriesExhausted,
                                  robot_name(robot) + ": " + feedback);
                }
                ++s.retries_used;
            }
        }
    }
    return s.fail(FailCause::ConsensusTimeout,
                  "no agent finalized a plan within " +
                      std::to_string(limits_.max_dialogue_rounds) + " dialogue rounds");
}

PlanStepResult ProtocolEngine::run_hmas1(StepScope& s) const {
    const AgentRole central{true, 0, {}};
    DialogueContext d;
    d.ask = DialogueContext::Ask::ProposeInitialPlan;
    const CallResult c = s.call(central, d, "initial_plan", TurnPurpose::InitialPlan);
    if (!c.ok) return s.fail(c.cause, c.detail);
    return run_dmas(s, c.text, active_agents(s.state));
}

PlanStepResult ProtocolEngine::run_hmas2(StepScope& s) const {
    const AgentRole central{true, 0, {}};
    std::string local_feedback;
    for (int iteration = 0; iteration < limits_.max_replan_iterations; ++iteration) {
        // Central proposal, with the usual syntax retry loop.
        ActionAssignment proposal;
        std::size_t proposal_turn = 0;
        {
            DialogueContext d;
            d.ask = DialogueContext::Ask::ProposeExecute;
            d.local_feedback = local_feedback;
            std::string feedback;
            for (int attempt = 0;; ++attempt) {
                d.syntax_feedback = feedback;
                const CallResult c = s.call(central, d, "propose", TurnPurpose::PlanProposal);
                if (!c.ok) return s.fail(c.cause, c.detail);
                if (contains_execute_marker(c.text)) {
                    const ParsedPlan parsed = parse_execute_block(c.text, s.robots);
                    const VerifyReport report = s.verifier.verify_entries(parsed.entries);
                    if (parsed.parse_errors.empty() && report.ok) {
                        proposal = report.assignment;
                        proposal_turn = s.transcript.turns.size() - 1;
                        break;
                    }
                    feedback = feedback_message(parsed.parse_errors, report);
                } else {
                    feedback = kNoBlockFeedback;
                }
                if (attempt == limits_.max_syntax_retries) {
                    return s.fail(FailCause::SyntaxRetriesExhausted,
                                  "central planner: " + feedback);
                }
                ++s.retries_used;
            }
        }

        // Every robot with real choices reviews its own assigned action.
        const std::vector<RobotId> reviewers = active_agents(s.state);
        const std::string proposal_text = format_execute_block(proposal);
        std::vector<std::string> review_lines;
        bool any_disagree = false;
        for (const RobotId robot : reviewers) {
            const AgentRole role{false, robot, {}};
            const Action* assigned = proposal.find(robot);
            const std::string own =
                (assigned ? *assigned : do_nothing_action()).render();
            DialogueContext d;
            d.ask = DialogueContext::Ask::ReviewAssigned;
            d.proposal_text = proposal_text;
            d.own_action = own;
            std::string feedback;
            for (int attempt = 0;; ++attempt) {
                d.syntax_feedback = feedback;
                const CallResult c =
                    s.call(role, d, "review", TurnPurpose::Feedback, &proposal, own);
                if (!c.ok) return s.fail(c.cause, c.detail);
                // DISAGREE first: "DISAGREE" contains "AGREE" as a substring.
                const bool disagree = contains(c.text, "DISAGREE");
                const bool agree = !disagree && contains(c.text, "AGREE");
                if (disagree || agree) {
                    review_lines.push_back(robot_name(robot) + ": " + c.text);
                    any_disagree = any_disagree || disagree;
                    break;
                }
                feedback = "- reply with a line containing AGREE, or DISAGREE plus your reason";
                if (attempt == limits_.max_syntax_retries) {
                    return s.fail(FailCause::SyntaxRetriesExhausted,
                                  robot_name(robot) + ": review said neither AGREE nor DISAGREE");
                }
                ++s.retries_used;
            }
        }

        if (!any_disagree) {
            s.transcript.turns[proposal_turn].purpose = TurnPurpose::Execute;
            return s.success(proposal);
        }
        local_feedback = join(review_lines, "\n");
    }
    return s.fail(FailCause::ConsensusTimeout,
                  "no consensus within " + std::to_string(limits_.max_replan_iterations) +
                      " proposal iterations");
}

// ---------------------------------------------------------------------------

bool transcript_conforms(const DialogueTranscript& transcript, FrameworkKind framework) {
    const auto is_robot = [](const std::string& speaker) {
        return speaker.rfind("robot", 0) == 0;
    };
    switch (framework) {
        case FrameworkKind::CMAS:
            for (const auto& t : transcript.turns) {
                if (t.speaker != "central") return false;
                if (t.purpose != TurnPurpose::PlanProposal && t.purpose != TurnPurpose::Execute) {
                    return false;
                }
            }
            return true;
        case FrameworkKind::DMAS:
            for (const auto& t : transcript.turns) {
                if (!is_robot(t.speaker)) return false;
                if (t.purpose != TurnPurpose::Comment && t.purpose != TurnPurpose::Execute) {
                    return false;
                }
            }
            return true;
        case FrameworkKind::HMAS1:
            for (std::size_t i = 0; i < transcript.turns.size(); ++i) {
                const auto& t = transcript.turns[i];
                if (i == 0) {
                    if (t.speaker != "central" || t.purpose != TurnPurpose::InitialPlan) {
                        return false;
                    }
                    continue;
                }
                if (!is_robot(t.speaker)) return false;
                if (t.purpose != TurnPurpose::Comment && t.purpose != TurnPurpose::Execute) {
                    return false;
                }
            }
            return true;
        case FrameworkKind::HMAS2:
            for (const auto& t : transcript.turns) {
                if (t.speaker == "central") {
                    if (t.purpose != TurnPurpose::PlanProposal &&
                        t.purpose != TurnPurpose::Execute) {
                        return false;
                    }
                } else if (is_robot(t.speaker)) {
                    if (t.purpose != TurnPurpose::Feedback) return false;
                } else {
                    return false;
                }
            }
            return true;
    }
    return false;
}

}  // namespace mrtp
