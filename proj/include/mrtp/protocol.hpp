#pragma once

// Dialogue protocol engine: one planning round ("produce the next joint
// action") per call, realized differently by each framework.
//
//  CMAS:  one central agent outputs an EXECUTE block directly.
//  DMAS:  robots speak in id order, any turn may finalize with EXECUTE;
//         everything else is a comment carried into later prompts.
//  HMAS1: a central draft (free text, never parsed) primes a DMAS-style
//         dialogue among the robots that currently have real choices.
//  HMAS2: the central agent proposes an EXECUTE block; every robot with
//         real choices reviews its own assigned action (AGREE/DISAGREE);
//         any disagreement sends all reviews back for a central replan.
//
// All EXECUTE output passes the syntactic verifier; rejected output is
// re-prompted with feedback up to a retry limit. The verifier is
// collision-agnostic, so accepted plans can still collide at execution.

#include <string>
#include <vector>

#include "mrtp/frameworks.hpp"
#include "mrtp/gateway.hpp"
#include "mrtp/prompt.hpp"
#include "mrtp/verifier.hpp"

namespace mrtp {

struct ProtocolLimits {
    int max_dialogue_rounds = 10;   // full speaker passes (DMAS, HMAS1)
    int max_replan_iterations = 5;  // central proposal rounds (HMAS2)
    int max_syntax_retries = 3;     // re-prompts per rejected output
    bool operator==(const ProtocolLimits&) const = default;
};

enum class TurnPurpose { Comment, InitialPlan, PlanProposal, Feedback, Execute };
std::string turn_purpose_name(TurnPurpose purpose);

struct Turn {
    std::string speaker;  // "central" or a robot name
    TurnPurpose purpose = TurnPurpose::Comment;
    std::string prompt;
    std::string response;
    Usage usage;
};

struct DialogueTranscript {
    std::vector<Turn> turns;
};

// Why a trial (or a single planning round) failed. InfraError marks
// workbench trouble (transport, replay divergence, bad fixtures) rather
// than agent behavior; aggregation excludes it.
enum class FailCause {
    None,
    ContextOverflow,
    ConsensusTimeout,
    SyntaxRetriesExhausted,
    IterationLimit,
    Collision,
    InfraError,
};
std::string fail_cause_name(FailCause cause);
FailCause fail_cause_from_name(const std::string& name);

struct PlanStepResult {
    bool ok = false;
    FailCause cause = FailCause::None;
    std::string detail;
    ActionAssignment assignment;  // meaningful when ok
    DialogueTranscript transcript;
    int syntax_retries_used = 0;
};

// Robots whose current menu goes beyond do_nothing.
std::vector<RobotId> active_agents(const EnvState& state);

// Loose shape check of a finished transcript against a framework's
// speaker/purpose pattern; used by tests and the replay validator.
bool transcript_conforms(const DialogueTranscript& transcript, FrameworkKind framework);

class ProtocolEngine {
public:
    ProtocolEngine(FrameworkKind framework, PromptBuilder builder, ProtocolLimits limits = {});

    FrameworkKind framework() const { return framework_; }
    const ProtocolLimits& limits() const { return limits_; }

    PlanStepResult plan_step(const EnvState& state, const StepHistory& history,
                             StepHistoryMode mode, Gateway& gateway) const;

private:
    struct StepScope;  // shared per-call context

    PlanStepResult run_cmas(StepScope& scope) const;
    PlanStepResult run_dmas(StepScope& scope, const std::string& initial_plan,
                            const std::vector<RobotId>& speakers) const;
    PlanStepResult run_hmas1(StepScope& scope) const;
    PlanStepResult run_hmas2(StepScope& scope) const;

    FrameworkKind framework_;
    PromptBuilder builder_;
    ProtocolLimits limits_;
};

}  // namespace mrtp
