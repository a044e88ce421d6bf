#pragma once

// Environment-core operations: per-robot action enumeration, simultaneous
// joint-action application, goal predicates, and state facts. The variant
// overloads dispatch to the per-environment implementations, which are also
// exposed directly for targeted tests.
//
// Semantics shared by every environment:
//  - all reads happen against the pre-step state, writes are merged, and
//    collision rules are evaluated on the post-step configuration;
//  - two arms manipulating the same box in one step is Invalid;
//  - do_nothing is always available and never changes state;
//  - with failure_probability 0, apply_joint_action is a pure function of
//    (state, assignment).

#include <string>
#include <vector>

#include <json.hpp>

#include "mrtp/state.hpp"

namespace mrtp {

using json = nlohmann::json;

EnvKind env_kind(const EnvState& state);
int robot_count(const EnvState& state);
int state_step(const EnvState& state);

// Ordered by (kind, params) with do_nothing last; always non-empty.
// Throws std::out_of_range for an unknown robot id.
std::vector<Action> available_actions(const EnvState& state, RobotId robot);
std::vector<Action> available_actions(const BoxNet1State& s, RobotId robot);
std::vector<Action> available_actions(const BoxNet2State& s, RobotId robot);
std::vector<Action> available_actions(const WarehouseState& s, RobotId robot);
std::vector<Action> available_actions(const BoxLiftState& s, RobotId robot);

StepOutcome apply_joint_action(const EnvState& state, const ActionAssignment& assignment,
                               const ExecutionNoise& noise = {});
StepOutcome apply_joint_action(const BoxNet1State& s, const ActionAssignment& a, const ExecutionNoise& n);
StepOutcome apply_joint_action(const BoxNet2State& s, const ActionAssignment& a, const ExecutionNoise& n);
StepOutcome apply_joint_action(const WarehouseState& s, const ActionAssignment& a, const ExecutionNoise& n);
StepOutcome apply_joint_action(const BoxLiftState& s, const ActionAssignment& a, const ExecutionNoise& n);

std::string step_result_name(StepResult result);  // "advanced" / "collision" / "invalid"

bool is_goal(const EnvState& state);
bool is_goal(const BoxNet1State& s);
bool is_goal(const BoxNet2State& s);
bool is_goal(const WarehouseState& s);
bool is_goal(const BoxLiftState& s);

StateFacts state_facts(const EnvState& state);
StateFacts state_facts(const BoxNet1State& s);
StateFacts state_facts(const BoxNet2State& s);
StateFacts state_facts(const WarehouseState& s);
StateFacts state_facts(const BoxLiftState& s);

// Task rules rendered into the prompt's first section.
std::string task_description(EnvKind kind);

// Stable JSON shape (sorted keys) for persistence and replay.
json state_to_json(const EnvState& state);
EnvState state_from_json(const json& j);
json facts_to_json(const StateFacts& facts);

// Digest of the canonical serialization; keys plan caches.
std::string state_digest(const EnvState& state);

// Action grammar metadata, used by the verifier to distinguish unknown
// kinds from malformed parameter lists. Returns the expected arity, or
// nullopt for a kind the environment never uses.
std::optional<int> action_arity(EnvKind kind, const std::string& action_kind);

std::vector<LiftAttempt> last_lift_feedback(const EnvState& state);

// Naming helpers shared by environments, prompts, and tests.
std::string cell_name(int row, int col);
std::string cell_name_by_index(int index, int cols);
std::string corner_name(int row, int col);
std::string corner_name_by_index(int index, int cols);
std::string location_name(int index);  // kTargetRegion -> "target_region"
std::string box_color_name(int i);     // deterministic palette

// Resolution of joint lifting per box. Every robot may appear for at most
// one box; a robot listed for two boxes makes the resolution invalid.
struct LiftResolution {
    bool invalid = false;
    std::string detail;
    std::vector<LiftAttempt> attempts;  // one per attempted box, box-index order
};
LiftResolution lift_resolution(const std::vector<std::pair<int, std::vector<RobotId>>>& lifters,
                               const BoxLiftState& state);

}  // namespace mrtp
