#pragma once

// Exhaustive optimal joint planning over the environment dynamics. Produces
// a step-minimal sequence of joint assignments; used by the oracle backend,
// by iteration budgets derived from optimal step counts, and as the ground
// truth that dialogue frameworks are measured against in tests.

#include <cstdint>
#include <vector>

#include "mrtp/env.hpp"

namespace mrtp {

// Hard bounds that turn a too-large search into a std::runtime_error
// instead of an unbounded burn. max_joint_actions bounds the successor
// fan-out of a single expanded state.
struct SearchLimits {
    int step_cap = 64;
    std::uint64_t max_expanded = 2'000'000;
    std::uint64_t max_joint_actions = 200'000;
};

// One step-minimal plan from state to goal; empty when the state already
// satisfies the goal. Every returned assignment is valid against
// available_actions and never produces a collision.
std::vector<ActionAssignment> optimal_joint_plan(const EnvState& state,
                                                 const SearchLimits& limits = {});

// Length of an optimal plan (0 when already at goal).
int optimal_steps(const EnvState& state, const SearchLimits& limits = {});

}  // namespace mrtp
