#pragma once

// Independent search reference shared by the planner tests and the
// acceptance checks: exhaustive breadth-first search over full
// joint-action products through the public dynamics. Exponential, so
// only for micro instances.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrtp/env.hpp"

namespace mrtp::testsupport {

// Every joint assignment over the robots' current menus (the full menu
// product, do_nothing entries rendered as absent robots).
inline std::vector<ActionAssignment> all_joint_assignments(const EnvState& state) {
    const int n = robot_count(state);
    std::vector<std::vector<Action>> menus;
    for (RobotId r = 0; r < n; ++r) menus.push_back(available_actions(state, r));
    std::vector<ActionAssignment> out;
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
        ActionAssignment a;
        for (RobotId r = 0; r < n; ++r) {
            const Action& act = menus[static_cast<std::size_t>(r)][pick[static_cast<std::size_t>(r)]];
            if (!act.is_do_nothing()) a.set(r, act);
        }
        out.push_back(a);
        int i = 0;
        for (; i < n; ++i) {
            auto& p = pick[static_cast<std::size_t>(i)];
            if (++p < menus[static_cast<std::size_t>(i)].size()) break;
            p = 0;
        }
        if (i == n) break;
    }
    return out;
}

inline std::optional<int> bfs_optimal_steps(const EnvState& start, int step_cap) {
    if (is_goal(start)) return 0;
    std::map<std::string, int> seen;
    std::vector<EnvState> frontier = {start};
    seen[state_digest(start)] = 0;
    for (int depth = 1; depth <= step_cap; ++depth) {
        std::vector<EnvState> next_frontier;
        for (const EnvState& s : frontier) {
            for (const ActionAssignment& a : all_joint_assignments(s)) {
                const StepOutcome out = apply_joint_action(s, a, {});
                if (out.result == StepResult::Advanced) {
                    if (is_goal(out.next)) return depth;
                    const std::string d = state_digest(out.next);
                    if (!seen.count(d)) {
                        seen[d] = depth;
                        next_frontier.push_back(out.next);
                    }
                }
            }
        }
        frontier = std::move(next_frontier);
        if (frontier.empty()) break;
    }
    return std::nullopt;
}

}  // namespace mrtp::testsupport
