#pragma once

// Environment-agnostic planning primitives: robot ids, actions, and joint
// action assignments.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mrtp {

// Dense 0..N-1 within a scenario.
using RobotId = int;

std::string robot_name(RobotId robot);

inline constexpr const char* kDoNothingKind = "do_nothing";

struct Action {
    std::string kind;
    std::vector<std::string> params;

    bool is_do_nothing() const { return kind == kDoNothingKind; }

    // "kind(a, b)"
    std::string render() const;

    auto operator<=>(const Action&) const = default;
};

Action do_nothing_action();
Action move_action(std::string box, std::string destination);

// Enumeration order used by available_actions: sorted by (kind, params),
// do_nothing always last.
bool action_order(const Action& a, const Action& b);

// At most one action per robot. Entries iterate in RobotId order regardless
// of insertion order, so anything derived from an assignment is independent
// of how it was built.
class ActionAssignment {
public:
    using Entry = std::pair<RobotId, Action>;

    void set(RobotId robot, Action action);
    const Action* find(RobotId robot) const;
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool operator==(const ActionAssignment&) const = default;

private:
    std::vector<Entry> entries_;  // sorted by robot id
};

// Per-action failure hook used to exercise replanning. probability 0 keeps
// the dynamics exactly deterministic; draws are a pure function of
// (rng_seed, step, robot), never of iteration order.
struct ExecutionNoise {
    double failure_probability = 0.0;
    std::uint64_t rng_seed = 0;

    bool fails(int step, RobotId robot) const;
};

}  // namespace mrtp
