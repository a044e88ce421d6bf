#pragma once

// World snapshots for the four benchmark environments, plus the shared
// step-outcome and state-facts types. States are immutable value types:
// every step produces a fresh state.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mrtp/core.hpp"

namespace mrtp {

enum class EnvKind { BoxNet1, BoxNet2, Warehouse, BoxLift };

std::string env_kind_name(EnvKind kind);
EnvKind env_kind_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// BoxNet1: cell grid, one arm per cell, colored boxes with colored goals.
// A box sits in a cell until placed on its matching goal; placed boxes are
// settled and no longer manipulable.

struct BoxNet1State {
    int rows = 0;
    int cols = 0;

    struct Box {
        std::string color;
        int cell = 0;        // row-major index; goal cell once placed
        bool placed = false;
        bool operator==(const Box&) const = default;
    };
    struct Goal {
        std::string color;
        int cell = 0;
        bool operator==(const Goal&) const = default;
    };

    std::vector<Box> boxes;
    std::vector<Goal> goals;
    int step = 0;

    bool operator==(const BoxNet1State&) const = default;
};

// ---------------------------------------------------------------------------
// BoxNet2: like BoxNet1 but boxes travel on cell corners (lattice vertices).
// A corner holds at most one box in any non-collision state.

struct BoxNet2State {
    int rows = 0;
    int cols = 0;

    struct Box {
        std::string color;
        int corner = 0;      // (cols+1)-stride vertex index; unused once placed
        bool placed = false;
        bool operator==(const Box&) const = default;
    };
    struct Goal {
        std::string color;
        int cell = 0;
        bool operator==(const Goal&) const = default;
    };

    std::vector<Box> boxes;
    std::vector<Goal> goals;
    int step = 0;

    bool operator==(const BoxNet2State&) const = default;
};

// ---------------------------------------------------------------------------
// Warehouse: a single row of permissible locations with a target region
// attached to the left of location 0. Mobile robots shuttle boxes from
// per-location slots into the target region.

inline constexpr int kTargetRegion = -1;

struct WarehouseState {
    int num_locations = 0;

    struct Robot {
        int position = 0;                 // location index, or kTargetRegion
        std::optional<int> carrying;      // box index
        bool operator==(const Robot&) const = default;
    };
    enum class BoxPlace { InSlot, Carried, Delivered };
    struct Box {
        int slot_location = 0;            // fixed slot the box starts at
        BoxPlace where = BoxPlace::InSlot;
        bool operator==(const Box&) const = default;
    };

    std::vector<Robot> robots;
    std::vector<Box> boxes;
    bool swap_collision = true;           // adjacent position swaps collide
    int step = 0;

    bool operator==(const WarehouseState&) const = default;
};

// ---------------------------------------------------------------------------
// BoxLift: heterogeneous robots jointly lift boxes. Box weight is part of the
// dynamics but deliberately absent from StateFacts; agents see only sizes and
// per-step lift feedback.

struct LiftAttempt {
    std::string box;
    bool lifted = false;
    bool operator==(const LiftAttempt&) const = default;
};

struct BoxLiftState {
    struct Robot {
        int capability = 0;               // weight units
        bool operator==(const Robot&) const = default;
    };
    struct Box {
        int size = 0;                     // visible
        int weight = 0;                   // hidden from prompts
        bool lifted = false;
        bool operator==(const Box&) const = default;
    };

    std::vector<Robot> robots;
    std::vector<Box> boxes;
    std::vector<LiftAttempt> last_feedback;  // attempts from the previous step
    bool strict_lift = true;                 // lifted iff sum(cap) > weight
    int step = 0;

    bool operator==(const BoxLiftState&) const = default;
};

using EnvState = std::variant<BoxNet1State, BoxNet2State, WarehouseState, BoxLiftState>;

// ---------------------------------------------------------------------------

enum class StepResult { Advanced, Collision, Invalid };

struct ExecutedAction {
    RobotId robot = 0;
    Action action;
    bool ok = true;
    bool operator==(const ExecutedAction&) const = default;
};

// Collision is only produced by environments that define collisions
// (BoxNet2, Warehouse); Invalid means the assignment violated availability
// or manipulated one box with two arms, which the verifier should have
// pre-empted. next is the advanced state for Advanced and the unchanged
// input state otherwise.
struct StepOutcome {
    StepResult result = StepResult::Advanced;
    EnvState next;
    std::string detail;
    std::vector<ExecutedAction> executed;
};

// ---------------------------------------------------------------------------
// Structured, serialization-ready bridge between environment state and the
// prompt sections. All orderings are deterministic.

struct ObjectFact {
    std::string name;
    std::vector<std::pair<std::string, std::string>> properties;  // sorted by key
};

struct RobotFact {
    RobotId robot = 0;
    std::string name;
    std::string location;                                          // may be empty
    std::vector<std::pair<std::string, std::string>> attributes;   // sorted by key
    std::vector<std::string> available_actions;
};

struct StateFacts {
    std::string env;
    int step = 0;
    std::vector<ObjectFact> objects;
    std::vector<RobotFact> robots;

    std::string render_objects() const;
    std::string render_robots() const;
    std::string render_compact() const;  // objects + robot locations, no action lists
};

}  // namespace mrtp
