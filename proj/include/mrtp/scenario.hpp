#pragma once

// Seeded scenario generation: a ScenarioSpec plus a seed deterministically
// produces an initial EnvState. Identical specs always produce identical
// states, which is what lets different frameworks face identical initial
// conditions within a benchmark suite.

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mrtp/env.hpp"

namespace mrtp {

struct ScenarioSpec {
    EnvKind env = EnvKind::BoxNet1;
    int robot_count = 4;
    std::uint64_t seed = 0;

    // 0 means "derive a default": boxes defaults to robot_count, grid dims
    // to default_grid_dims(robot_count), locations to 2 * robot_count.
    int boxes = 0;
    int grid_rows = 0;
    int grid_cols = 0;
    int locations = 0;

    // BoxLift weight model: weight ~ size * alpha * (1 + u) with u uniform
    // in [-beta, beta], clamped to [1, team capability - 1] so every box is
    // liftable by the full team. beta 0 ties weight to size exactly.
    double alpha = 1.0;
    double beta = 0.25;
    bool lift_strict = true;

    bool swap_collision = true;

    bool operator==(const ScenarioSpec&) const = default;
};

json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const json& j);

// Throws std::invalid_argument for inconsistent specs (e.g. a grid that
// does not match robot_count, or more BoxNet2 boxes than corners).
EnvState generate_scenario(const ScenarioSpec& spec);

// Static solvability conditions: every box has a matching target, every
// BoxLift box is liftable by the full team, every Warehouse slot index is
// in range. generate_scenario output always satisfies this.
bool scenario_solvable(const EnvState& state);

// Team sizes benchmarked per environment: grids scale {4, 8, 16, 32},
// Warehouse and BoxLift scale {4, 6, 8, 10}.
std::vector<int> default_robot_schedule(EnvKind env);

// Near-square rows x cols with rows * cols == robot_count and rows <= cols.
std::pair<int, int> default_grid_dims(int robot_count);

}  // namespace mrtp
