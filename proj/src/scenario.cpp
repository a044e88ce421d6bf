#include "mrtp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mrtp/util.hpp"

namespace mrtp {

json scenario_to_json(const ScenarioSpec& spec) {
    return {{"env", env_kind_name(spec.env)},
            {"robot_count", spec.robot_count},
            {"seed", spec.seed},
            {"boxes", spec.boxes},
            {"grid_rows", spec.grid_rows},
            {"grid_cols", spec.grid_cols},
            {"locations", spec.locations},
            {"alpha", spec.alpha},
            {"beta", spec.beta},
            {"lift_strict", spec.lift_strict},
            {"swap_collision", spec.swap_collision}};
}

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec spec;
    spec.env = env_kind_from_name(j.at("env").get<std::string>());
    spec.robot_count = j.at("robot_count").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.boxes = j.value("boxes", 0);
    spec.grid_rows = j.value("grid_rows", 0);
    spec.grid_cols = j.value("grid_cols", 0);
    spec.locations = j.value("locations", 0);
    spec.alpha = j.value("alpha", 1.0);
    spec.beta = j.value("beta", 0.25);
    spec.lift_strict = j.value("lift_strict", true);
    spec.swap_collision = j.value("swap_collision", true);
    return spec;
}

std::vector<int> default_robot_schedule(EnvKind env) {
    switch (env) {
        case EnvKind::BoxNet1:
        case EnvKind::BoxNet2:
            return {4, 8, 16, 32};
        case EnvKind::Warehouse:
        case EnvKind::BoxLift:
            return {4, 6, 8, 10};
    }
    return {};
}

std::pair<int, int> default_grid_dims(int robot_count) {
    if (robot_count <= 0) throw std::invalid_argument("robot_count must be positive");
    int rows = static_cast<int>(std::sqrt(static_cast<double>(robot_count)));
    while (rows > 1 && robot_count % rows != 0) --rows;
    return {rows, robot_count / rows};
}

namespace {

std::pair<int, int> resolve_grid(const ScenarioSpec& spec) {
    int rows = spec.grid_rows;
    int cols = spec.grid_cols;
    if (rows == 0 && cols == 0) {
        std::tie(rows, cols) = default_grid_dims(spec.robot_count);
    }
    if (rows <= 0 || cols <= 0 || rows * cols != spec.robot_count) {
        throw std::invalid_argument("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                                    " does not match robot_count " +
                                    std::to_string(spec.robot_count));
    }
    return {rows, cols};
}

int resolve_boxes(const ScenarioSpec& spec) {
    const int n = spec.boxes > 0 ? spec.boxes : spec.robot_count;
    if (n <= 0) throw std::invalid_argument("boxes must be positive");
    return n;
}

EnvState generate_boxnet1(const ScenarioSpec& spec, Rng& rng) {
    const auto [rows, cols] = resolve_grid(spec);
    const int boxes = resolve_boxes(spec);
    BoxNet1State s;
    s.rows = rows;
    s.cols = cols;
    for (int i = 0; i < boxes; ++i) {
        s.boxes.push_back({box_color_name(i), rng.uniform_int(0, rows * cols - 1), false});
    }
    for (int i = 0; i < boxes; ++i) {
        s.goals.push_back({box_color_name(i), rng.uniform_int(0, rows * cols - 1)});
    }
    return s;
}

EnvState generate_boxnet2(const ScenarioSpec& spec, Rng& rng) {
    const auto [rows, cols] = resolve_grid(spec);
    const int boxes = resolve_boxes(spec);
    const int vertices = (rows + 1) * (cols + 1);
    if (boxes > vertices) {
        throw std::invalid_argument("more boxes than corners: " + std::to_string(boxes) + " > " +
                                    std::to_string(vertices));
    }
    BoxNet2State s;
    s.rows = rows;
    s.cols = cols;
    const auto corners = rng.sample_without_replacement(0, vertices - 1, boxes);
    for (int i = 0; i < boxes; ++i) {
        s.boxes.push_back({box_color_name(i), corners[i], false});
    }
    for (int i = 0; i < boxes; ++i) {
        s.goals.push_back({box_color_name(i), rng.uniform_int(0, rows * cols - 1)});
    }
    return s;
}

EnvState generate_warehouse(const ScenarioSpec& spec, Rng& rng) {
    const int k = spec.locations > 0 ? spec.locations : 2 * spec.robot_count;
    const int boxes = resolve_boxes(spec);
    if (spec.robot_count > k) {
        throw std::invalid_argument("more robots than locations");
    }
    if (boxes > k) {
        throw std::invalid_argument("more boxes than slots");
    }
    WarehouseState s;
    s.num_locations = k;
    s.swap_collision = spec.swap_collision;
    for (int pos : rng.sample_without_replacement(0, k - 1, spec.robot_count)) {
        s.robots.push_back({pos, std::nullopt});
    }
    for (int slot : rng.sample_without_replacement(0, k - 1, boxes)) {
        s.boxes.push_back({slot, WarehouseState::BoxPlace::InSlot});
    }
    return s;
}

EnvState generate_boxlift(const ScenarioSpec& spec, Rng& rng) {
    const int boxes = resolve_boxes(spec);
    BoxLiftState s;
    s.strict_lift = spec.lift_strict;
    long team = 0;
    for (int i = 0; i < spec.robot_count; ++i) {
        const int cap = rng.uniform_int(5, 15);
        s.robots.push_back({cap});
        team += cap;
    }
    for (int i = 0; i < boxes; ++i) {
        const int size = rng.uniform_int(4, 20);
        const double u = (rng.uniform_real() * 2.0 - 1.0) * spec.beta;
        int weight = static_cast<int>(std::lround(size * spec.alpha * (1.0 + u)));
        weight = std::clamp(weight, 1, static_cast<int>(team) - 1);
        s.boxes.push_back({size, weight, false});
    }
    return s;
}

}  // namespace

EnvState generate_scenario(const ScenarioSpec& spec) {
    if (spec.robot_count <= 0) throw std::invalid_argument("robot_count must be positive");
    Rng rng(spec.seed);
    switch (spec.env) {
        case EnvKind::BoxNet1: return generate_boxnet1(spec, rng);
        case EnvKind::BoxNet2: return generate_boxnet2(spec, rng);
        case EnvKind::Warehouse: return generate_warehouse(spec, rng);
        case EnvKind::BoxLift: return generate_boxlift(spec, rng);
    }
    throw std::invalid_argument("unknown environment kind");
}

bool scenario_solvable(const EnvState& state) {
    if (const auto* s = std::get_if<BoxNet1State>(&state)) {
        for (const auto& b : s->boxes) {
            const bool has_goal = std::any_of(s->goals.begin(), s->goals.end(),
                                              [&](const auto& g) { return g.color == b.color; });
            if (!has_goal) return false;
            if (b.cell < 0 || b.cell >= s->rows * s->cols) return false;
        }
        return true;
    }
    if (const auto* s = std::get_if<BoxNet2State>(&state)) {
        const int vertices = (s->rows + 1) * (s->cols + 1);
        for (std::size_t i = 0; i < s->boxes.size(); ++i) {
            const auto& b = s->boxes[i];
            const bool has_goal = std::any_of(s->goals.begin(), s->goals.end(),
                                              [&](const auto& g) { return g.color == b.color; });
            if (!has_goal) return false;
            if (!b.placed && (b.corner < 0 || b.corner >= vertices)) return false;
            for (std::size_t j = i + 1; j < s->boxes.size(); ++j) {
                if (!b.placed && !s->boxes[j].placed && b.corner == s->boxes[j].corner) return false;
            }
        }
        return true;
    }
    if (const auto* s = std::get_if<WarehouseState>(&state)) {
        if (s->robots.empty()) return false;
        for (const auto& b : s->boxes) {
            if (b.slot_location < 0 || b.slot_location >= s->num_locations) return false;
        }
        for (std::size_t i = 0; i < s->robots.size(); ++i) {
            for (std::size_t j = i + 1; j < s->robots.size(); ++j) {
                const int pi = s->robots[i].position;
                if (pi != kTargetRegion && pi == s->robots[j].position) return false;
            }
        }
        return true;
    }
    const auto& s = std::get<BoxLiftState>(state);
    long team = 0;
    for (const auto& r : s.robots) team += r.capability;
    for (const auto& b : s.boxes) {
        if (s.strict_lift ? b.weight >= team : b.weight > team) return false;
    }
    return true;
}

}  // namespace mrtp
