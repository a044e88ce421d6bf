#include "mrtp/env.hpp"

#include <algorithm>
#include <stdexcept>

#include "mrtp/util.hpp"

namespace mrtp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string env_kind_name(EnvKind kind) {
    switch (kind) {
        case EnvKind::BoxNet1: return "boxnet1";
        case EnvKind::BoxNet2: return "boxnet2";
        case EnvKind::Warehouse: return "warehouse";
        case EnvKind::BoxLift: return "boxlift";
    }
    return "unknown";
}

EnvKind env_kind_from_name(const std::string& name) {
    if (name == "boxnet1") return EnvKind::BoxNet1;
    if (name == "boxnet2") return EnvKind::BoxNet2;
    if (name == "warehouse") return EnvKind::Warehouse;
    if (name == "boxlift") return EnvKind::BoxLift;
    throw std::invalid_argument("unknown environment: " + name);
}

EnvKind env_kind(const EnvState& state) {
    return std::visit(overloaded{
                          [](const BoxNet1State&) { return EnvKind::BoxNet1; },
                          [](const BoxNet2State&) { return EnvKind::BoxNet2; },
                          [](const WarehouseState&) { return EnvKind::Warehouse; },
                          [](const BoxLiftState&) { return EnvKind::BoxLift; },
                      },
                      state);
}

int robot_count(const EnvState& state) {
    return std::visit(overloaded{
                          [](const BoxNet1State& s) { return s.rows * s.cols; },
                          [](const BoxNet2State& s) { return s.rows * s.cols; },
                          [](const WarehouseState& s) { return static_cast<int>(s.robots.size()); },
                          [](const BoxLiftState& s) { return static_cast<int>(s.robots.size()); },
                      },
                      state);
}

int state_step(const EnvState& state) {
    return std::visit([](const auto& s) { return s.step; }, state);
}

std::vector<Action> available_actions(const EnvState& state, RobotId robot) {
    return std::visit([&](const auto& s) { return available_actions(s, robot); }, state);
}

StepOutcome apply_joint_action(const EnvState& state, const ActionAssignment& assignment,
                               const ExecutionNoise& noise) {
    return std::visit([&](const auto& s) { return apply_joint_action(s, assignment, noise); }, state);
}

std::string step_result_name(StepResult result) {
    switch (result) {
        case StepResult::Advanced: return "advanced";
        case StepResult::Collision: return "collision";
        case StepResult::Invalid: return "invalid";
    }
    return "unknown";
}

bool is_goal(const EnvState& state) {
    return std::visit([](const auto& s) { return is_goal(s); }, state);
}

StateFacts state_facts(const EnvState& state) {
    return std::visit([](const auto& s) { return state_facts(s); }, state);
}

std::vector<LiftAttempt> last_lift_feedback(const EnvState& state) {
    if (const auto* s = std::get_if<BoxLiftState>(&state)) return s->last_feedback;
    return {};
}

// ---------------------------------------------------------------------------
// Naming

std::string cell_name(int row, int col) {
    return "cell_" + std::to_string(row) + "_" + std::to_string(col);
}

std::string cell_name_by_index(int index, int cols) {
    return cell_name(index / cols, index % cols);
}

std::string corner_name(int row, int col) {
    return "corner_" + std::to_string(row) + "_" + std::to_string(col);
}

std::string corner_name_by_index(int index, int cols) {
    return corner_name(index / (cols + 1), index % (cols + 1));
}

std::string location_name(int index) {
    if (index == kTargetRegion) return "target_region";
    return "loc_" + std::to_string(index);
}

std::string box_color_name(int i) {
    static const char* palette[] = {"blue", "cyan", "gold", "pink", "teal", "plum",
                                    "rose", "jade", "rust", "sage", "aqua", "lime",
                                    "mint", "navy", "opal", "ruby"};
    constexpr int n = static_cast<int>(sizeof(palette) / sizeof(palette[0]));
    if (i < n) return palette[i];
    return "hue" + std::to_string(i);
}

// ---------------------------------------------------------------------------
// Task descriptions (prompt section 1)

std::string task_description(EnvKind kind) {
    switch (kind) {
        case EnvKind::BoxNet1:
            return "A grid of cells, one robot arm per cell. Each arm can only reach boxes inside "
                   "its own cell. Move every colored box onto the goal location of the same color "
                   "in as few time steps as possible. Per step an arm may move one box from its "
                   "cell to a neighboring cell, move one box onto a matching goal inside its cell, "
                   "or do nothing. All robots act simultaneously each step. There are no collisions.";
        case EnvKind::BoxNet2:
            return "A grid of cells, one robot arm per cell. Boxes sit on cell corners and can only "
                   "travel corner to corner. Move every colored box onto the goal location of the "
                   "same color in as few time steps as possible. Per step an arm may move one box "
                   "from a corner of its cell to a different corner of its cell, move one box from "
                   "a corner of its cell onto a matching goal inside its cell, or do nothing. All "
                   "robots act simultaneously each step. A corner can hold at most one box: if two "
                   "boxes end up on the same corner the plan fails with a collision.";
        case EnvKind::Warehouse:
            return "A row of permissible locations with a target region attached to the left of "
                   "loc_0. Mobile robots must carry every box into the target region in as few time "
                   "steps as possible. Per step a robot may move left or right by one location "
                   "(moving left from loc_0 enters the target region), pick up the box stored at "
                   "its current location, place its carried box while inside the target region, "
                   "move from the target region back to an adjacent location, or do nothing. All "
                   "robots act simultaneously each step. Two robots on the same location, or two "
                   "robots swapping adjacent locations in one step, is a collision and fails the "
                   "plan; the target region can hold any number of robots.";
        case EnvKind::BoxLift:
            return "A team of robots with different lifting strengths must lift every box in as "
                   "few time steps as possible. Per step each robot may join the lift of one box "
                   "or do nothing; several robots may lift the same box together. A box is lifted "
                   "only when the combined strength of its lifters exceeds the box weight. Box "
                   "weights are hidden: only box sizes are visible, and weight roughly follows "
                   "size. After each step you are told which lift attempts succeeded.";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Action grammar metadata

std::optional<int> action_arity(EnvKind kind, const std::string& action_kind) {
    if (action_kind == kDoNothingKind) return 0;
    switch (kind) {
        case EnvKind::BoxNet1:
        case EnvKind::BoxNet2:
            if (action_kind == "move") return 2;
            return std::nullopt;
        case EnvKind::Warehouse:
            if (action_kind == "move_left" || action_kind == "move_right") return 0;
            if (action_kind == "pick" || action_kind == "place" || action_kind == "move_to") return 1;
            return std::nullopt;
        case EnvKind::BoxLift:
            if (action_kind == "lift") return 1;
            return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Facts rendering

std::string StateFacts::render_objects() const {
    std::vector<std::string> lines;
    for (const auto& obj : objects) {
        std::string line = "- " + obj.name + ":";
        for (const auto& [k, v] : obj.properties) line += " " + k + "=" + v;
        lines.push_back(line);
    }
    if (lines.empty()) return "(none)";
    return join(lines, "\n");
}

std::string StateFacts::render_robots() const {
    std::vector<std::string> lines;
    for (const auto& r : robots) {
        std::string line = "- " + r.name;
        if (!r.location.empty()) line += " (at " + r.location + ")";
        for (const auto& [k, v] : r.attributes) line += " " + k + "=" + v;
        line += ": ";
        line += join(r.available_actions, " | ");
        lines.push_back(line);
    }
    return join(lines, "\n");
}

std::string StateFacts::render_compact() const {
    std::vector<std::string> lines;
    for (const auto& obj : objects) {
        std::string line = "- " + obj.name + ":";
        for (const auto& [k, v] : obj.properties) line += " " + k + "=" + v;
        lines.push_back(line);
    }
    for (const auto& r : robots) {
        if (r.location.empty()) continue;
        lines.push_back("- " + r.name + " at " + r.location);
    }
    if (lines.empty()) return "(none)";
    return join(lines, "\n");
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json boxnet1_to_json(const BoxNet1State& s) {
    json boxes = json::array();
    for (const auto& b : s.boxes)
        boxes.push_back({{"color", b.color}, {"cell", b.cell}, {"placed", b.placed}});
    json goals = json::array();
    for (const auto& g : s.goals) goals.push_back({{"color", g.color}, {"cell", g.cell}});
    return {{"kind", "boxnet1"}, {"rows", s.rows}, {"cols", s.cols},
            {"boxes", boxes},    {"goals", goals}, {"step", s.step}};
}

json boxnet2_to_json(const BoxNet2State& s) {
    json boxes = json::array();
    for (const auto& b : s.boxes)
        boxes.push_back({{"color", b.color}, {"corner", b.corner}, {"placed", b.placed}});
    json goals = json::array();
    for (const auto& g : s.goals) goals.push_back({{"color", g.color}, {"cell", g.cell}});
    return {{"kind", "boxnet2"}, {"rows", s.rows}, {"cols", s.cols},
            {"boxes", boxes},    {"goals", goals}, {"step", s.step}};
}

json warehouse_to_json(const WarehouseState& s) {
    json robots = json::array();
    for (const auto& r : s.robots) {
        json jr = {{"position", r.position}};
        if (r.carrying) jr["carrying"] = *r.carrying;
        robots.push_back(jr);
    }
    json boxes = json::array();
    for (const auto& b : s.boxes) {
        const char* where = b.where == WarehouseState::BoxPlace::InSlot     ? "slot"
                            : b.where == WarehouseState::BoxPlace::Carried  ? "carried"
                                                                            : "delivered";
        boxes.push_back({{"slot_location", b.slot_location}, {"where", where}});
    }
    return {{"kind", "warehouse"},
            {"num_locations", s.num_locations},
            {"robots", robots},
            {"boxes", boxes},
            {"swap_collision", s.swap_collision},
            {"step", s.step}};
}

json boxlift_to_json(const BoxLiftState& s) {
    json robots = json::array();
    for (const auto& r : s.robots) robots.push_back({{"capability", r.capability}});
    json boxes = json::array();
    for (const auto& b : s.boxes)
        boxes.push_back({{"size", b.size}, {"weight", b.weight}, {"lifted", b.lifted}});
    json feedback = json::array();
    for (const auto& a : s.last_feedback) feedback.push_back({{"box", a.box}, {"lifted", a.lifted}});
    return {{"kind", "boxlift"},       {"robots", robots}, {"boxes", boxes},
            {"last_feedback", feedback}, {"strict_lift", s.strict_lift}, {"step", s.step}};
}

}  // namespace

json state_to_json(const EnvState& state) {
    return std::visit(overloaded{
                          [](const BoxNet1State& s) { return boxnet1_to_json(s); },
                          [](const BoxNet2State& s) { return boxnet2_to_json(s); },
                          [](const WarehouseState& s) { return warehouse_to_json(s); },
                          [](const BoxLiftState& s) { return boxlift_to_json(s); },
                      },
                      state);
}

EnvState state_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "boxnet1") {
        BoxNet1State s;
        s.rows = j.at("rows").get<int>();
        s.cols = j.at("cols").get<int>();
        for (const auto& jb : j.at("boxes"))
            s.boxes.push_back({jb.at("color").get<std::string>(), jb.at("cell").get<int>(),
                               jb.at("placed").get<bool>()});
        for (const auto& jg : j.at("goals"))
            s.goals.push_back({jg.at("color").get<std::string>(), jg.at("cell").get<int>()});
        s.step = j.at("step").get<int>();
        return s;
    }
    if (kind == "boxnet2") {
        BoxNet2State s;
        s.rows = j.at("rows").get<int>();
        s.cols = j.at("cols").get<int>();
        for (const auto& jb : j.at("boxes"))
            s.boxes.push_back({jb.at("color").get<std::string>(), jb.at("corner").get<int>(),
                               jb.at("placed").get<bool>()});
        for (const auto& jg : j.at("goals"))
            s.goals.push_back({jg.at("color").get<std::string>(), jg.at("cell").get<int>()});
        s.step = j.at("step").get<int>();
        return s;
    }
    if (kind == "warehouse") {
        WarehouseState s;
        s.num_locations = j.at("num_locations").get<int>();
        for (const auto& jr : j.at("robots")) {
            WarehouseState::Robot r;
            r.position = jr.at("position").get<int>();
            if (jr.contains("carrying")) r.carrying = jr.at("carrying").get<int>();
            s.robots.push_back(r);
        }
        for (const auto& jb : j.at("boxes")) {
            WarehouseState::Box b;
            b.slot_location = jb.at("slot_location").get<int>();
            const std::string where = jb.at("where").get<std::string>();
            b.where = where == "slot"      ? WarehouseState::BoxPlace::InSlot
                      : where == "carried" ? WarehouseState::BoxPlace::Carried
                                           : WarehouseState::BoxPlace::Delivered;
            s.boxes.push_back(b);
        }
        s.swap_collision = j.at("swap_collision").get<bool>();
        s.step = j.at("step").get<int>();
        return s;
    }
    if (kind == "boxlift") {
        BoxLiftState s;
        for (const auto& jr : j.at("robots")) s.robots.push_back({jr.at("capability").get<int>()});
        for (const auto& jb : j.at("boxes"))
            s.boxes.push_back({jb.at("size").get<int>(), jb.at("weight").get<int>(),
                               jb.at("lifted").get<bool>()});
        for (const auto& ja : j.at("last_feedback"))
            s.last_feedback.push_back({ja.at("box").get<std::string>(), ja.at("lifted").get<bool>()});
        s.strict_lift = j.at("strict_lift").get<bool>();
        s.step = j.at("step").get<int>();
        return s;
    }
    throw std::invalid_argument("state_from_json: unknown kind " + kind);
}

json facts_to_json(const StateFacts& facts) {
    json objects = json::array();
    for (const auto& o : facts.objects) {
        json props = json::object();
        for (const auto& [k, v] : o.properties) props[k] = v;
        objects.push_back({{"name", o.name}, {"properties", props}});
    }
    json robots = json::array();
    for (const auto& r : facts.robots) {
        json attrs = json::object();
        for (const auto& [k, v] : r.attributes) attrs[k] = v;
        json jr = {{"robot", r.robot},
                   {"name", r.name},
                   {"attributes", attrs},
                   {"available_actions", r.available_actions}};
        if (!r.location.empty()) jr["location"] = r.location;
        robots.push_back(jr);
    }
    return {{"env", facts.env}, {"step", facts.step}, {"objects", objects}, {"robots", robots}};
}

std::string state_digest(const EnvState& state) {
    return hex64(fnv1a(state_to_json(state).dump()));
}

}  // namespace mrtp
