#include <algorithm>
#include <stdexcept>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"

// BoxNet1 dynamics. Arm i is bolted over cell i (row-major) and can move one
// unplaced box per step from its cell to a 4-neighbor cell, or onto the
// matching colored target inside its cell. Placed boxes are settled. The
// environment defines no collisions.

namespace mrtp {

namespace {

std::string box_name(const BoxNet1State::Box& b) { return "box_" + b.color; }
std::string target_name(const std::string& color) { return "target_" + color; }

std::vector<int> neighbor_cells(const BoxNet1State& s, int cell) {
    const int row = cell / s.cols;
    const int col = cell % s.cols;
    std::vector<int> out;
    if (row > 0) out.push_back(cell - s.cols);
    if (col > 0) out.push_back(cell - 1);
    if (col + 1 < s.cols) out.push_back(cell + 1);
    if (row + 1 < s.rows) out.push_back(cell + s.cols);
    return out;
}

// Resolves a destination parameter to either a neighbor cell or the in-cell
// target of the box's color. Availability has already been checked, so the
// destination is known to be one of the two.
bool is_target_destination(const std::string& dest) { return dest.rfind("target_", 0) == 0; }

int parse_cell(const BoxNet1State& s, const std::string& dest) {
    for (int cell = 0; cell < s.rows * s.cols; ++cell) {
        if (cell_name_by_index(cell, s.cols) == dest) return cell;
    }
    throw std::invalid_argument("not a cell name: " + dest);
}

}  // namespace

std::vector<Action> available_actions(const BoxNet1State& s, RobotId robot) {
    const int n = s.rows * s.cols;
    if (robot < 0 || robot >= n) {
        throw std::out_of_range("boxnet1: unknown robot id " + std::to_string(robot));
    }
    std::vector<Action> actions;
    for (const auto& b : s.boxes) {
        if (b.placed || b.cell != robot) continue;
        for (int dest : neighbor_cells(s, robot)) {
            actions.push_back(move_action(box_name(b), cell_name_by_index(dest, s.cols)));
        }
        for (const auto& g : s.goals) {
            if (g.color == b.color && g.cell == robot) {
                actions.push_back(move_action(box_name(b), target_name(b.color)));
            }
        }
    }
    actions.push_back(do_nothing_action());
    std::sort(actions.begin(), actions.end(), action_order);
    return actions;
}

StepOutcome apply_joint_action(const BoxNet1State& s, const ActionAssignment& assignment,
                               const ExecutionNoise& noise) {
    const int n = s.rows * s.cols;
    StepOutcome out;
    out.next = s;

    auto invalid = [&](std::string detail) {
        out.result = StepResult::Invalid;
        out.detail = std::move(detail);
        out.executed.clear();
        return out;
    };

    std::vector<std::string> touched;  // boxes manipulated this step
    for (const auto& [robot, action] : assignment.entries()) {
        if (robot < 0 || robot >= n) return invalid("unknown robot id " + std::to_string(robot));
        if (action.is_do_nothing()) continue;
        const auto menu = available_actions(s, robot);
        if (std::find(menu.begin(), menu.end(), action) == menu.end()) {
            return invalid(robot_name(robot) + ": " + action.render() + " is not available");
        }
        if (std::find(touched.begin(), touched.end(), action.params[0]) != touched.end()) {
            return invalid("two arms moved " + action.params[0] + " in one step");
        }
        touched.push_back(action.params[0]);
    }

    auto& next = std::get<BoxNet1State>(out.next);
    for (RobotId robot = 0; robot < n; ++robot) {
        const Action* assigned = assignment.find(robot);
        const Action action = assigned ? *assigned : do_nothing_action();
        bool ok = true;
        if (!action.is_do_nothing()) {
            if (noise.fails(s.step, robot)) {
                ok = false;
            } else {
                const auto it = std::find_if(s.boxes.begin(), s.boxes.end(), [&](const auto& b) {
                    return !b.placed && b.cell == robot && box_name(b) == action.params[0];
                });
                auto& box = next.boxes[it - s.boxes.begin()];
                if (is_target_destination(action.params[1])) {
                    box.placed = true;
                } else {
                    box.cell = parse_cell(s, action.params[1]);
                }
            }
        }
        out.executed.push_back({robot, action, ok});
    }
    next.step = s.step + 1;
    out.result = StepResult::Advanced;
    return out;
}

bool is_goal(const BoxNet1State& s) {
    return std::all_of(s.boxes.begin(), s.boxes.end(), [](const auto& b) { return b.placed; });
}

StateFacts state_facts(const BoxNet1State& s) {
    StateFacts facts;
    facts.env = env_kind_name(EnvKind::BoxNet1);
    facts.step = s.step;
    for (const auto& b : s.boxes) {
        ObjectFact obj;
        obj.name = box_name(b);
        obj.properties = {
            {"position", b.placed ? target_name(b.color) : cell_name_by_index(b.cell, s.cols)},
            {"status", b.placed ? "placed" : "loose"},
        };
        facts.objects.push_back(std::move(obj));
    }
    for (const auto& g : s.goals) {
        ObjectFact obj;
        obj.name = target_name(g.color);
        obj.properties = {{"position", cell_name_by_index(g.cell, s.cols)}};
        facts.objects.push_back(std::move(obj));
    }
    const int n = s.rows * s.cols;
    for (RobotId robot = 0; robot < n; ++robot) {
        RobotFact rf;
        rf.robot = robot;
        rf.name = robot_name(robot);
        rf.location = cell_name_by_index(robot, s.cols);
        for (const auto& a : available_actions(s, robot)) rf.available_actions.push_back(a.render());
        facts.robots.push_back(std::move(rf));
    }
    return facts;
}

}  // namespace mrtp
