#include <algorithm>
#include <array>
#include <stdexcept>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"

// BoxNet2 dynamics. Like BoxNet1, arm i is bolted over cell i (row-major),
// but boxes travel on cell corners (lattice vertices with stride cols+1).
// Per step an arm moves one unplaced box between two corners of its own
// cell, or from a corner of its cell onto the matching colored target
// inside the cell. Two unplaced boxes on the same corner after the step is
// a collision; available actions deliberately include moves that may cause
// one.

namespace mrtp {

namespace {

std::string box_name(const BoxNet2State::Box& b) { return "box_" + b.color; }
std::string target_name(const std::string& color) { return "target_" + color; }

// The four lattice vertices of cell (row, col), ascending vertex index.
std::array<int, 4> cell_corners(const BoxNet2State& s, int cell) {
    const int row = cell / s.cols;
    const int col = cell % s.cols;
    const int stride = s.cols + 1;
    const int top_left = row * stride + col;
    return {top_left, top_left + 1, top_left + stride, top_left + stride + 1};
}

bool is_target_destination(const std::string& dest) { return dest.rfind("target_", 0) == 0; }

int parse_corner(const BoxNet2State& s, const std::string& dest) {
    const int vertices = (s.rows + 1) * (s.cols + 1);
    for (int v = 0; v < vertices; ++v) {
        if (corner_name_by_index(v, s.cols) == dest) return v;
    }
    throw std::invalid_argument("not a corner name: " + dest);
}

}  // namespace

std::vector<Action> available_actions(const BoxNet2State& s, RobotId robot) {
    const int n = s.rows * s.cols;
    if (robot < 0 || robot >= n) {
        throw std::out_of_range("boxnet2: unknown robot id " + std::to_string(robot));
    }
    const auto corners = cell_corners(s, robot);
    std::vector<Action> actions;
    for (const auto& b : s.boxes) {
        if (b.placed) continue;
        if (std::find(corners.begin(), corners.end(), b.corner) == corners.end()) continue;
        for (int dest : corners) {
            if (dest == b.corner) continue;
            actions.push_back(move_action(box_name(b), corner_name_by_index(dest, s.cols)));
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

StepOutcome apply_joint_action(const BoxNet2State& s, const ActionAssignment& assignment,
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

    std::vector<std::string> touched;
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

    auto& next = std::get<BoxNet2State>(out.next);
    for (RobotId robot = 0; robot < n; ++robot) {
        const Action* assigned = assignment.find(robot);
        const Action action = assigned ? *assigned : do_nothing_action();
        bool ok = true;
        if (!action.is_do_nothing()) {
            if (noise.fails(s.step, robot)) {
                ok = false;
            } else {
                const auto corners = cell_corners(s, robot);
                const auto it = std::find_if(s.boxes.begin(), s.boxes.end(), [&](const auto& b) {
                    return !b.placed && box_name(b) == action.params[0] &&
                           std::find(corners.begin(), corners.end(), b.corner) != corners.end();
                });
                auto& box = next.boxes[it - s.boxes.begin()];
                if (is_target_destination(action.params[1])) {
                    box.placed = true;
                    box.corner = -1;  // off the lattice; keeps serialization canonical
                } else {
                    box.corner = parse_corner(s, action.params[1]);
                }
            }
        }
        out.executed.push_back({robot, action, ok});
    }
    next.step = s.step + 1;

    // Post-step collision check over unplaced boxes.
    for (std::size_t i = 0; i < next.boxes.size(); ++i) {
        if (next.boxes[i].placed) continue;
        for (std::size_t j = i + 1; j < next.boxes.size(); ++j) {
            if (next.boxes[j].placed) continue;
            if (next.boxes[i].corner != next.boxes[j].corner) continue;
            out.result = StepResult::Collision;
            out.detail = box_name(next.boxes[i]) + " and " + box_name(next.boxes[j]) +
                         " collided on " + corner_name_by_index(next.boxes[i].corner, s.cols);
            out.next = s;  // unchanged on failure
            return out;
        }
    }
    out.result = StepResult::Advanced;
    return out;
}

bool is_goal(const BoxNet2State& s) {
    return std::all_of(s.boxes.begin(), s.boxes.end(), [](const auto& b) { return b.placed; });
}

StateFacts state_facts(const BoxNet2State& s) {
    StateFacts facts;
    facts.env = env_kind_name(EnvKind::BoxNet2);
    facts.step = s.step;
    for (const auto& b : s.boxes) {
        ObjectFact obj;
        obj.name = box_name(b);
        obj.properties = {
            {"position", b.placed ? target_name(b.color) : corner_name_by_index(b.corner, s.cols)},
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
