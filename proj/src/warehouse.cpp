#include <algorithm>
#include <stdexcept>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"

// Warehouse dynamics. Locations loc_0 .. loc_{K-1} form a row with the
// target region attached to the left of loc_0. Mobile robots move one
// location per step (move_left from loc_0 enters the target region,
// move_to(loc_0) leaves it), pick up the box slotted at their current
// location, and place carried boxes inside the target region. Collisions:
// two robots on the same location after the step, or two robots swapping
// adjacent locations within a step; the target region is exempt from both.

namespace mrtp {

namespace {

std::string box_name(int index) { return "box_" + std::to_string(index); }

}  // namespace

std::vector<Action> available_actions(const WarehouseState& s, RobotId robot) {
    if (robot < 0 || robot >= static_cast<int>(s.robots.size())) {
        throw std::out_of_range("warehouse: unknown robot id " + std::to_string(robot));
    }
    const auto& r = s.robots[robot];
    std::vector<Action> actions;
    if (r.position == kTargetRegion) {
        if (r.carrying) actions.push_back({"place", {box_name(*r.carrying)}});
        actions.push_back({"move_to", {location_name(0)}});
    } else {
        actions.push_back({"move_left", {}});
        if (r.position + 1 < s.num_locations) actions.push_back({"move_right", {}});
        if (!r.carrying) {
            for (std::size_t i = 0; i < s.boxes.size(); ++i) {
                const auto& b = s.boxes[i];
                if (b.where == WarehouseState::BoxPlace::InSlot && b.slot_location == r.position) {
                    actions.push_back({"pick", {box_name(static_cast<int>(i))}});
                }
            }
        }
    }
    actions.push_back(do_nothing_action());
    std::sort(actions.begin(), actions.end(), action_order);
    return actions;
}

StepOutcome apply_joint_action(const WarehouseState& s, const ActionAssignment& assignment,
                               const ExecutionNoise& noise) {
    const int n = static_cast<int>(s.robots.size());
    StepOutcome out;
    out.next = s;

    auto invalid = [&](std::string detail) {
        out.result = StepResult::Invalid;
        out.detail = std::move(detail);
        out.executed.clear();
        return out;
    };

    std::vector<std::string> touched;  // boxes picked or placed this step
    for (const auto& [robot, action] : assignment.entries()) {
        if (robot < 0 || robot >= n) return invalid("unknown robot id " + std::to_string(robot));
        if (action.is_do_nothing()) continue;
        const auto menu = available_actions(s, robot);
        if (std::find(menu.begin(), menu.end(), action) == menu.end()) {
            return invalid(robot_name(robot) + ": " + action.render() + " is not available");
        }
        if (action.kind == "pick" || action.kind == "place") {
            if (std::find(touched.begin(), touched.end(), action.params[0]) != touched.end()) {
                return invalid("two robots handled " + action.params[0] + " in one step");
            }
            touched.push_back(action.params[0]);
        }
    }

    auto& next = std::get<WarehouseState>(out.next);
    for (RobotId robot = 0; robot < n; ++robot) {
        const Action* assigned = assignment.find(robot);
        const Action action = assigned ? *assigned : do_nothing_action();
        bool ok = true;
        if (!action.is_do_nothing()) {
            if (noise.fails(s.step, robot)) {
                ok = false;
            } else {
                auto& r = next.robots[robot];
                const int pre = s.robots[robot].position;
                if (action.kind == "move_left") {
                    r.position = pre == 0 ? kTargetRegion : pre - 1;
                } else if (action.kind == "move_right") {
                    r.position = pre + 1;
                } else if (action.kind == "move_to") {
                    r.position = 0;
                } else if (action.kind == "pick") {
                    const int box = std::stoi(action.params[0].substr(4));
                    next.boxes[box].where = WarehouseState::BoxPlace::Carried;
                    r.carrying = box;
                } else if (action.kind == "place") {
                    const int box = std::stoi(action.params[0].substr(4));
                    next.boxes[box].where = WarehouseState::BoxPlace::Delivered;
                    r.carrying.reset();
                }
            }
        }
        out.executed.push_back({robot, action, ok});
    }
    next.step = s.step + 1;

    // Post-step collision checks (target region exempt).
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int pi = next.robots[i].position;
            const int pj = next.robots[j].position;
            if (pi != kTargetRegion && pi == pj) {
                out.result = StepResult::Collision;
                out.detail = robot_name(i) + " and " + robot_name(j) + " collided on " +
                             location_name(pi);
                out.next = s;
                return out;
            }
            if (s.swap_collision) {
                const int qi = s.robots[i].position;
                const int qj = s.robots[j].position;
                const bool swapped = qi == pj && qj == pi && qi != pi;
                if (swapped && qi != kTargetRegion && qj != kTargetRegion) {
                    out.result = StepResult::Collision;
                    out.detail = robot_name(i) + " and " + robot_name(j) +
                                 " collided while swapping " + location_name(qi) + " and " +
                                 location_name(qj);
                    out.next = s;
                    return out;
                }
            }
        }
    }
    out.result = StepResult::Advanced;
    return out;
}

bool is_goal(const WarehouseState& s) {
    return std::all_of(s.boxes.begin(), s.boxes.end(), [](const auto& b) {
        return b.where == WarehouseState::BoxPlace::Delivered;
    });
}

StateFacts state_facts(const WarehouseState& s) {
    StateFacts facts;
    facts.env = env_kind_name(EnvKind::Warehouse);
    facts.step = s.step;
    for (std::size_t i = 0; i < s.boxes.size(); ++i) {
        const auto& b = s.boxes[i];
        std::string position;
        std::string status;
        switch (b.where) {
            case WarehouseState::BoxPlace::InSlot:
                position = location_name(b.slot_location);
                status = "in_slot";
                break;
            case WarehouseState::BoxPlace::Carried: {
                status = "carried";
                for (std::size_t r = 0; r < s.robots.size(); ++r) {
                    if (s.robots[r].carrying == static_cast<int>(i)) {
                        position = robot_name(static_cast<RobotId>(r));
                    }
                }
                break;
            }
            case WarehouseState::BoxPlace::Delivered:
                position = location_name(kTargetRegion);
                status = "delivered";
                break;
        }
        ObjectFact obj;
        obj.name = box_name(static_cast<int>(i));
        obj.properties = {{"position", position}, {"status", status}};
        facts.objects.push_back(std::move(obj));
    }
    for (std::size_t r = 0; r < s.robots.size(); ++r) {
        RobotFact rf;
        rf.robot = static_cast<RobotId>(r);
        rf.name = robot_name(rf.robot);
        rf.location = location_name(s.robots[r].position);
        if (s.robots[r].carrying) {
            rf.attributes = {{"carrying", box_name(*s.robots[r].carrying)}};
        }
        for (const auto& a : available_actions(s, rf.robot)) {
            rf.available_actions.push_back(a.render());
        }
        facts.robots.push_back(std::move(rf));
    }
    return facts;
}

}  // namespace mrtp
