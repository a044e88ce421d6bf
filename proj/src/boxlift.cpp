#include <algorithm>
#include <map>
#include <stdexcept>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"

// BoxLift dynamics. Heterogeneous robots jointly lift boxes; per step each
// robot either joins the lift of one unlifted box or does nothing. A box
// lifts exactly when the combined capability of its lifters exceeds its
// weight (strictly by default). Weights are hidden from agents: StateFacts
// exposes only sizes, capabilities, and the previous step's attempt
// feedback. There are no collisions.

namespace mrtp {

namespace {

std::string box_name(int index) { return "box_" + std::to_string(index); }

}  // namespace

std::vector<Action> available_actions(const BoxLiftState& s, RobotId robot) {
    if (robot < 0 || robot >= static_cast<int>(s.robots.size())) {
        throw std::out_of_range("boxlift: unknown robot id " + std::to_string(robot));
    }
    std::vector<Action> actions;
    for (std::size_t i = 0; i < s.boxes.size(); ++i) {
        if (!s.boxes[i].lifted) actions.push_back({"lift", {box_name(static_cast<int>(i))}});
    }
    actions.push_back(do_nothing_action());
    std::sort(actions.begin(), actions.end(), action_order);
    return actions;
}

LiftResolution lift_resolution(const std::vector<std::pair<int, std::vector<RobotId>>>& lifters,
                               const BoxLiftState& state) {
    LiftResolution res;
    std::vector<RobotId> seen_robots;
    std::vector<int> seen_boxes;
    for (const auto& [box, robots] : lifters) {
        if (box < 0 || box >= static_cast<int>(state.boxes.size())) {
            res.invalid = true;
            res.detail = "unknown box index " + std::to_string(box);
            return res;
        }
        if (std::find(seen_boxes.begin(), seen_boxes.end(), box) != seen_boxes.end()) {
            res.invalid = true;
            res.detail = box_name(box) + " listed twice";
            return res;
        }
        seen_boxes.push_back(box);
        for (RobotId r : robots) {
            if (r < 0 || r >= static_cast<int>(state.robots.size())) {
                res.invalid = true;
                res.detail = "unknown robot id " + std::to_string(r);
                return res;
            }
            if (std::find(seen_robots.begin(), seen_robots.end(), r) != seen_robots.end()) {
                res.invalid = true;
                res.detail = robot_name(r) + " assigned to two boxes";
                return res;
            }
            seen_robots.push_back(r);
        }
    }
    // Pure capability arithmetic, box-index order.
    std::vector<std::pair<int, std::vector<RobotId>>> sorted = lifters;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [box, robots] : sorted) {
        long total = 0;
        for (RobotId r : robots) total += state.robots[r].capability;
        const int weight = state.boxes[box].weight;
        const bool lifted = state.strict_lift ? total > weight : total >= weight;
        res.attempts.push_back({box_name(box), lifted});
    }
    return res;
}

StepOutcome apply_joint_action(const BoxLiftState& s, const ActionAssignment& assignment,
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

    for (const auto& [robot, action] : assignment.entries()) {
        if (robot < 0 || robot >= n) return invalid("unknown robot id " + std::to_string(robot));
    }

    std::map<int, std::vector<RobotId>> lifters;  // box index -> contributing robots
    for (RobotId robot = 0; robot < n; ++robot) {
        const Action* assigned = assignment.find(robot);
        const Action action = assigned ? *assigned : do_nothing_action();
        bool ok = true;
        if (!action.is_do_nothing()) {
            const auto menu = available_actions(s, robot);
            if (std::find(menu.begin(), menu.end(), action) == menu.end()) {
                return invalid(robot_name(robot) + ": " + action.render() + " is not available");
            }
            if (noise.fails(s.step, robot)) {
                ok = false;
            } else {
                lifters[std::stoi(action.params[0].substr(4))].push_back(robot);
            }
        }
        out.executed.push_back({robot, action, ok});
    }

    std::vector<std::pair<int, std::vector<RobotId>>> per_box(lifters.begin(), lifters.end());
    const LiftResolution res = lift_resolution(per_box, s);

    auto& next = std::get<BoxLiftState>(out.next);
    next.last_feedback = res.attempts;
    for (const auto& attempt : res.attempts) {
        if (attempt.lifted) next.boxes[std::stoi(attempt.box.substr(4))].lifted = true;
    }
    next.step = s.step + 1;
    out.result = StepResult::Advanced;
    return out;
}

bool is_goal(const BoxLiftState& s) {
    return std::all_of(s.boxes.begin(), s.boxes.end(), [](const auto& b) { return b.lifted; });
}

StateFacts state_facts(const BoxLiftState& s) {
    StateFacts facts;
    facts.env = env_kind_name(EnvKind::BoxLift);
    facts.step = s.step;
    for (std::size_t i = 0; i < s.boxes.size(); ++i) {
        const auto& b = s.boxes[i];
        ObjectFact obj;
        obj.name = box_name(static_cast<int>(i));
        // Weight is intentionally absent: agents must infer liftability from
        // size and attempt feedback.
        for (const auto& attempt : s.last_feedback) {
            if (attempt.box == obj.name) {
                obj.properties.push_back({"last_attempt", attempt.lifted ? "lifted" : "failed"});
            }
        }
        obj.properties.push_back({"size", std::to_string(b.size)});
        obj.properties.push_back({"status", b.lifted ? "lifted" : "on_ground"});
        facts.objects.push_back(std::move(obj));
    }
    for (std::size_t r = 0; r < s.robots.size(); ++r) {
        RobotFact rf;
        rf.robot = static_cast<RobotId>(r);
        rf.name = robot_name(rf.robot);
        rf.attributes = {{"capability", std::to_string(s.robots[r].capability)}};
        for (const auto& a : available_actions(s, rf.robot)) {
            rf.available_actions.push_back(a.render());
        }
        facts.robots.push_back(std::move(rf));
    }
    return facts;
}

}  // namespace mrtp
