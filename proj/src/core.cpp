#include "mrtp/core.hpp"

#include <algorithm>
#include <tuple>

#include "mrtp/util.hpp"

namespace mrtp {

std::string robot_name(RobotId robot) {
    return "robot" + std::to_string(robot);
}

std::string Action::render() const {
    std::string out = kind + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i];
    }
    out += ")";
    return out;
}

Action do_nothing_action() {
    return Action{kDoNothingKind, {}};
}

Action move_action(std::string box, std::string destination) {
    return Action{"move", {std::move(box), std::move(destination)}};
}

bool action_order(const Action& a, const Action& b) {
    const bool an = a.is_do_nothing();
    const bool bn = b.is_do_nothing();
    if (an != bn) return bn;  // do_nothing sorts last
    return std::tie(a.kind, a.params) < std::tie(b.kind, b.params);
}

void ActionAssignment::set(RobotId robot, Action action) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), robot,
                               [](const Entry& e, RobotId r) { return e.first < r; });
    if (it != entries_.end() && it->first == robot) {
        it->second = std::move(action);
    } else {
        entries_.insert(it, {robot, std::move(action)});
    }
}

const Action* ActionAssignment::find(RobotId robot) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), robot,
                               [](const Entry& e, RobotId r) { return e.first < r; });
    if (it != entries_.end() && it->first == robot) return &it->second;
    return nullptr;
}

bool ExecutionNoise::fails(int step, RobotId robot) const {
    if (failure_probability <= 0.0) return false;
    if (failure_probability >= 1.0) return true;
    std::string key = "noise|" + std::to_string(rng_seed) + "|" +
                      std::to_string(step) + "|" + std::to_string(robot);
    return unit_from_hash(fnv1a(key)) < failure_probability;
}

}  // namespace mrtp
