#include "mrtp/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

#include "mrtp/util.hpp"

// Per-environment search problems over compact integer states. The planners
// deliberately re-model the dynamics (the public apply_joint_action works on
// named actions and is too slow inside a search loop); the environment-core
// test suite cross-checks both models against each other on exhaustively
// enumerable instances. Collisions and invalid combinations are simply never
// generated as successors, so any returned plan executes cleanly.

namespace mrtp {

namespace {

[[noreturn]] void search_overflow(const char* what) {
    throw std::runtime_error(std::string("planner: ") + what + " limit exceeded");
}

// Generic A* over a Problem with:
//   State, Edge, key(State) -> std::string, goal(State), heuristic(State),
//   successors(State, emit(Edge, State)).
// Goal test happens at pop; nodes reopen on a strictly better g. Keys are
// bijective with states, so a node's stored state never changes once
// created and parent/edge chains stay mutually consistent.
template <typename P>
std::vector<std::pair<typename P::State, typename P::Edge>> astar_plan(
    P& prob, const typename P::State& start, const SearchLimits& limits) {
    using State = typename P::State;
    using Edge = typename P::Edge;
    struct Node {
        int g = 0;
        std::string parent;
        Edge edge;
        State state;
    };
    if (prob.goal(start)) return {};

    std::unordered_map<std::string, Node> nodes;
    // f, then -g so deeper nodes win ties, then key for determinism.
    using QEntry = std::tuple<int, int, std::string>;
    std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> open;

    const std::string start_key = prob.key(start);
    nodes[start_key] = Node{0, {}, {}, start};
    open.push({prob.heuristic(start), 0, start_key});

    std::uint64_t expanded = 0;
    while (!open.empty()) {
        auto [f, neg_g, key] = open.top();
        const int g = -neg_g;
        open.pop();
        const Node& node = nodes.at(key);
        if (node.g != g) continue;  // superseded entry
        if (prob.goal(node.state)) {
            std::vector<std::pair<State, Edge>> path;
            std::string cur = key;
            while (true) {
                const Node& n = nodes.at(cur);
                if (n.parent.empty() && cur == start_key) break;
                path.push_back({nodes.at(n.parent).state, n.edge});
                cur = n.parent;
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        if (g >= limits.step_cap) continue;
        if (++expanded > limits.max_expanded) search_overflow("expansion");

        std::uint64_t fanout = 0;
        const State state = node.state;  // copy: the map may rehash during emit
        prob.successors(state, [&](const Edge& edge, const State& ns) {
            if (++fanout > limits.max_joint_actions) search_overflow("joint action fan-out");
            const int ng = g + 1;
            std::string nk = prob.key(ns);
            auto [it, fresh] = nodes.try_emplace(nk, Node{ng, key, edge, ns});
            if (!fresh) {
                if (it->second.g <= ng) return;
                it->second.g = ng;
                it->second.parent = key;
                it->second.edge = edge;
            }
            open.push({ng + prob.heuristic(ns), -ng, std::move(nk)});
        });
    }
    throw std::runtime_error("planner: no plan within step cap " +
                             std::to_string(limits.step_cap));
}

int ceil_div(long a, long b) { return static_cast<int>((a + b - 1) / b); }

// ---------------------------------------------------------------------------
// BoxNet1: state is each box's cell, -1 once placed. Arms never conflict
// (a box sits in exactly one cell), so successors are a plain product of
// per-arm options.

struct BoxNet1Problem {
    int rows = 0, cols = 0, arms = 0;
    std::vector<int> goal_cell;            // per box
    std::vector<std::string> box_names;    // "box_<color>"
    std::vector<std::string> target_names; // "target_<color>"

    using State = std::vector<int>;
    struct Op {
        int box = 0;
        int dest = 0;  // cell index, or -1 to place on the in-cell target
    };
    using Edge = std::vector<Op>;

    explicit BoxNet1Problem(const BoxNet1State& s) {
        rows = s.rows;
        cols = s.cols;
        arms = rows * cols;
        for (const auto& b : s.boxes) {
            box_names.push_back("box_" + b.color);
            target_names.push_back("target_" + b.color);
            int goal = -1;
            for (const auto& g : s.goals) {
                if (g.color == b.color) goal = g.cell;
            }
            goal_cell.push_back(goal);
        }
    }

    State start_state(const BoxNet1State& s) const {
        State st;
        for (const auto& b : s.boxes) st.push_back(b.placed ? -1 : b.cell);
        return st;
    }

    std::string key(const State& s) const {
        std::string k(s.size(), '\0');
        for (std::size_t i = 0; i < s.size(); ++i) k[i] = static_cast<char>(s[i] + 1);
        return k;
    }

    bool goal(const State& s) const {
        return std::all_of(s.begin(), s.end(), [](int c) { return c == -1; });
    }

    int heuristic(const State& s) const {
        long total = 0;
        int worst = 0;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (s[b] == -1) continue;
            const int d = std::abs(s[b] / cols - goal_cell[b] / cols) +
                          std::abs(s[b] % cols - goal_cell[b] % cols) + 1;
            total += d;
            worst = std::max(worst, d);
        }
        return std::max(worst, ceil_div(total, arms));
    }

    template <typename Emit>
    void successors(const State& s, Emit&& emit) const {
        // Option lists per occupied cell (arm), each option moves one box.
        std::vector<std::vector<Op>> options;
        for (int cell = 0; cell < arms; ++cell) {
            std::vector<Op> ops;
            for (std::size_t b = 0; b < s.size(); ++b) {
                if (s[b] != cell) continue;
                const int row = cell / cols, col = cell % cols;
                if (row > 0) ops.push_back({static_cast<int>(b), cell - cols});
                if (col > 0) ops.push_back({static_cast<int>(b), cell - 1});
                if (col + 1 < cols) ops.push_back({static_cast<int>(b), cell + 1});
                if (row + 1 < rows) ops.push_back({static_cast<int>(b), cell + cols});
                if (goal_cell[b] == cell) ops.push_back({static_cast<int>(b), -1});
            }
            if (!ops.empty()) options.push_back(std::move(ops));
        }
        Edge edge;
        product(s, options, 0, edge, emit);
    }

private:
    template <typename Emit>
    void product(const State& s, const std::vector<std::vector<Op>>& options, std::size_t i,
                 Edge& edge, Emit&& emit) const {
        if (i == options.size()) {
            if (edge.empty()) return;  // everyone idle: no progress
            State ns = s;
            for (const auto& op : edge) ns[op.box] = op.dest == -1 ? -1 : op.dest;
            emit(edge, ns);
            return;
        }
        product(s, options, i + 1, edge, emit);  // this arm idles
        for (const auto& op : options[i]) {
            edge.push_back(op);
            product(s, options, i + 1, edge, emit);
            edge.pop_back();
        }
    }
};

// ---------------------------------------------------------------------------
// BoxNet2: state is each box's corner, -1 once placed. A corner may be
// served by up to four arms; successors exclude same-arm and same-box
// conflicts and never generate post-step corner collisions.

struct BoxNet2Problem {
    int rows = 0, cols = 0, stride = 0, vertices = 0, arms = 0;
    std::vector<int> goal_cell;
    std::vector<std::string> box_names;
    std::vector<std::string> target_names;
    std::vector<std::array<int, 4>> corners_of_cell;
    std::vector<std::vector<int>> cells_of_corner;
    // Per distinct goal cell: corner -> corner-move distance to reach any
    // corner of that cell (moves within one cell form a clique).
    std::unordered_map<int, std::vector<int>> dist_to_cell;

    using State = std::vector<int>;
    struct Op {
        int box = 0;
        int arm = 0;
        int dest = 0;  // corner index, or -1 to place
    };
    using Edge = std::vector<Op>;

    explicit BoxNet2Problem(const BoxNet2State& s) {
        rows = s.rows;
        cols = s.cols;
        stride = cols + 1;
        vertices = (rows + 1) * (cols + 1);
        arms = rows * cols;
        for (int cell = 0; cell < arms; ++cell) {
            const int r = cell / cols, c = cell % cols;
            const int tl = r * stride + c;
            corners_of_cell.push_back({tl, tl + 1, tl + stride, tl + stride + 1});
        }
        cells_of_corner.resize(vertices);
        for (int cell = 0; cell < arms; ++cell) {
            for (int v : corners_of_cell[cell]) cells_of_corner[v].push_back(cell);
        }
        for (const auto& b : s.boxes) {
            box_names.push_back("box_" + b.color);
            target_names.push_back("target_" + b.color);
            int goal = -1;
            for (const auto& g : s.goals) {
                if (g.color == b.color) goal = g.cell;
            }
            goal_cell.push_back(goal);
            if (!dist_to_cell.count(goal)) dist_to_cell[goal] = corner_distances(goal);
        }
    }

    State start_state(const BoxNet2State& s) const {
        State st;
        for (const auto& b : s.boxes) st.push_back(b.placed ? -1 : b.corner);
        return st;
    }

    std::string key(const State& s) const {
        std::string k(s.size(), '\0');
        for (std::size_t i = 0; i < s.size(); ++i) k[i] = static_cast<char>(s[i] + 1);
        return k;
    }

    bool goal(const State& s) const {
        return std::all_of(s.begin(), s.end(), [](int c) { return c == -1; });
    }

    int heuristic(const State& s) const {
        long total = 0;
        int worst = 0;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (s[b] == -1) continue;
            const int d = dist_to_cell.at(goal_cell[b])[s[b]] + 1;
            total += d;
            worst = std::max(worst, d);
        }
        return std::max(worst, ceil_div(total, arms));
    }

    template <typename Emit>
    void successors(const State& s, Emit&& emit) const {
        std::vector<std::vector<Op>> per_box;  // options for each unplaced box
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (s[b] == -1) continue;
            std::vector<Op> ops;
            for (int cell : cells_of_corner[s[b]]) {
                for (int dest : corners_of_cell[cell]) {
                    if (dest != s[b]) ops.push_back({static_cast<int>(b), cell, dest});
                }
                if (goal_cell[b] == cell) ops.push_back({static_cast<int>(b), cell, -1});
            }
            per_box.push_back(std::move(ops));
        }
        Edge edge;
        std::uint64_t used_arms = 0;
        descend(s, per_box, 0, edge, used_arms, emit);
    }

private:
    std::vector<int> corner_distances(int cell) const {
        std::vector<int> dist(vertices, vertices + 1);
        std::queue<int> q;
        for (int v : corners_of_cell[cell]) {
            dist[v] = 0;
            q.push(v);
        }
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int c : cells_of_corner[v]) {
                for (int w : corners_of_cell[c]) {
                    if (dist[w] > dist[v] + 1) {
                        dist[w] = dist[v] + 1;
                        q.push(w);
                    }
                }
            }
        }
        return dist;
    }

    template <typename Emit>
    void descend(const State& s, const std::vector<std::vector<Op>>& per_box, std::size_t i,
                 Edge& edge, std::uint64_t& used_arms, Emit&& emit) const {
        if (i == per_box.size()) {
            if (edge.empty()) return;
            State ns = s;
            for (const auto& op : edge) ns[op.box] = op.dest;
            // Reject post-step corner collisions among unplaced boxes.
            std::uint64_t occupied = 0;
            for (int corner : ns) {
                if (corner == -1) continue;
                const std::uint64_t bit = 1ull << corner;
                if (occupied & bit) return;
                occupied |= bit;
            }
            emit(edge, ns);
            return;
        }
        descend(s, per_box, i + 1, edge, used_arms, emit);  // this box stays
        for (const auto& op : per_box[i]) {
            const std::uint64_t bit = 1ull << op.arm;
            if (used_arms & bit) continue;  // one action per arm
            used_arms |= bit;
            edge.push_back(op);
            descend(s, per_box, i + 1, edge, used_arms, emit);
            edge.pop_back();
            used_arms &= ~bit;
        }
    }
};

// ---------------------------------------------------------------------------
// Warehouse: state is each robot's (position, carried box) plus each box's
// place. Successors exclude same-box picks, same-location stops, and
// (when enabled) adjacent swaps.

struct WarehouseProblem {
    int num_locations = 0;
    bool swap_collision = true;
    std::vector<int> slot;  // per box

    struct RobotPose {
        int pos = 0;       // kTargetRegion or location
        int carrying = -1; // box index
    };
    struct State {
        std::vector<RobotPose> robots;
        std::vector<int> box;  // 0 in slot, 1 carried, 2 delivered
    };
    // codes: 1 move_left, 2 move_right, 3 move_to loc_0, 4 pick, 5 place
    struct Op {
        int robot = 0;
        int code = 0;
        int box = -1;
    };
    using Edge = std::vector<Op>;

    explicit WarehouseProblem(const WarehouseState& s) {
        num_locations = s.num_locations;
        swap_collision = s.swap_collision;
        for (const auto& b : s.boxes) slot.push_back(b.slot_location);
    }

    State start_state(const WarehouseState& s) const {
        State st;
        for (const auto& r : s.robots) st.robots.push_back({r.position, r.carrying.value_or(-1)});
        for (const auto& b : s.boxes) {
            st.box.push_back(b.where == WarehouseState::BoxPlace::InSlot     ? 0
                             : b.where == WarehouseState::BoxPlace::Carried  ? 1
                                                                             : 2);
        }
        return st;
    }

    std::string key(const State& s) const {
        std::string k;
        k.reserve(s.robots.size() * 2 + s.box.size());
        for (const auto& r : s.robots) {
            k.push_back(static_cast<char>(r.pos + 2));
            k.push_back(static_cast<char>(r.carrying + 2));
        }
        for (int b : s.box) k.push_back(static_cast<char>(b));
        return k;
    }

    bool goal(const State& s) const {
        return std::all_of(s.box.begin(), s.box.end(), [](int b) { return b == 2; });
    }

    int heuristic(const State& s) const {
        const int n = static_cast<int>(s.robots.size());
        long total = 0;
        int worst = 0;
        for (std::size_t b = 0; b < s.box.size(); ++b) {
            int handling = 0;  // pick/carry/place steps by whichever robot handles it
            int reach = 0;     // steps before any robot can start handling
            if (s.box[b] == 0) {
                handling = slot[b] + 3;
                reach = num_locations + 2;
                for (const auto& r : s.robots) {
                    const int d = r.pos == kTargetRegion ? slot[b] + 1 : std::abs(r.pos - slot[b]);
                    reach = std::min(reach, d);
                }
            } else if (s.box[b] == 1) {
                for (const auto& r : s.robots) {
                    if (r.carrying == static_cast<int>(b)) {
                        handling = r.pos == kTargetRegion ? 1 : r.pos + 2;
                    }
                }
            }
            total += handling;
            worst = std::max(worst, handling + reach);
        }
        return std::max(worst, ceil_div(total, n));
    }

    template <typename Emit>
    void successors(const State& s, Emit&& emit) const {
        const int n = static_cast<int>(s.robots.size());
        std::vector<std::vector<Op>> options(n);
        for (int r = 0; r < n; ++r) {
            const auto& pose = s.robots[r];
            auto& ops = options[r];
            if (pose.pos == kTargetRegion) {
                if (pose.carrying >= 0) ops.push_back({r, 5, pose.carrying});
                ops.push_back({r, 3, -1});
            } else {
                ops.push_back({r, 1, -1});
                if (pose.pos + 1 < num_locations) ops.push_back({r, 2, -1});
                if (pose.carrying < 0) {
                    for (std::size_t b = 0; b < s.box.size(); ++b) {
                        if (s.box[b] == 0 && slot[b] == pose.pos) {
                            ops.push_back({r, 4, static_cast<int>(b)});
                        }
                    }
                }
            }
        }
        Edge edge;
        std::uint64_t picked = 0;
        product(s, options, 0, edge, picked, emit);
    }

private:
    static int moved_pos(const RobotPose& pose, int code) {
        switch (code) {
            case 1: return pose.pos == 0 ? kTargetRegion : pose.pos - 1;
            case 2: return pose.pos + 1;
            case 3: return 0;
            default: return pose.pos;
        }
    }

    template <typename Emit>
    void product(const State& s, const std::vector<std::vector<Op>>& options, std::size_t i,
                 Edge& edge, std::uint64_t& picked, Emit&& emit) const {
        if (i == options.size()) {
            if (edge.empty()) return;
            emit_checked(s, edge, emit);
            return;
        }
        product(s, options, i + 1, edge, picked, emit);  // robot i idles
        for (const auto& op : options[i]) {
            std::uint64_t bit = 0;
            if (op.code == 4) {
                bit = 1ull << op.box;
                if (picked & bit) continue;  // two robots picking one box
                picked |= bit;
            }
            edge.push_back(op);
            product(s, options, i + 1, edge, picked, emit);
            edge.pop_back();
            picked &= ~bit;
        }
    }

    template <typename Emit>
    void emit_checked(const State& s, const Edge& edge, Emit&& emit) const {
        State ns = s;
        for (const auto& op : edge) {
            auto& pose = ns.robots[op.robot];
            if (op.code == 4) {
                pose.carrying = op.box;
                ns.box[op.box] = 1;
            } else if (op.code == 5) {
                pose.carrying = -1;
                ns.box[op.box] = 2;
            } else {
                pose.pos = moved_pos(s.robots[op.robot], op.code);
            }
        }
        const int n = static_cast<int>(ns.robots.size());
        std::uint64_t occupied = 0;
        for (int r = 0; r < n; ++r) {
            const int p = ns.robots[r].pos;
            if (p == kTargetRegion) continue;
            const std::uint64_t bit = 1ull << p;
            if (occupied & bit) return;  // post-step co-location
            occupied |= bit;
        }
        if (swap_collision) {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    const int qi = s.robots[i].pos, qj = s.robots[j].pos;
                    const int pi = ns.robots[i].pos, pj = ns.robots[j].pos;
                    if (qi == pj && qj == pi && qi != pi && qi != kTargetRegion &&
                        qj != kTargetRegion) {
                        return;
                    }
                }
            }
        }
        emit(edge, ns);
    }
};

// ---------------------------------------------------------------------------
// BoxLift: a step lifts any subset of boxes for which the robots can be
// partitioned into groups that each out-lift their box. The optimum is a
// minimum partition of the unlifted set into feasible subsets, solved
// exactly by subset DP; no graph search is needed.

struct BoxLiftSolver {
    const BoxLiftState& s;
    const SearchLimits& limits;
    int num_boxes;
    std::uint64_t work = 0;

    BoxLiftSolver(const BoxLiftState& state, const SearchLimits& lim)
        : s(state), limits(lim), num_boxes(static_cast<int>(state.boxes.size())) {}

    // Can the team simultaneously lift every box in `subset`? On success,
    // groups[b] holds the robot mask assigned to box b.
    bool feasible(unsigned subset, std::vector<unsigned>* groups) {
        std::vector<int> order;  // heaviest first: tightest constraint first
        for (int b = 0; b < num_boxes; ++b) {
            if (subset & (1u << b)) order.push_back(b);
        }
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return s.boxes[a].weight > s.boxes[b].weight; });
        const unsigned all_robots = (1u << s.robots.size()) - 1;
        std::vector<unsigned> assigned(order.size(), 0);
        if (!assign(order, 0, all_robots, assigned)) return false;
        if (groups) {
            groups->assign(num_boxes, 0);
            for (std::size_t i = 0; i < order.size(); ++i) (*groups)[order[i]] = assigned[i];
        }
        return true;
    }

    std::vector<ActionAssignment> solve() {
        if (num_boxes > 20 || s.robots.size() > 20) {
            throw std::runtime_error("planner: boxlift too large");
        }
        unsigned remaining = 0;
        for (int b = 0; b < num_boxes; ++b) {
            if (!s.boxes[b].lifted) remaining |= 1u << b;
        }
        if (remaining == 0) return {};

        std::vector<bool> feas(remaining + 1, false);
        for (unsigned sub = remaining; sub; sub = (sub - 1) & remaining) {
            feas[sub] = feasible(sub, nullptr);
        }

        const int inf = num_boxes + 1;
        std::vector<int> dist(remaining + 1, inf);
        std::vector<unsigned> via(remaining + 1, 0);
        dist[0] = 0;
        for (unsigned mask = 1; mask <= remaining; ++mask) {
            if ((mask & remaining) != mask) continue;
            for (unsigned sub = mask; sub; sub = (sub - 1) & mask) {
                if (!feas[sub]) continue;
                if (dist[mask ^ sub] + 1 < dist[mask]) {
                    dist[mask] = dist[mask ^ sub] + 1;
                    via[mask] = sub;
                }
            }
        }
        if (dist[remaining] >= inf) {
            throw std::runtime_error("planner: boxlift instance is unliftable");
        }

        std::vector<ActionAssignment> plan;
        for (unsigned mask = remaining; mask;) {
            const unsigned sub = via[mask];
            std::vector<unsigned> groups;
            feasible(sub, &groups);
            ActionAssignment step;
            for (int b = 0; b < num_boxes; ++b) {
                for (std::size_t r = 0; r < s.robots.size(); ++r) {
                    if (groups[b] & (1u << r)) {
                        step.set(static_cast<RobotId>(r),
                                 Action{"lift", {"box_" + std::to_string(b)}});
                    }
                }
            }
            plan.push_back(std::move(step));
            mask ^= sub;
        }
        return plan;
    }

private:
    // Assign disjoint robot groups to order[i..), minimal groups only.
    bool assign(const std::vector<int>& order, std::size_t i, unsigned avail,
                std::vector<unsigned>& assigned) {
        if (i == order.size()) return true;
        if (++work > limits.max_expanded) search_overflow("expansion");
        const int weight = s.boxes[order[i]].weight;
        long avail_total = 0;
        long needed = 0;
        for (std::size_t r = 0; r < s.robots.size(); ++r) {
            if (avail & (1u << r)) avail_total += s.robots[r].capability;
        }
        for (std::size_t j = i; j < order.size(); ++j) {
            needed += s.boxes[order[j]].weight + (s.strict_lift ? 1 : 0);
        }
        if (avail_total < needed) return false;

        for (unsigned grp = avail; grp; grp = (grp - 1) & avail) {
            long total = 0;
            for (std::size_t r = 0; r < s.robots.size(); ++r) {
                if (grp & (1u << r)) total += s.robots[r].capability;
            }
            const bool lifts = s.strict_lift ? total > weight : total >= weight;
            if (!lifts) continue;
            // Minimality: dropping any member must break the lift.
            bool minimal = true;
            for (std::size_t r = 0; r < s.robots.size() && minimal; ++r) {
                if (!(grp & (1u << r))) continue;
                const long rest = total - s.robots[r].capability;
                if (s.strict_lift ? rest > weight : rest >= weight) minimal = false;
            }
            if (!minimal) continue;
            assigned[i] = grp;
            if (assign(order, i + 1, avail & ~grp, assigned)) return true;
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// Plan conversion: internal edges back to named joint assignments.

std::vector<ActionAssignment> solve_boxnet1(const BoxNet1State& s, const SearchLimits& limits) {
    if (s.rows * s.cols > 200) throw std::runtime_error("planner: grid too large");
    BoxNet1Problem prob(s);
    const auto path = astar_plan(prob, prob.start_state(s), limits);
    std::vector<ActionAssignment> plan;
    for (const auto& [before, edge] : path) {
        ActionAssignment step;
        for (const auto& op : edge) {
            const int arm = before[op.box];  // the arm over the box's cell
            step.set(arm, move_action(prob.box_names[op.box],
                                      op.dest == -1 ? prob.target_names[op.box]
                                                    : cell_name_by_index(op.dest, s.cols)));
        }
        plan.push_back(std::move(step));
    }
    return plan;
}

std::vector<ActionAssignment> solve_boxnet2(const BoxNet2State& s, const SearchLimits& limits) {
    // Occupancy and arm sets live in 64-bit masks.
    if ((s.rows + 1) * (s.cols + 1) > 63 || s.rows * s.cols > 63) {
        throw std::runtime_error("planner: grid too large");
    }
    BoxNet2Problem prob(s);
    const auto path = astar_plan(prob, prob.start_state(s), limits);
    std::vector<ActionAssignment> plan;
    for (const auto& [before, edge] : path) {
        ActionAssignment step;
        for (const auto& op : edge) {
            step.set(op.arm, move_action(prob.box_names[op.box],
                                         op.dest == -1 ? prob.target_names[op.box]
                                                       : corner_name_by_index(op.dest, s.cols)));
        }
        plan.push_back(std::move(step));
    }
    return plan;
}

std::vector<ActionAssignment> solve_warehouse(const WarehouseState& s, const SearchLimits& limits) {
    if (s.num_locations > 63 || s.boxes.size() > 63) {
        throw std::runtime_error("planner: warehouse too large");
    }
    WarehouseProblem prob(s);
    const auto path = astar_plan(prob, prob.start_state(s), limits);
    std::vector<ActionAssignment> plan;
    for (const auto& path_step : path) {
        ActionAssignment step;
        for (const auto& op : path_step.second) {
            switch (op.code) {
                case 1: step.set(op.robot, Action{"move_left", {}}); break;
                case 2: step.set(op.robot, Action{"move_right", {}}); break;
                case 3: step.set(op.robot, Action{"move_to", {location_name(0)}}); break;
                case 4:
                    step.set(op.robot, Action{"pick", {"box_" + std::to_string(op.box)}});
                    break;
                case 5:
                    step.set(op.robot, Action{"place", {"box_" + std::to_string(op.box)}});
                    break;
            }
        }
        plan.push_back(std::move(step));
    }
    return plan;
}

}  // namespace

std::vector<ActionAssignment> optimal_joint_plan(const EnvState& state,
                                                 const SearchLimits& limits) {
    if (const auto* s = std::get_if<BoxNet1State>(&state)) return solve_boxnet1(*s, limits);
    if (const auto* s = std::get_if<BoxNet2State>(&state)) return solve_boxnet2(*s, limits);
    if (const auto* s = std::get_if<WarehouseState>(&state)) return solve_warehouse(*s, limits);
    BoxLiftSolver solver(std::get<BoxLiftState>(state), limits);
    return solver.solve();
}

int optimal_steps(const EnvState& state, const SearchLimits& limits) {
    return static_cast<int>(optimal_joint_plan(state, limits).size());
}

}  // namespace mrtp
