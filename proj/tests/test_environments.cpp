// Environment dynamics on hand-built micro states: every expected menu,
// transition, collision, and piece of feedback below was worked out by
// hand from the rules and frozen here.

#include <algorithm>
#include <string>
#include <vector>

#include <doctest.h>

#include "mrtp/env.hpp"
#include "mrtp/scenario.hpp"
#include "mrtp/util.hpp"

using namespace mrtp;

namespace {

BoxNet1State tiny_boxnet1() {
    BoxNet1State s;
    s.rows = 1;
    s.cols = 2;
    s.boxes = {{"blue", 0, false}};
    s.goals = {{"blue", 1}};
    return s;
}

BoxNet2State tiny_boxnet2() {
    // One cell; its corners are vertices 0..3 (stride 2).
    BoxNet2State s;
    s.rows = 1;
    s.cols = 1;
    s.boxes = {{"blue", 0, false}, {"cyan", 3, false}};
    s.goals = {{"blue", 0}, {"cyan", 0}};
    return s;
}

WarehouseState tiny_warehouse() {
    WarehouseState s;
    s.num_locations = 3;
    s.robots = {{0, std::nullopt}, {2, std::nullopt}};
    s.boxes = {{0, WarehouseState::BoxPlace::InSlot}, {2, WarehouseState::BoxPlace::InSlot}};
    return s;
}

BoxLiftState tiny_boxlift() {
    BoxLiftState s;
    s.robots = {{3}, {2}, {5}};
    s.boxes = {{2, 4, false}, {1, 9, false}};
    return s;
}

std::vector<std::string> renders(const std::vector<Action>& actions) {
    std::vector<std::string> out;
    for (const auto& a : actions) out.push_back(a.render());
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// BoxNet1

TEST_CASE("boxnet1 menus list per-box neighbor moves and in-cell target moves") {
    const BoxNet1State s = tiny_boxnet1();
    // Cell 0 has the box; its only neighbor in a 1x2 grid is cell 1.
    CHECK(renders(available_actions(s, 0)) ==
          std::vector<std::string>{"move(box_blue, cell_0_1)", "do_nothing()"});
    // Cell 1 holds no box, so only do_nothing.
    CHECK(renders(available_actions(s, 1)) == std::vector<std::string>{"do_nothing()"});
    CHECK_THROWS_AS(available_actions(s, 2), std::out_of_range);
    CHECK_THROWS_AS(available_actions(s, -1), std::out_of_range);
}

TEST_CASE("boxnet1 moves a box across cells and onto its target") {
    const BoxNet1State s = tiny_boxnet1();
    ActionAssignment step1;
    step1.set(0, move_action("box_blue", "cell_0_1"));
    const StepOutcome o1 = apply_joint_action(s, step1, {});
    REQUIRE(o1.result == StepResult::Advanced);
    const auto& s1 = std::get<BoxNet1State>(o1.next);
    CHECK(s1.boxes[0].cell == 1);
    CHECK_FALSE(s1.boxes[0].placed);
    CHECK(s1.step == 1);
    CHECK_FALSE(is_goal(s1));

    // Now cell 1's arm sees the neighbor move back plus the target move.
    CHECK(renders(available_actions(s1, 1)) ==
          std::vector<std::string>{"move(box_blue, cell_0_0)", "move(box_blue, target_blue)",
                                   "do_nothing()"});

    ActionAssignment step2;
    step2.set(1, move_action("box_blue", "target_blue"));
    const StepOutcome o2 = apply_joint_action(s1, step2, {});
    REQUIRE(o2.result == StepResult::Advanced);
    const auto& s2 = std::get<BoxNet1State>(o2.next);
    CHECK(s2.boxes[0].placed);
    CHECK(is_goal(s2));
    // A placed box disappears from every menu.
    CHECK(renders(available_actions(s2, 1)) == std::vector<std::string>{"do_nothing()"});
}

TEST_CASE("boxnet1 rejects off-menu actions and unknown robots as invalid") {
    const BoxNet1State s = tiny_boxnet1();
    ActionAssignment bad;
    bad.set(1, move_action("box_blue", "cell_0_0"));  // box is not in robot1's cell
    const StepOutcome o = apply_joint_action(s, bad, {});
    CHECK(o.result == StepResult::Invalid);
    CHECK(std::get<BoxNet1State>(o.next) == s);  // unchanged on invalid
    CHECK(o.executed.empty());

    ActionAssignment unknown;
    unknown.set(7, do_nothing_action());
    CHECK(apply_joint_action(s, unknown, {}).result == StepResult::Invalid);
}

TEST_CASE("boxnet1 noise drops the action but still advances the step") {
    const BoxNet1State s = tiny_boxnet1();
    ActionAssignment step;
    step.set(0, move_action("box_blue", "cell_0_1"));
    const StepOutcome o = apply_joint_action(s, step, {1.0, 3});
    REQUIRE(o.result == StepResult::Advanced);
    const auto& s1 = std::get<BoxNet1State>(o.next);
    CHECK(s1.boxes[0].cell == 0);  // move failed, box stayed
    CHECK(s1.step == 1);
    REQUIRE(o.executed.size() == 2);  // every robot reports, idle ones as do_nothing
    CHECK_FALSE(o.executed[0].ok);
    CHECK(o.executed[1].action.is_do_nothing());
}

TEST_CASE("boxnet1 empty assignment idles everyone") {
    const BoxNet1State s = tiny_boxnet1();
    const StepOutcome o = apply_joint_action(s, {}, {});
    REQUIRE(o.result == StepResult::Advanced);
    const auto& s1 = std::get<BoxNet1State>(o.next);
    CHECK(s1.boxes[0].cell == 0);
    CHECK(s1.step == 1);
}

// ---------------------------------------------------------------------------
// BoxNet2

TEST_CASE("boxnet2 menus move boxes between own-cell corners and to targets") {
    const BoxNet2State s = tiny_boxnet2();
    // Both boxes sit on corners of the only cell. blue at vertex 0 can go
    // to vertices 1, 2, 3; cyan at vertex 3 can go to 0, 1, 2; both goals
    // are in this cell.
    CHECK(renders(available_actions(s, 0)) ==
          std::vector<std::string>{
              "move(box_blue, corner_0_1)", "move(box_blue, corner_1_0)",
              "move(box_blue, corner_1_1)", "move(box_blue, target_blue)",
              "move(box_cyan, corner_0_0)", "move(box_cyan, corner_0_1)",
              "move(box_cyan, corner_1_0)", "move(box_cyan, target_cyan)", "do_nothing()"});
}

TEST_CASE("boxnet2 detects post-step corner collisions and leaves state unchanged") {
    const BoxNet2State s = tiny_boxnet2();
    ActionAssignment crash;
    crash.set(0, move_action("box_blue", "corner_1_1"));  // cyan already there
    const StepOutcome o = apply_joint_action(s, crash, {});
    CHECK(o.result == StepResult::Collision);
    CHECK(std::get<BoxNet2State>(o.next) == s);
    CHECK(contains(o.detail, "box_blue"));
    CHECK(contains(o.detail, "box_cyan"));
    CHECK(contains(o.detail, "corner_1_1"));
}

TEST_CASE("boxnet2 placing removes the box from the lattice") {
    const BoxNet2State s = tiny_boxnet2();
    ActionAssignment place;
    place.set(0, move_action("box_blue", "target_blue"));
    const StepOutcome o = apply_joint_action(s, place, {});
    REQUIRE(o.result == StepResult::Advanced);
    const auto& s1 = std::get<BoxNet2State>(o.next);
    CHECK(s1.boxes[0].placed);
    CHECK(s1.boxes[0].corner == -1);
    CHECK_FALSE(is_goal(s1));  // cyan still loose

    ActionAssignment place2;
    place2.set(0, move_action("box_cyan", "target_cyan"));
    const StepOutcome o2 = apply_joint_action(s1, place2, {});
    REQUIRE(o2.result == StepResult::Advanced);
    CHECK(is_goal(std::get<BoxNet2State>(o2.next)));
}

TEST_CASE("boxnet2 shared-corner box can be served by both arms but not at once") {
    // 1x2 grid: vertices have stride 3. Cell 0 owns {0,1,3,4}, cell 1 owns
    // {1,2,4,5}; vertex 1 is shared.
    BoxNet2State s;
    s.rows = 1;
    s.cols = 2;
    s.boxes = {{"blue", 1, false}};
    s.goals = {{"blue", 0}};
    const auto menu0 = renders(available_actions(s, 0));
    const auto menu1 = renders(available_actions(s, 1));
    CHECK(std::find(menu0.begin(), menu0.end(), "move(box_blue, corner_0_0)") != menu0.end());
    CHECK(std::find(menu1.begin(), menu1.end(), "move(box_blue, corner_0_2)") != menu1.end());
    // The target move is offered only by the arm whose cell has the goal.
    CHECK(std::find(menu0.begin(), menu0.end(), "move(box_blue, target_blue)") != menu0.end());
    CHECK(std::find(menu1.begin(), menu1.end(), "move(box_blue, target_blue)") == menu1.end());

    ActionAssignment both;
    both.set(0, move_action("box_blue", "corner_0_0"));
    both.set(1, move_action("box_blue", "corner_0_2"));
    const StepOutcome o = apply_joint_action(s, both, {});
    CHECK(o.result == StepResult::Invalid);
    CHECK(contains(o.detail, "box_blue"));
}

// ---------------------------------------------------------------------------
// Warehouse

TEST_CASE("warehouse menus depend on position and carrying") {
    const WarehouseState s = tiny_warehouse();
    CHECK(renders(available_actions(s, 0)) ==
          std::vector<std::string>{"move_left()", "move_right()", "pick(box_0)", "do_nothing()"});
    // Rightmost location: no move_right.
    CHECK(renders(available_actions(s, 1)) ==
          std::vector<std::string>{"move_left()", "pick(box_1)", "do_nothing()"});
}

TEST_CASE("warehouse pick, enter target region, place, deliver") {
    WarehouseState s = tiny_warehouse();
    ActionAssignment pick;
    pick.set(0, {"pick", {"box_0"}});
    StepOutcome o = apply_joint_action(s, pick, {});
    REQUIRE(o.result == StepResult::Advanced);
    s = std::get<WarehouseState>(o.next);
    CHECK(s.robots[0].carrying == 0);
    CHECK(s.boxes[0].where == WarehouseState::BoxPlace::Carried);
    // Carrying robots cannot pick again.
    CHECK(renders(available_actions(s, 0)) ==
          std::vector<std::string>{"move_left()", "move_right()", "do_nothing()"});

    ActionAssignment enter;
    enter.set(0, {"move_left", {}});
    o = apply_joint_action(s, enter, {});
    REQUIRE(o.result == StepResult::Advanced);
    s = std::get<WarehouseState>(o.next);
    CHECK(s.robots[0].position == kTargetRegion);
    CHECK(renders(available_actions(s, 0)) ==
          std::vector<std::string>{"move_to(loc_0)", "place(box_0)", "do_nothing()"});

    ActionAssignment place;
    place.set(0, {"place", {"box_0"}});
    o = apply_joint_action(s, place, {});
    REQUIRE(o.result == StepResult::Advanced);
    s = std::get<WarehouseState>(o.next);
    CHECK(s.boxes[0].where == WarehouseState::BoxPlace::Delivered);
    CHECK_FALSE(s.robots[0].carrying.has_value());
    CHECK_FALSE(is_goal(s));  // box_1 still slotted

    // Leaving the target region returns to loc_0.
    ActionAssignment leave;
    leave.set(0, {"move_to", {"loc_0"}});
    o = apply_joint_action(s, leave, {});
    REQUIRE(o.result == StepResult::Advanced);
    CHECK(std::get<WarehouseState>(o.next).robots[0].position == 0);
}

TEST_CASE("warehouse co-location after the step is a collision") {
    WarehouseState s = tiny_warehouse();
    ActionAssignment crash;
    crash.set(0, {"move_right", {}});  // 0 -> 1
    crash.set(1, {"move_left", {}});   // 2 -> 1
    const StepOutcome o = apply_joint_action(s, crash, {});
    CHECK(o.result == StepResult::Collision);
    CHECK(std::get<WarehouseState>(o.next) == s);
    CHECK(contains(o.detail, "loc_1"));
}

TEST_CASE("warehouse swap collisions honor the swap_collision flag") {
    WarehouseState s = tiny_warehouse();
    s.robots[1].position = 1;  // adjacent to robot0
    ActionAssignment swap;
    swap.set(0, {"move_right", {}});
    swap.set(1, {"move_left", {}});
    CHECK(apply_joint_action(s, swap, {}).result == StepResult::Collision);

    s.swap_collision = false;
    const StepOutcome o = apply_joint_action(s, swap, {});
    REQUIRE(o.result == StepResult::Advanced);
    CHECK(std::get<WarehouseState>(o.next).robots[0].position == 1);
    CHECK(std::get<WarehouseState>(o.next).robots[1].position == 0);
}

TEST_CASE("warehouse target region is exempt from collisions") {
    WarehouseState s = tiny_warehouse();
    s.robots[0].position = kTargetRegion;
    s.robots[1].position = 0;
    ActionAssignment enter;
    enter.set(1, {"move_left", {}});  // joins robot0 in the target region
    const StepOutcome o = apply_joint_action(s, enter, {});
    REQUIRE(o.result == StepResult::Advanced);
    CHECK(std::get<WarehouseState>(o.next).robots[1].position == kTargetRegion);
}

TEST_CASE("warehouse two robots picking one box is invalid") {
    WarehouseState s = tiny_warehouse();
    s.robots[1].position = 0;  // both robots at the box_0 slot
    ActionAssignment grab;
    grab.set(0, {"pick", {"box_0"}});
    grab.set(1, {"pick", {"box_0"}});
    const StepOutcome o = apply_joint_action(s, grab, {});
    CHECK(o.result == StepResult::Invalid);
    CHECK(contains(o.detail, "box_0"));
}

TEST_CASE("warehouse goal is every box delivered") {
    WarehouseState s = tiny_warehouse();
    CHECK_FALSE(is_goal(s));
    s.boxes[0].where = WarehouseState::BoxPlace::Delivered;
    s.boxes[1].where = WarehouseState::BoxPlace::Delivered;
    CHECK(is_goal(s));
}

// ---------------------------------------------------------------------------
// BoxLift

TEST_CASE("boxlift menus offer every unlifted box to every robot") {
    const BoxLiftState s = tiny_boxlift();
    for (RobotId r = 0; r < 3; ++r) {
        CHECK(renders(available_actions(s, r)) ==
              std::vector<std::string>{"lift(box_0)", "lift(box_1)", "do_nothing()"});
    }
    BoxLiftState done = s;
    done.boxes[0].lifted = true;
    CHECK(renders(available_actions(done, 0)) ==
          std::vector<std::string>{"lift(box_1)", "do_nothing()"});
}

TEST_CASE("boxlift lifts exactly when combined capability beats the weight") {
    const BoxLiftState s = tiny_boxlift();
    // Capabilities 3+2=5 > weight 4 lifts box_0; capability 5 < weight 9
    // leaves box_1 down.
    ActionAssignment a;
    a.set(0, {"lift", {"box_0"}});
    a.set(1, {"lift", {"box_0"}});
    a.set(2, {"lift", {"box_1"}});
    const StepOutcome o = apply_joint_action(s, a, {});
    REQUIRE(o.result == StepResult::Advanced);
    const auto& s1 = std::get<BoxLiftState>(o.next);
    CHECK(s1.boxes[0].lifted);
    CHECK_FALSE(s1.boxes[1].lifted);
    REQUIRE(s1.last_feedback.size() == 2);
    CHECK(s1.last_feedback[0] == LiftAttempt{"box_0", true});
    CHECK(s1.last_feedback[1] == LiftAttempt{"box_1", false});

    // Whole team on box_1: 3+2+5=10 > 9.
    ActionAssignment all;
    for (RobotId r = 0; r < 3; ++r) all.set(r, {"lift", {"box_1"}});
    const auto& s2 = std::get<BoxLiftState>(apply_joint_action(s1, all, {}).next);
    CHECK(s2.boxes[1].lifted);
    CHECK(is_goal(s2));
}

TEST_CASE("boxlift strict flag decides the equality boundary") {
    BoxLiftState s = tiny_boxlift();
    s.boxes[0].weight = 5;  // exactly robot0 + robot1
    ActionAssignment a;
    a.set(0, {"lift", {"box_0"}});
    a.set(1, {"lift", {"box_0"}});

    CHECK_FALSE(std::get<BoxLiftState>(apply_joint_action(s, a, {}).next).boxes[0].lifted);
    s.strict_lift = false;
    CHECK(std::get<BoxLiftState>(apply_joint_action(s, a, {}).next).boxes[0].lifted);
}

TEST_CASE("boxlift facts expose sizes and feedback but never weights") {
    BoxLiftState s = tiny_boxlift();
    s.last_feedback = {{"box_0", false}};
    const StateFacts facts = state_facts(s);
    const std::string dump = facts_to_json(facts).dump();
    CHECK_FALSE(contains(dump, "weight"));
    CHECK(contains(dump, "size"));
    CHECK(contains(dump, "capability"));
    CHECK(contains(facts.render_objects(), "last_attempt=failed"));
    const std::string rendered = facts.render_objects() + facts.render_robots();
    CHECK_FALSE(contains(rendered, "weight"));
}

// ---------------------------------------------------------------------------
// Cross-environment properties

TEST_CASE("menus are sorted with do_nothing last in every environment") {
    const std::vector<EnvState> states = {tiny_boxnet1(), tiny_boxnet2(), tiny_warehouse(),
                                          tiny_boxlift()};
    for (const EnvState& s : states) {
        for (RobotId r = 0; r < robot_count(s); ++r) {
            const auto menu = available_actions(s, r);
            REQUIRE_FALSE(menu.empty());
            CHECK(menu.back().is_do_nothing());
            CHECK(std::is_sorted(menu.begin(), menu.end(), action_order));
            CHECK(std::count_if(menu.begin(), menu.end(),
                                [](const Action& a) { return a.is_do_nothing(); }) == 1);
        }
    }
}

TEST_CASE("serialization round-trips every environment") {
    const std::vector<EnvState> states = {tiny_boxnet1(), tiny_boxnet2(), tiny_warehouse(),
                                          tiny_boxlift()};
    for (const EnvState& s : states) {
        const json j = state_to_json(s);
        const EnvState back = state_from_json(j);
        CHECK(state_digest(back) == state_digest(s));
        CHECK(state_to_json(back) == j);
    }
}

TEST_CASE("step_result_name") {
    CHECK(step_result_name(StepResult::Advanced) == "advanced");
    CHECK(step_result_name(StepResult::Collision) == "collision");
    CHECK(step_result_name(StepResult::Invalid) == "invalid");
}

// ---------------------------------------------------------------------------
// Scenario generation

TEST_CASE("scenario generation is deterministic and solvable") {
    for (const EnvKind env :
         {EnvKind::BoxNet1, EnvKind::BoxNet2, EnvKind::Warehouse, EnvKind::BoxLift}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ScenarioSpec spec;
            spec.env = env;
            spec.robot_count = 4;
            spec.seed = seed;
            const EnvState a = generate_scenario(spec);
            const EnvState b = generate_scenario(spec);
            CAPTURE(env_kind_name(env));
            CAPTURE(seed);
            CHECK(state_digest(a) == state_digest(b));
            CHECK(robot_count(a) == 4);
            CHECK(scenario_solvable(a));
            CHECK_FALSE(is_goal(a));
        }
    }
}

TEST_CASE("different seeds change the generated state") {
    ScenarioSpec a;
    a.env = EnvKind::Warehouse;
    a.robot_count = 4;
    a.seed = 1;
    ScenarioSpec b = a;
    b.seed = 2;
    CHECK(state_digest(generate_scenario(a)) != state_digest(generate_scenario(b)));
}

TEST_CASE("inconsistent scenario specs are rejected") {
    ScenarioSpec grid;
    grid.env = EnvKind::BoxNet1;
    grid.robot_count = 4;
    grid.grid_rows = 3;
    grid.grid_cols = 3;  // 9 cells for 4 robots
    CHECK_THROWS_AS(generate_scenario(grid), std::invalid_argument);

    ScenarioSpec crowded;
    crowded.env = EnvKind::BoxNet2;
    crowded.robot_count = 1;
    crowded.grid_rows = 1;
    crowded.grid_cols = 1;
    crowded.boxes = 5;  // only 4 corners exist
    CHECK_THROWS_AS(generate_scenario(crowded), std::invalid_argument);
}

TEST_CASE("default schedules and grid dims") {
    CHECK(default_robot_schedule(EnvKind::BoxNet1) == std::vector<int>{4, 8, 16, 32});
    CHECK(default_robot_schedule(EnvKind::BoxNet2) == std::vector<int>{4, 8, 16, 32});
    CHECK(default_robot_schedule(EnvKind::Warehouse) == std::vector<int>{4, 6, 8, 10});
    CHECK(default_robot_schedule(EnvKind::BoxLift) == std::vector<int>{4, 6, 8, 10});
    CHECK(default_grid_dims(4) == std::pair<int, int>{2, 2});
    CHECK(default_grid_dims(8) == std::pair<int, int>{2, 4});
    CHECK(default_grid_dims(16) == std::pair<int, int>{4, 4});
    CHECK(default_grid_dims(32) == std::pair<int, int>{4, 8});
}

TEST_CASE("boxlift scenarios keep every box liftable by the full team") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioSpec spec;
        spec.env = EnvKind::BoxLift;
        spec.robot_count = 4;
        spec.seed = seed;
        const auto s = std::get<BoxLiftState>(generate_scenario(spec));
        long team = 0;
        for (const auto& r : s.robots) team += r.capability;
        for (const auto& b : s.boxes) {
            CHECK(b.weight >= 1);
            CHECK(b.weight < team);  // strict lift by the whole team always works
        }
    }
}
