// Core building blocks: hashing, RNG, actions, assignments, noise.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mrtp/core.hpp"
#include "mrtp/util.hpp"

using namespace mrtp;

namespace {

// Independent FNV-1a reference written in a deliberately different shape
// from the library version: byte-array input, index loop, explicit masks.
std::uint64_t fnv1a_reference(const std::string& s) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < s.size(); ++i) {
        hash = hash ^ static_cast<std::uint64_t>(static_cast<unsigned char>(s[i]));
        hash = (hash * 0x100000001b3ull) & 0xffffffffffffffffull;
    }
    return hash;
}

}  // namespace

TEST_CASE("fnv1a matches an independent reference and published vectors") {
    // Published FNV-1a 64 test vectors.
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);

    const std::vector<std::string> samples = {
        "", "a", "ab", "robot0", "boxnet1-cmas-r4-t0", "The quick brown fox", "\n\n", "0123456789",
    };
    for (const auto& s : samples) {
        CAPTURE(s);
        CHECK(fnv1a(s) == fnv1a_reference(s));
    }
}

TEST_CASE("hex64 renders fixed-width lowercase hex") {
    CHECK(hex64(0) == "0000000000000000");
    CHECK(hex64(0xdeadbeefull) == "00000000deadbeef");
    CHECK(hex64(~0ull) == "ffffffffffffffff");
    CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("unit_from_hash lands in [0,1) and is deterministic") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t h = rng.next();
        const double u = unit_from_hash(h);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(unit_from_hash(h) == u);
    }
    CHECK(unit_from_hash(0) == 0.0);
}

TEST_CASE("Rng is reproducible and uniform_int respects inclusive bounds") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng r(5);
    std::set<int> seen;
    for (int i = 0; i < 1000; ++i) {
        const int v = r.uniform_int(3, 7);
        CHECK(v >= 3);
        CHECK(v <= 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);  // all five values show up over 1000 draws
    CHECK(r.uniform_int(4, 4) == 4);
    CHECK_THROWS_AS(r.uniform_int(2, 1), std::invalid_argument);
}

TEST_CASE("Rng shuffle permutes and sampling is distinct and in range") {
    Rng r(11);
    std::vector<int> v = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> orig = v;
    r.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == orig);

    const std::vector<int> sample = r.sample_without_replacement(10, 19, 6);
    CHECK(sample.size() == 6);
    std::set<int> distinct(sample.begin(), sample.end());
    CHECK(distinct.size() == 6);
    for (const int s : sample) {
        CHECK(s >= 10);
        CHECK(s <= 19);
    }
    CHECK_THROWS_AS(r.sample_without_replacement(0, 2, 4), std::invalid_argument);
}

TEST_CASE("string helpers") {
    CHECK(trim("  x \t\n") == "x");
    CHECK(trim("") == "");
    CHECK(split_lines("a\nb\nc") == std::vector<std::string>{"a", "b", "c"});
    CHECK(join({"a", "b", "c"}, " | ") == "a | b | c");
    CHECK(join({}, ",") == "");
    CHECK(contains("DISAGREE: no", "AGREE"));
    CHECK_FALSE(contains("fine", "AGREE"));
}

TEST_CASE("write_file creates parent directories and read_file round-trips") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "mrtp_util_test";
    fs::remove_all(dir);
    const std::string path = (dir / "nested" / "f.txt").string();
    write_file(path, "hello\nworld\n");
    CHECK(read_file(path) == "hello\nworld\n");
    CHECK_THROWS(read_file((dir / "missing.txt").string()));
    fs::remove_all(dir);
}

TEST_CASE("actions render canonically") {
    CHECK(do_nothing_action().render() == "do_nothing()");
    CHECK(do_nothing_action().is_do_nothing());
    const Action m = move_action("box_blue", "cell_0_1");
    CHECK(m.render() == "move(box_blue, cell_0_1)");
    CHECK_FALSE(m.is_do_nothing());
    CHECK(Action{"pick", {"box_3"}}.render() == "pick(box_3)");
    CHECK(Action{"move_left", {}}.render() == "move_left()");
}

TEST_CASE("action_order sorts do_nothing last, then by kind and params") {
    std::vector<Action> actions = {
        do_nothing_action(),
        move_action("box_cyan", "cell_0_0"),
        {"lift", {"box_0"}},
        move_action("box_blue", "cell_0_1"),
        move_action("box_blue", "cell_0_0"),
        {"pick", {"box_1"}},
    };
    std::sort(actions.begin(), actions.end(), action_order);
    CHECK(actions.back().is_do_nothing());
    for (std::size_t i = 0; i + 2 < actions.size(); ++i) {
        const auto key = [](const Action& a) { return std::pair(a.kind, a.params); };
        CHECK(key(actions[i]) <= key(actions[i + 1]));
    }
    CHECK(actions[0].kind == "lift");
    CHECK(actions[1] == move_action("box_blue", "cell_0_0"));
    CHECK(actions[2] == move_action("box_blue", "cell_0_1"));
}

TEST_CASE("ActionAssignment keeps one sorted entry per robot") {
    ActionAssignment a;
    CHECK(a.empty());
    a.set(3, move_action("box_blue", "cell_0_0"));
    a.set(1, do_nothing_action());
    a.set(3, move_action("box_blue", "cell_0_1"));  // replaces
    CHECK(a.entries().size() == 2);
    CHECK(a.entries()[0].first == 1);
    CHECK(a.entries()[1].first == 3);
    REQUIRE(a.find(3) != nullptr);
    CHECK(a.find(3)->params[1] == "cell_0_1");
    CHECK(a.find(2) == nullptr);

    ActionAssignment b;
    b.set(1, do_nothing_action());
    b.set(3, move_action("box_blue", "cell_0_1"));
    CHECK(a == b);
}

TEST_CASE("robot naming") {
    CHECK(robot_name(0) == "robot0");
    CHECK(robot_name(12) == "robot12");
}

TEST_CASE("ExecutionNoise edge probabilities and determinism") {
    const ExecutionNoise never{0.0, 99};
    const ExecutionNoise always{1.0, 99};
    for (int step = 0; step < 20; ++step) {
        for (RobotId r = 0; r < 5; ++r) {
            CHECK_FALSE(never.fails(step, r));
            CHECK(always.fails(step, r));
        }
    }
    const ExecutionNoise a{0.4, 7};
    const ExecutionNoise b{0.4, 7};
    const ExecutionNoise c{0.4, 8};
    int agree_ab = 0;
    int differ_ac = 0;
    for (int step = 0; step < 200; ++step) {
        for (RobotId r = 0; r < 4; ++r) {
            if (a.fails(step, r) == b.fails(step, r)) ++agree_ab;
            if (a.fails(step, r) != c.fails(step, r)) ++differ_ac;
        }
    }
    CHECK(agree_ab == 800);  // same seed, same draws
    CHECK(differ_ac > 0);    // different seed actually changes outcomes
}

TEST_CASE("ExecutionNoise empirical rate tracks the configured probability") {
    const ExecutionNoise noise{0.3, 2024};
    int fails = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        if (noise.fails(i, i % 7)) ++fails;
    }
    const double rate = static_cast<double>(fails) / trials;
    // 6-sigma band around 0.3 for 20000 Bernoulli draws is ~ +/- 0.02.
    CHECK(rate > 0.28);
    CHECK(rate < 0.32);
}
