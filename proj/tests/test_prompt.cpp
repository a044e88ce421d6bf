// Prompt assembly: token counting, templates, fixed section order, history
// modes, and the sliding window that enforces the prompt budget.

#include <string>
#include <vector>

#include <doctest.h>

#include "mrtp/env.hpp"
#include "mrtp/prompt.hpp"
#include "mrtp/util.hpp"

using namespace mrtp;

namespace {

StateFacts tiny_facts() {
    BoxNet1State s;
    s.rows = 1;
    s.cols = 2;
    s.boxes = {{"blue", 0, false}};
    s.goals = {{"blue", 1}};
    return state_facts(s);
}

PromptInputs base_inputs() {
    PromptInputs in;
    in.task = task_description(EnvKind::BoxNet1);
    in.facts = tiny_facts();
    in.mode = StepHistoryMode::FullHistory;
    in.role.central = true;
    return in;
}

HistoryEntry entry(int step) {
    HistoryEntry e;
    e.step = step;
    e.state_summary = "box_blue at cell_0_0 (entry " + std::to_string(step) + ")";
    e.actions_summary = "robot0 move(box_blue, cell_0_1)";
    e.dialogue = {{"central", "moving the blue box now, step " + std::to_string(step)}};
    e.feedback = "";
    return e;
}

}  // namespace

TEST_CASE("default token counter rounds bytes/4 up") {
    const TokenCounter c;
    CHECK(c.scheme() == "chars4");
    CHECK(c.count("") == 0);
    CHECK(c.count("abc") == 1);
    CHECK(c.count("abcd") == 1);
    CHECK(c.count("abcde") == 2);
    CHECK(c.count(std::string(4000, 'x')) == 1000);
    CHECK(c.count(std::string(4001, 'x')) == 1001);
}

TEST_CASE("custom token counter is used verbatim") {
    const TokenCounter words("words", [](std::string_view text) {
        int n = text.empty() ? 0 : 1;
        for (const char ch : text) {
            if (ch == ' ') ++n;
        }
        return n;
    });
    CHECK(words.scheme() == "words");
    CHECK(words.count("one two three") == 3);
}

TEST_CASE("render_template substitutes and rejects unbound placeholders") {
    CHECK(render_template("a {{x}} b {{y}} {{x}}", {{"x", "1"}, {"y", "2"}}) == "a 1 b 2 1");
    CHECK(render_template("no placeholders", {}) == "no placeholders");
    CHECK_THROWS(render_template("{{missing}}", {}));
    CHECK_THROWS(render_template("{{unterminated", {{"unterminated", "x"}}));
}

TEST_CASE("default templates carry all eleven sections") {
    const PromptTemplates t = PromptTemplates::defaults();
    for (const char* key :
         {"task", "history", "current_state", "robots", "role_central", "role_local",
          "ask_execute", "ask_comment_or_execute", "ask_review", "ask_initial_plan",
          "syntax_feedback"}) {
        CAPTURE(key);
        CHECK_FALSE(t.get(key).empty());
    }
    CHECK(t.sections.size() == 11);
    CHECK_THROWS(t.get("nope"));
}

TEST_CASE("templates directory matches the compiled defaults byte for byte") {
    const PromptTemplates compiled = PromptTemplates::defaults();
    const PromptTemplates loaded = PromptTemplates::load_dir("templates");
    REQUIRE(loaded.sections.size() == compiled.sections.size());
    for (const auto& [key, text] : compiled.sections) {
        CAPTURE(key);
        REQUIRE(loaded.sections.count(key) == 1);
        CHECK(loaded.sections.at(key) == text);
    }
}

TEST_CASE("sections appear in the fixed order") {
    PromptInputs in = base_inputs();
    in.history = {entry(0)};
    PromptBuilder builder(PromptTemplates::defaults(), TokenCounter{}, PromptBudget{});

    SUBCASE("without feedback: six sections") {
        const BuiltPrompt p = builder.build(in);
        CHECK(p.section_names ==
              std::vector<std::string>{"task", "history", "current_state", "robots", "role",
                                       "communication"});
        const std::vector<std::string> headers = {
            "== Task ==",       "== Step history ==", "== Current state ==",
            "== Robot state & capability ==", "== Your role ==", "== How to respond =="};
        std::size_t pos = 0;
        for (const auto& h : headers) {
            const std::size_t found = p.text.find(h);
            CAPTURE(h);
            REQUIRE(found != std::string::npos);
            CHECK(found >= pos);
            pos = found;
        }
        CHECK_FALSE(contains(p.text, "== Plan check feedback =="));
    }

    SUBCASE("plan-check feedback is always the last section") {
        in.context.syntax_feedback = "- robot0: move(box_blue, cell_9_9) is not available";
        const BuiltPrompt p = builder.build(in);
        CHECK(p.section_names.size() == 7);
        CHECK(p.section_names.back() == "plan_feedback");
        const std::size_t fb = p.text.find("== Plan check feedback ==");
        REQUIRE(fb != std::string::npos);
        CHECK(fb > p.text.find("== How to respond =="));
        CHECK(contains(p.text, "cell_9_9"));
    }
}

TEST_CASE("role section tracks the speaker") {
    PromptBuilder builder(PromptTemplates::defaults(), TokenCounter{}, PromptBudget{});
    PromptInputs in = base_inputs();

    in.role.central = true;
    CHECK(contains(builder.build(in).text, "You are the central coordinator."));

    in.role.central = false;
    in.role.robot = 1;
    CHECK(contains(builder.build(in).text, "You are robot1."));

    in.role.persona = "the gripper arm";
    CHECK(contains(builder.build(in).text, "You are the gripper arm."));
}

TEST_CASE("history modes render none, state/action, or full dialogue") {
    PromptBuilder builder(PromptTemplates::defaults(), TokenCounter{}, PromptBudget{});
    PromptInputs in = base_inputs();
    HistoryEntry e = entry(0);
    e.feedback = "box_0 was not lifted";
    in.history = {e};

    in.mode = StepHistoryMode::NoHistory;
    const BuiltPrompt none = builder.build(in);
    CHECK(contains(none.text, "(none)"));
    CHECK(none.history_included == 0);
    CHECK_FALSE(contains(none.text, "[step 0]"));

    in.mode = StepHistoryMode::StateActionOnly;
    const BuiltPrompt sa = builder.build(in);
    CHECK(contains(sa.text, "[step 0] state:"));
    CHECK(contains(sa.text, "| actions: robot0 move(box_blue, cell_0_1)"));
    CHECK_FALSE(contains(sa.text, "moving the blue box"));
    CHECK_FALSE(contains(sa.text, "box_0 was not lifted"));

    in.mode = StepHistoryMode::FullHistory;
    const BuiltPrompt full = builder.build(in);
    CHECK(contains(full.text, "central: moving the blue box"));
    CHECK(contains(full.text, "feedback: box_0 was not lifted"));

    // Richer modes never shrink the prompt (same inputs, ample budget).
    CHECK(none.token_count <= sa.token_count);
    CHECK(sa.token_count <= full.token_count);
}

TEST_CASE("window keeps the most recent entries under a tight budget") {
    PromptBudget budget;
    budget.max_prompt_tokens = 400;
    PromptBuilder builder(PromptTemplates::defaults(), TokenCounter{}, budget);
    PromptInputs in = base_inputs();
    for (int i = 0; i < 40; ++i) in.history.push_back(entry(i));

    const BuiltPrompt p = builder.build(in);
    REQUIRE_FALSE(p.over_budget);
    CHECK(p.token_count <= 400);
    CHECK(p.history_total == 40);
    REQUIRE(p.history_included < 40);
    CHECK(contains(p.text, "(earlier steps omitted)"));
    // Latest entry present, oldest dropped.
    CHECK(contains(p.text, "[step 39]"));
    CHECK_FALSE(contains(p.text, "[step 0]"));
    const int included = p.history_included;
    for (int i = 40 - included; i < 40; ++i) {
        CAPTURE(i);
        CHECK(contains(p.text, "[step " + std::to_string(i) + "]"));
    }

    // Maximality: one more entry would not have fit.
    const BuiltPrompt wider = builder.build_with_window(in, included + 1);
    CHECK(wider.token_count > 400);
}

TEST_CASE("over_budget fires when even a windowless prompt exceeds the cap") {
    PromptBudget budget;
    budget.max_prompt_tokens = 20;
    PromptBuilder builder(PromptTemplates::defaults(), TokenCounter{}, budget);
    PromptInputs in = base_inputs();
    const BuiltPrompt p = builder.build(in);
    CHECK(p.over_budget);
    CHECK(p.token_count > 20);
    CHECK_FALSE(p.text.empty());  // the prompt is still assembled for the record
}

TEST_CASE("dialogue context blocks render inside the communication section") {
    PromptBuilder builder(PromptTemplates::defaults(), TokenCounter{}, PromptBudget{});
    PromptInputs in = base_inputs();
    in.role.central = false;
    in.role.robot = 2;
    in.context.ask = DialogueContext::Ask::CommentOrExecute;
    in.context.initial_plan = "robot0 shifts blue right, robot1 places it.";
    in.context.prior_comments = {{"robot0", "I will move box_blue right."},
                                 {"robot1", "Then I can place it."}};
    const BuiltPrompt p = builder.build(in);
    CHECK(contains(p.text, "Draft plan from the central coordinator:\nrobot0 shifts blue right"));
    CHECK(contains(p.text, "Dialogue so far this step:"));
    CHECK(contains(p.text, "robot0: I will move box_blue right."));
    CHECK(contains(p.text, "robot1: Then I can place it."));

    PromptInputs review = base_inputs();
    review.role.central = false;
    review.context.ask = DialogueContext::Ask::ReviewAssigned;
    review.context.proposal_text = "EXECUTE\nrobot0: move(box_blue, cell_0_1)";
    review.context.own_action = "move(box_blue, cell_0_1)";
    const BuiltPrompt rp = builder.build(review);
    CHECK(contains(rp.text, "Proposed joint action:\nEXECUTE"));
    CHECK(contains(rp.text, "Your assigned action: move(box_blue, cell_0_1)"));
    CHECK(contains(rp.text, "AGREE"));
    CHECK(contains(rp.text, "DISAGREE"));
}

TEST_CASE("cap_includes_dialogue_context exempts context from fitting when off") {
    PromptInputs in = base_inputs();
    for (int i = 0; i < 10; ++i) in.history.push_back(entry(i));
    // A dialogue context far larger than the whole budget.
    in.context.local_feedback = std::string(4000, 'z');

    PromptBudget counted;
    counted.max_prompt_tokens = 900;
    counted.cap_includes_dialogue_context = true;
    const BuiltPrompt strict = PromptBuilder(PromptTemplates::defaults(), TokenCounter{}, counted)
                                   .build(in);
    CHECK(strict.over_budget);  // context alone blows the cap

    PromptBudget exempt = counted;
    exempt.cap_includes_dialogue_context = false;
    const BuiltPrompt loose = PromptBuilder(PromptTemplates::defaults(), TokenCounter{}, exempt)
                                  .build(in);
    CHECK_FALSE(loose.over_budget);
    CHECK(loose.history_included > 0);
    CHECK(contains(loose.text, "zzzz"));  // final text still carries the context
    CHECK(loose.token_count > 900);      // token_count reflects the real text
}

TEST_CASE("prompt text token counts always match the counter") {
    const TokenCounter counter;
    PromptBuilder builder(PromptTemplates::defaults(), counter, PromptBudget{});
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        PromptInputs in = base_inputs();
        const int entries = rng.uniform_int(0, 30);
        for (int i = 0; i < entries; ++i) in.history.push_back(entry(i));
        const BuiltPrompt p = builder.build(in);
        CHECK(p.token_count == counter.count(p.text));
        CHECK(p.token_count <= 3500);
    }
}
