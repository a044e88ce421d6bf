#pragma once

// Prompt assembly: fixed section order, template-driven wording, heuristic
// token counting, and a sliding window over step history that keeps every
// prompt inside a hard token budget.
//
// Section order is always: task description, step history, current state,
// robot state & capability, role instructions, communication instructions
// (with any in-flight dialogue context), and - only when present - plan
// check feedback appended last.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrtp/state.hpp"

namespace mrtp {

// ---------------------------------------------------------------------------
// Token counting. The default scheme approximates one token per 4 bytes,
// rounded up. Any custom counter must be monotone (more text never counts
// fewer tokens); the window fitting relies on it.

class TokenCounter {
public:
    TokenCounter();  // "chars4" default
    TokenCounter(std::string scheme, std::function<int(std::string_view)> fn);

    int count(std::string_view text) const { return fn_(text); }
    const std::string& scheme() const { return scheme_; }

private:
    std::string scheme_;
    std::function<int(std::string_view)> fn_;
};

// Hard per-prompt budget. When cap_includes_dialogue_context is false the
// dialogue-context block is exempt from window fitting (the final prompt
// still contains it).
struct PromptBudget {
    int max_prompt_tokens = 3500;
    bool cap_includes_dialogue_context = true;
    bool operator==(const PromptBudget&) const = default;
};

// ---------------------------------------------------------------------------
// Step history. The harness appends one entry per executed environment
// step; the builder renders the most recent entries that fit.

enum class StepHistoryMode { NoHistory, StateActionOnly, FullHistory };

std::string history_mode_name(StepHistoryMode mode);
StepHistoryMode history_mode_from_name(const std::string& name);

struct HistoryEntry {
    int step = 0;
    std::string state_summary;    // one-line pre-step state
    std::string actions_summary;  // one-line executed joint action
    std::vector<std::pair<std::string, std::string>> dialogue;  // speaker, text
    std::string feedback;         // post-step environment feedback, may be empty
};

using StepHistory = std::vector<HistoryEntry>;

// Renders one entry; FullHistory adds dialogue and feedback lines,
// StateActionOnly only the state/actions line. NoHistory renders nothing.
std::string render_history_entry(const HistoryEntry& entry, StepHistoryMode mode);

// ---------------------------------------------------------------------------
// Who is being prompted and what they are being asked to do.

struct AgentRole {
    bool central = false;
    RobotId robot = 0;        // meaningful when !central
    std::string persona;      // display name; defaults applied by the builder
};

struct DialogueContext {
    enum class Ask {
        ProposeExecute,    // output an EXECUTE block now (central planning)
        CommentOrExecute,  // dialogue turn: comment or finalize with EXECUTE
        ReviewAssigned,    // check own action in a proposal: AGREE/DISAGREE
        ProposeInitialPlan // draft a plan in prose to prime the dialogue
    };

    Ask ask = Ask::ProposeExecute;
    std::vector<std::pair<std::string, std::string>> prior_comments;  // this step
    std::string initial_plan;    // central draft priming the dialogue
    std::string proposal_text;   // full proposal under review
    std::string own_action;      // reviewer's assigned action
    std::string local_feedback;  // robot responses driving a replan
    std::string syntax_feedback; // verifier findings for a re-prompt
};

// ---------------------------------------------------------------------------
// Wording templates. {{placeholder}} substitution; every placeholder in a
// template must be bound at render time or rendering throws.

struct PromptTemplates {
    std::map<std::string, std::string> sections;

    static PromptTemplates defaults();
    // Loads every *.tmpl file in dir (key = file stem). Throws on an
    // unreadable dir or when a default key is missing.
    static PromptTemplates load_dir(const std::string& dir);

    const std::string& get(const std::string& name) const;
};

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);

// ---------------------------------------------------------------------------

struct PromptInputs {
    std::string task;  // environment rules text
    StateFacts facts;
    StepHistory history;
    StepHistoryMode mode = StepHistoryMode::FullHistory;
    AgentRole role;
    DialogueContext context;
};

struct BuiltPrompt {
    std::string text;
    int token_count = 0;            // of the final text
    int history_total = 0;          // entries available
    int history_included = 0;       // entries that fit the window
    bool over_budget = false;       // even the windowless prompt exceeds the cap
    std::vector<std::string> section_names;  // in rendered order
};

class PromptBuilder {
public:
    PromptBuilder(PromptTemplates templates, TokenCounter counter, PromptBudget budget);

    const TokenCounter& counter() const { return counter_; }
    const PromptBudget& budget() const { return budget_; }

    // Assembles the prompt, keeping the largest suffix of history whose
    // rendering fits max_prompt_tokens. token_count always reflects the
    // returned text; over_budget is set when no suffix (not even zero
    // entries) fits.
    BuiltPrompt build(const PromptInputs& in) const;

    // Assembles with a fixed history window, no fitting. Used to check
    // window maximality and to inspect truncation behavior.
    BuiltPrompt build_with_window(const PromptInputs& in, int history_entries) const;

private:
    std::string assemble(const PromptInputs& in, int history_entries, bool with_context,
                         std::vector<std::string>* names) const;

    PromptTemplates templates_;
    TokenCounter counter_;
    PromptBudget budget_;
};

}  // namespace mrtp
