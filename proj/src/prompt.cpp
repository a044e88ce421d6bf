#include "mrtp/prompt.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "mrtp/util.hpp"

namespace mrtp {

TokenCounter::TokenCounter()
    : scheme_("chars4"),
      fn_([](std::string_view text) { return static_cast<int>((text.size() + 3) / 4); }) {}

TokenCounter::TokenCounter(std::string scheme, std::function<int(std::string_view)> fn)
    : scheme_(std::move(scheme)), fn_(std::move(fn)) {}

std::string history_mode_name(StepHistoryMode mode) {
    switch (mode) {
        case StepHistoryMode::NoHistory: return "none";
        case StepHistoryMode::StateActionOnly: return "state_action";
        case StepHistoryMode::FullHistory: return "full";
    }
    return "unknown";
}

StepHistoryMode history_mode_from_name(const std::string& name) {
    if (name == "none") return StepHistoryMode::NoHistory;
    if (name == "state_action") return StepHistoryMode::StateActionOnly;
    if (name == "full") return StepHistoryMode::FullHistory;
    throw std::invalid_argument("unknown history mode: " + name);
}

std::string render_history_entry(const HistoryEntry& entry, StepHistoryMode mode) {
    if (mode == StepHistoryMode::NoHistory) return "";
    std::string line = "[step " + std::to_string(entry.step) + "] state: " + entry.state_summary +
                       " | actions: " + entry.actions_summary;
    if (mode == StepHistoryMode::FullHistory) {
        for (const auto& [speaker, text] : entry.dialogue) {
            line += "\n    " + speaker + ": " + text;
        }
        if (!entry.feedback.empty()) line += "\n    feedback: " + entry.feedback;
    }
    return line;
}

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = tmpl.find("{{", pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            return out;
        }
        out.append(tmpl, pos, open - pos);
        const std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string::npos) {
            throw std::invalid_argument("unterminated placeholder in template");
        }
        const std::string key = tmpl.substr(open + 2, close - open - 2);
        const auto it = values.find(key);
        if (it == values.end()) {
            throw std::invalid_argument("unbound template placeholder: " + key);
        }
        out += it->second;
        pos = close + 2;
    }
}

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates t;
    t.sections["task"] =
        "== Task ==\n"
        "{{task_description}}\n";
    t.sections["history"] =
        "== Step history ==\n"
        "{{entries}}\n";
    t.sections["current_state"] =
        "== Current state ==\n"
        "{{objects}}\n";
    t.sections["robots"] =
        "== Robot state & capability ==\n"
        "{{robots}}\n";
    t.sections["role_central"] =
        "== Your role ==\n"
        "You are {{persona}}. You plan for the whole team: decide the next action for "
        "every robot, and the robots will execute exactly what you output.\n";
    t.sections["role_local"] =
        "== Your role ==\n"
        "You are {{persona}}. You control only yourself. The other robots are "
        "controlled by their own agents; coordinate with them through the dialogue.\n";
    t.sections["ask_execute"] =
        "== How to respond ==\n"
        "Decide the next joint action now. Output a line containing exactly EXECUTE, "
        "followed by one line per acting robot in the form:\n"
        "robot<i>: action(params)\n"
        "Robots you omit will do nothing. Use only actions listed for each robot above.\n"
        "{{context}}";
    t.sections["ask_comment_or_execute"] =
        "== How to respond ==\n"
        "Discuss with the other agents. Either reply with a short comment to continue "
        "the dialogue, or finalize the joint plan: output a line containing exactly "
        "EXECUTE, followed by one line per acting robot in the form:\n"
        "robot<i>: action(params)\n"
        "Robots you omit will do nothing. Use only actions listed for each robot above.\n"
        "{{context}}";
    t.sections["ask_review"] =
        "== How to respond ==\n"
        "The central coordinator proposed the joint action below. Check only your own "
        "assigned action against your situation and your action list. Reply with a line "
        "containing AGREE if your action is fine, or DISAGREE followed by the reason and "
        "a workable alternative if it is not.\n"
        "{{context}}";
    t.sections["ask_initial_plan"] =
        "== How to respond ==\n"
        "Propose a draft plan for the team to discuss: suggest the next action for each "
        "robot in plain language. The robots will refine and finalize it in dialogue.\n"
        "{{context}}";
    t.sections["syntax_feedback"] =
        "== Plan check feedback ==\n"
        "Your previous output had problems:\n"
        "{{feedback}}\n"
        "Output a corrected EXECUTE block now.\n";
    return t;
}

const std::string& PromptTemplates::get(const std::string& name) const {
    const auto it = sections.find(name);
    if (it == sections.end()) {
        throw std::out_of_range("missing prompt template: " + name);
    }
    return it->second;
}

PromptTemplates PromptTemplates::load_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("template directory not found: " + dir);
    }
    PromptTemplates t;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".tmpl") continue;
        t.sections[entry.path().stem().string()] = read_file(entry.path().string());
    }
    for (const auto& kv : defaults().sections) {
        if (!t.sections.count(kv.first)) {
            throw std::runtime_error("template directory " + dir + " is missing " + kv.first +
                                     ".tmpl");
        }
    }
    return t;
}

// ---------------------------------------------------------------------------

namespace {

std::string render_context(const DialogueContext& c) {
    std::vector<std::string> blocks;
    if (!c.initial_plan.empty()) {
        blocks.push_back("Draft plan from the central coordinator:\n" + c.initial_plan);
    }
    if (!c.prior_comments.empty()) {
        std::string t = "Dialogue so far this step:";
        for (const auto& [speaker, text] : c.prior_comments) t += "\n" + speaker + ": " + text;
        blocks.push_back(std::move(t));
    }
    if (!c.proposal_text.empty()) blocks.push_back("Proposed joint action:\n" + c.proposal_text);
    if (!c.own_action.empty()) blocks.push_back("Your assigned action: " + c.own_action);
    if (!c.local_feedback.empty()) {
        blocks.push_back("Responses from the robots:\n" + c.local_feedback);
    }
    return join(blocks, "\n");
}

const char* ask_template_key(DialogueContext::Ask ask) {
    switch (ask) {
        case DialogueContext::Ask::ProposeExecute: return "ask_execute";
        case DialogueContext::Ask::CommentOrExecute: return "ask_comment_or_execute";
        case DialogueContext::Ask::ReviewAssigned: return "ask_review";
        case DialogueContext::Ask::ProposeInitialPlan: return "ask_initial_plan";
    }
    return "ask_execute";
}

}  // namespace

PromptBuilder::PromptBuilder(PromptTemplates templates, TokenCounter counter, PromptBudget budget)
    : templates_(std::move(templates)), counter_(std::move(counter)), budget_(budget) {}

std::string PromptBuilder::assemble(const PromptInputs& in, int history_entries,
                                    bool with_context, std::vector<std::string>* names) const {
    std::vector<std::string> parts;
    auto push = [&](const char* name, std::string text) {
        parts.push_back(std::move(text));
        if (names) names->push_back(name);
    };

    push("task", render_template(templates_.get("task"), {{"task_description", in.task}}));

    std::string entries_text;
    if (in.mode == StepHistoryMode::NoHistory || in.history.empty()) {
        entries_text = "(none)";
    } else {
        const int total = static_cast<int>(in.history.size());
        std::vector<std::string> rendered;
        if (history_entries < total) rendered.push_back("(earlier steps omitted)");
        for (int i = total - history_entries; i < total; ++i) {
            rendered.push_back(render_history_entry(in.history[i], in.mode));
        }
        entries_text = join(rendered, "\n");
    }
    push("history", render_template(templates_.get("history"), {{"entries", entries_text}}));

    push("current_state",
         render_template(templates_.get("current_state"), {{"objects", in.facts.render_objects()}}));
    push("robots",
         render_template(templates_.get("robots"), {{"robots", in.facts.render_robots()}}));

    const std::string persona =
        !in.role.persona.empty() ? in.role.persona
        : in.role.central       ? "the central coordinator"
                                : robot_name(in.role.robot);
    push("role", render_template(templates_.get(in.role.central ? "role_central" : "role_local"),
                                 {{"persona", persona}}));

    const std::string context = with_context ? render_context(in.context) : "";
    push("communication",
         render_template(templates_.get(ask_template_key(in.context.ask)), {{"context", context}}));

    if (!in.context.syntax_feedback.empty()) {
        push("plan_feedback", render_template(templates_.get("syntax_feedback"),
                                              {{"feedback", in.context.syntax_feedback}}));
    }
    return join(parts, "\n");
}

BuiltPrompt PromptBuilder::build(const PromptInputs& in) const {
    const int total = static_cast<int>(in.history.size());
    const int upper = in.mode == StepHistoryMode::NoHistory ? 0 : total;

    int chosen = 0;
    bool over_budget = true;
    for (int k = upper; k >= 0; --k) {
        const std::string fit_text =
            assemble(in, k, budget_.cap_includes_dialogue_context, nullptr);
        if (counter_.count(fit_text) <= budget_.max_prompt_tokens) {
            chosen = k;
            over_budget = false;
            break;
        }
    }

    BuiltPrompt out;
    out.text = assemble(in, chosen, true, &out.section_names);
    out.token_count = counter_.count(out.text);
    out.history_total = total;
    out.history_included = in.mode == StepHistoryMode::NoHistory ? 0 : chosen;
    out.over_budget = over_budget;
    return out;
}

BuiltPrompt PromptBuilder::build_with_window(const PromptInputs& in, int history_entries) const {
    const int total = static_cast<int>(in.history.size());
    const int k = std::clamp(history_entries, 0, in.mode == StepHistoryMode::NoHistory ? 0 : total);
    BuiltPrompt out;
    out.text = assemble(in, k, true, &out.section_names);
    out.token_count = counter_.count(out.text);
    out.history_total = total;
    out.history_included = in.mode == StepHistoryMode::NoHistory ? 0 : k;
    out.over_budget = out.token_count > budget_.max_prompt_tokens;
    return out;
}

}  // namespace mrtp
