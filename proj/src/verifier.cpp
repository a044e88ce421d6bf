#include "mrtp/verifier.hpp"

#include <algorithm>
#include <cctype>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"

namespace mrtp {

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

RobotId resolve_robot(std::string_view name, int robot_count) {
    if (name.rfind("robot", 0) != 0) return -1;
    const std::string_view digits = name.substr(5);
    if (digits.empty() || digits.size() > 6) return -1;
    int id = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
        id = id * 10 + (c - '0');
    }
    if (digits.size() > 1 && digits[0] == '0') return -1;  // no leading zeros
    return id < robot_count ? id : -1;
}

// "kind(a, b)" or bare "kind"; returns false when the line cannot be read
// as an action at all.
bool parse_action(std::string_view text, Action* out) {
    const std::size_t open = text.find('(');
    if (open == std::string_view::npos) {
        const std::string kind = trim(text);
        if (!is_identifier(kind)) return false;
        *out = Action{kind, {}};
        return true;
    }
    const std::string kind = trim(text.substr(0, open));
    if (!is_identifier(kind)) return false;
    const std::size_t close = text.rfind(')');
    if (close == std::string_view::npos || close < open) return false;
    if (!trim(text.substr(close + 1)).empty()) return false;
    const std::string_view inside = text.substr(open + 1, close - open - 1);
    std::vector<std::string> params;
    if (!trim(inside).empty()) {
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = inside.find(',', start);
            const auto piece = comma == std::string_view::npos
                                   ? inside.substr(start)
                                   : inside.substr(start, comma - start);
            params.push_back(trim(piece));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    *out = Action{kind, std::move(params)};
    return true;
}

}  // namespace

bool contains_execute_marker(const std::string& text) {
    for (const auto& line : split_lines(text)) {
        if (trim(line) == "EXECUTE") return true;
    }
    return false;
}

ParsedPlan parse_execute_block(const std::string& text, int robot_count) {
    ParsedPlan plan;
    const auto lines = split_lines(text);
    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        if (trim(lines[i]) == "EXECUTE") {
            plan.found_marker = true;
            ++i;
            break;
        }
    }
    if (!plan.found_marker) return plan;

    for (; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty()) break;
        const std::size_t colon = line.find(':');
        Action action;
        if (colon == std::string::npos || !parse_action(std::string_view(line).substr(colon + 1),
                                                        &action)) {
            plan.parse_errors.push_back("could not parse plan line '" + line + "'");
            continue;
        }
        PlanEntry entry;
        entry.robot_text = trim(line.substr(0, colon));
        entry.robot = resolve_robot(entry.robot_text, robot_count);
        entry.action = std::move(action);
        plan.entries.push_back(std::move(entry));
    }
    return plan;
}

std::string format_execute_block(const ActionAssignment& assignment) {
    std::string out = "EXECUTE";
    for (const auto& [robot, action] : assignment.entries()) {
        out += "\n" + robot_name(robot) + ": " + action.render();
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string verify_issue_kind_name(VerifyIssueKind kind) {
    switch (kind) {
        case VerifyIssueKind::UnknownRobot: return "unknown_robot";
        case VerifyIssueKind::DuplicateRobot: return "duplicate_robot";
        case VerifyIssueKind::UnknownAction: return "unknown_action";
        case VerifyIssueKind::MalformedParams: return "malformed_params";
        case VerifyIssueKind::UnavailableAction: return "unavailable_action";
    }
    return "unknown";
}

PlanVerifier::PlanVerifier(const EnvState& state) : env_(env_kind(state)) {
    const int n = mrtp::robot_count(state);
    menus_.reserve(n);
    for (RobotId r = 0; r < n; ++r) menus_.push_back(available_actions(state, r));
}

VerifyReport PlanVerifier::verify_entries(const std::vector<PlanEntry>& entries) const {
    VerifyReport report;
    std::vector<RobotId> seen;
    for (const auto& entry : entries) {
        VerifyIssue issue;
        issue.robot = entry.robot_text;
        issue.action = entry.action;
        if (entry.robot < 0 || entry.robot >= robot_count()) {
            issue.kind = VerifyIssueKind::UnknownRobot;
            issue.message = "there is no robot named '" + entry.robot_text + "'";
            report.issues.push_back(std::move(issue));
            continue;
        }
        if (std::find(seen.begin(), seen.end(), entry.robot) != seen.end()) {
            issue.kind = VerifyIssueKind::DuplicateRobot;
            issue.message = entry.robot_text + " appears more than once; only its first action counts";
            report.issues.push_back(std::move(issue));
            continue;
        }
        seen.push_back(entry.robot);

        const auto arity = action_arity(env_, entry.action.kind);
        if (!arity) {
            issue.kind = VerifyIssueKind::UnknownAction;
            issue.message = "'" + entry.action.kind + "' is not an action in this environment";
            report.issues.push_back(std::move(issue));
            continue;
        }
        if (static_cast<int>(entry.action.params.size()) != *arity) {
            issue.kind = VerifyIssueKind::MalformedParams;
            issue.message = "'" + entry.action.kind + "' takes " + std::to_string(*arity) +
                            " parameter(s), got " + std::to_string(entry.action.params.size());
            report.issues.push_back(std::move(issue));
            continue;
        }
        const auto& menu = menus_[entry.robot];
        if (std::find(menu.begin(), menu.end(), entry.action) == menu.end()) {
            issue.kind = VerifyIssueKind::UnavailableAction;
            std::string msg = entry.robot_text + " cannot do " + entry.action.render() +
                              " right now; available:";
            constexpr std::size_t kMaxListed = 20;
            for (std::size_t k = 0; k < menu.size() && k < kMaxListed; ++k) {
                msg += (k ? " | " : " ") + menu[k].render();
            }
            if (menu.size() > kMaxListed) {
                msg += " (+" + std::to_string(menu.size() - kMaxListed) + " more)";
            }
            issue.message = std::move(msg);
            report.issues.push_back(std::move(issue));
            continue;
        }
        report.assignment.set(entry.robot, entry.action);
    }
    report.ok = report.issues.empty();
    return report;
}

VerifyReport PlanVerifier::verify(const ActionAssignment& assignment) const {
    std::vector<PlanEntry> entries;
    for (const auto& [robot, action] : assignment.entries()) {
        entries.push_back({robot_name(robot), robot, action});
    }
    // Names synthesized from ids: mark out-of-range ids as unknown.
    for (auto& e : entries) {
        if (e.robot < 0 || e.robot >= robot_count()) e.robot = -1;
    }
    return verify_entries(entries);
}

std::string feedback_message(const std::vector<std::string>& parse_errors,
                             const VerifyReport& report) {
    std::vector<std::string> lines;
    for (const auto& err : parse_errors) lines.push_back("- " + err);
    for (const auto& issue : report.issues) lines.push_back("- " + issue.message);
    return join(lines, "\n");
}

}  // namespace mrtp
