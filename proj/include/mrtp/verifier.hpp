#pragma once

// EXECUTE block grammar and rules-based plan verification. The verifier is
// purely syntactic and availability-based: it flags unknown robots,
// duplicate robots, unknown action kinds, wrong parameter counts, and
// actions missing from a robot's current menu. It is deliberately
// collision-agnostic - a verified plan can still collide, because
// availability menus include moves that may collide.

#include <string>
#include <vector>

#include "mrtp/state.hpp"

namespace mrtp {

// One parsed line of an EXECUTE block ("robot3: move(box_blue, cell_0_1)").
struct PlanEntry {
    std::string robot_text;  // robot name exactly as written
    RobotId robot = -1;      // resolved id, -1 when the name is unknown
    Action action;
};

struct ParsedPlan {
    bool found_marker = false;              // a line trimming to "EXECUTE"
    std::vector<PlanEntry> entries;         // textual order, duplicates kept
    std::vector<std::string> parse_errors;  // unparseable lines
};

// Scans for the first line that trims to "EXECUTE" and parses the lines
// after it until a blank line or end of text. Accepts "kind" as shorthand
// for "kind()". robot_count bounds name resolution.
ParsedPlan parse_execute_block(const std::string& text, int robot_count);

bool contains_execute_marker(const std::string& text);

// Renders "EXECUTE" plus one line per assignment entry, in robot id order.
std::string format_execute_block(const ActionAssignment& assignment);

// ---------------------------------------------------------------------------

enum class VerifyIssueKind {
    UnknownRobot,
    DuplicateRobot,
    UnknownAction,
    MalformedParams,
    UnavailableAction,
};

std::string verify_issue_kind_name(VerifyIssueKind kind);

struct VerifyIssue {
    VerifyIssueKind kind = VerifyIssueKind::UnknownRobot;
    std::string robot;    // name as written
    Action action;
    std::string message;  // ready-to-send feedback line
};

struct VerifyReport {
    bool ok = false;
    std::vector<VerifyIssue> issues;
    ActionAssignment assignment;  // clean entries only, first occurrence wins
};

// Availability snapshot of one state; verification never mutates it.
class PlanVerifier {
public:
    explicit PlanVerifier(const EnvState& state);

    VerifyReport verify_entries(const std::vector<PlanEntry>& entries) const;
    VerifyReport verify(const ActionAssignment& assignment) const;

    const std::vector<Action>& menu(RobotId robot) const { return menus_.at(robot); }
    int robot_count() const { return static_cast<int>(menus_.size()); }

private:
    EnvKind env_;
    std::vector<std::vector<Action>> menus_;
};

// Re-prompt text: one "- ..." line per parse error and per issue. Empty
// when there is nothing to complain about.
std::string feedback_message(const std::vector<std::string>& parse_errors,
                             const VerifyReport& report);

}  // namespace mrtp
