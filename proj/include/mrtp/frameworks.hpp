#pragma once

// The four dialogue frameworks under study. Kept in its own header because
// both the gateway (which records the framework on every exchange) and the
// protocol engine depend on it.

#include <string>

namespace mrtp {

// DMAS:  fully decentralized turn-taking dialogue between robot agents.
// CMAS:  a single central agent plans for everyone, no dialogue.
// HMAS1: a central agent drafts a plan, then the robot agents run a
//        decentralized dialogue primed with that draft.
// HMAS2: a central agent proposes each joint action and every involved
//        robot agent gives local feedback until all agree.
enum class FrameworkKind { DMAS, CMAS, HMAS1, HMAS2 };

std::string framework_name(FrameworkKind kind);
FrameworkKind framework_from_name(const std::string& name);

}  // namespace mrtp
