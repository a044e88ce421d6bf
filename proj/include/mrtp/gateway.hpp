#pragma once

// LLM gateway: a uniform completion interface with a hard context-limit
// gate, usage metering, and record/replay cassettes. The gateway refuses a
// request that cannot fit the model context *before* any backend contact,
// so an overflow never burns quota and replays deterministically.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mrtp/frameworks.hpp"
#include "mrtp/planner.hpp"
#include "mrtp/prompt.hpp"

namespace mrtp {

// ---------------------------------------------------------------------------

struct ModelProfile {
    std::string name = "gpt-4-0613";
    int context_limit = 8192;            // prompt + response tokens
    int reserved_response_tokens = 512;  // slack the gate keeps for the reply
};

// Known profiles ("gpt-4-0613" 8192, "gpt-3.5-turbo-0613" 4097); throws
// std::invalid_argument for anything else.
ModelProfile model_profile(const std::string& name);

struct Usage {
    int prompt_tokens = 0;
    int completion_tokens = 0;
    bool operator==(const Usage&) const = default;
};

struct ChatRequest {
    std::string trial_id;
    int call_index = 0;   // per-trial, assigned by the gateway
    std::string role;     // "central" or a robot name
    std::string purpose;  // protocol-defined label, e.g. "propose" or "review"
    std::string model;
    std::string prompt;
};

struct BackendReply {
    std::string text;
    std::optional<Usage> usage;  // backend-reported; gateway measures otherwise
};

// Everything an offline backend may need to answer like a planner would.
// Pointers refer to caller-owned data valid for the duration of the call.
struct PlanningContext {
    const EnvState* state = nullptr;
    FrameworkKind framework = FrameworkKind::CMAS;
    AgentRole role;
    const ActionAssignment* proposal = nullptr;  // under review, when asked to review
    std::string own_action;                      // reviewer's assigned action, rendered
};

class TransportFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class ReplayMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    // May throw TransportFailure or ReplayMismatch.
    virtual BackendReply complete(const ChatRequest& request, const PlanningContext* ctx) = 0;
};

// ---------------------------------------------------------------------------
// Backends.

// Replays a fixed response sequence or defers to a handler. Sequence
// exhaustion is a TransportFailure.
class ScriptedBackend : public Backend {
public:
    using Handler = std::function<std::string(const ChatRequest&, const PlanningContext*)>;

    explicit ScriptedBackend(std::vector<std::string> responses);
    explicit ScriptedBackend(Handler handler);

    std::string name() const override { return "scripted"; }
    BackendReply complete(const ChatRequest& request, const PlanningContext* ctx) override;

private:
    std::mutex mu_;
    std::vector<std::string> responses_;
    std::size_t next_ = 0;
    Handler handler_;
};

// Answers every request with an optimal plan for the current state: EXECUTE
// blocks when asked to plan, AGREE/DISAGREE when asked to review, and a
// prose draft when asked for an initial plan. Plans are cached by state
// digest and shared across trials.
class OracleBackend : public Backend {
public:
    explicit OracleBackend(SearchLimits limits = {});

    std::string name() const override { return "oracle"; }
    BackendReply complete(const ChatRequest& request, const PlanningContext* ctx) override;

private:
    std::vector<ActionAssignment> plan_for(const EnvState& state);

    SearchLimits limits_;
    std::mutex mu_;
    std::unordered_map<std::string, std::vector<ActionAssignment>> plans_;  // by digest
};

struct RemoteConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "MRTP_API_KEY";  // falls back to OPENAI_API_KEY
    double temperature = 0.0;
    int max_attempts = 3;
    int backoff_ms = 1000;  // doubled per retry
    int timeout_seconds = 120;
};

// OpenAI-compatible chat-completions client (cpp-httplib). Exhausted
// retries raise TransportFailure.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(RemoteConfig config = {});

    std::string name() const override { return "remote"; }
    BackendReply complete(const ChatRequest& request, const PlanningContext* ctx) override;

private:
    RemoteConfig config_;
};

// ---------------------------------------------------------------------------
// Cassettes: JSONL, one exchange per line, keyed by (trial_id, call_index).

struct ChatExchange {
    ChatRequest request;
    std::string prompt_digest;
    std::string response;
    Usage usage;
};

nlohmann::json exchange_to_json(const ChatExchange& e);
ChatExchange exchange_from_json(const nlohmann::json& j);

class CassetteWriter {
public:
    explicit CassetteWriter(const std::string& path);  // truncates
    void append(const ChatExchange& exchange);         // thread-safe, flushed

private:
    std::mutex mu_;
    std::string path_;
};

// Serves recorded responses; any deviation in request identity or prompt
// digest is a ReplayMismatch (the replayed run diverged from the recording).
class CassetteReplayBackend : public Backend {
public:
    explicit CassetteReplayBackend(const std::string& path);

    std::string name() const override { return "replay"; }
    BackendReply complete(const ChatRequest& request, const PlanningContext* ctx) override;

private:
    std::map<std::pair<std::string, int>, ChatExchange> exchanges_;
};

// ---------------------------------------------------------------------------

enum class CompletionStatus { Ok, ContextOverflow, ReplayDivergence, TransportError };

std::string completion_status_name(CompletionStatus status);

struct CompletionResult {
    CompletionStatus status = CompletionStatus::Ok;
    std::string text;
    Usage usage;
    std::string detail;
    bool backend_touched = false;  // false for an overflow refusal
};

// Per-trial front door. Counts tokens with the same counter the prompt
// builder used, gates on the model context limit, meters usage, and
// records exchanges (in memory, and to a cassette when attached).
class Gateway {
public:
    Gateway(std::string trial_id, std::shared_ptr<Backend> backend, ModelProfile profile,
            TokenCounter counter);

    void attach_cassette(CassetteWriter* writer) { cassette_ = writer; }

    CompletionResult complete(const std::string& role, const std::string& purpose,
                              const std::string& prompt, const PlanningContext* ctx = nullptr);

    const std::string& trial_id() const { return trial_id_; }
    const ModelProfile& profile() const { return profile_; }
    int calls() const { return calls_; }  // backend calls actually made
    const Usage& total_usage() const { return total_usage_; }
    const std::vector<ChatExchange>& exchanges() const { return exchanges_; }

private:
    std::string trial_id_;
    std::shared_ptr<Backend> backend_;
    ModelProfile profile_;
    TokenCounter counter_;
    CassetteWriter* cassette_ = nullptr;
    int calls_ = 0;
    Usage total_usage_;
    std::vector<ChatExchange> exchanges_;
};

}  // namespace mrtp
