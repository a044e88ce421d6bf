#include "mrtp/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "mrtp/env.hpp"
#include "mrtp/util.hpp"
#include "mrtp/verifier.hpp"

namespace mrtp {

using json = nlohmann::json;

ModelProfile model_profile(const std::string& name) {
    if (name == "gpt-4-0613") return {name, 8192, 512};
    if (name == "gpt-3.5-turbo-0613") return {name, 4097, 512};
    throw std::invalid_argument("unknown model profile: " + name);
}

std::string completion_status_name(CompletionStatus status) {
    switch (status) {
        case CompletionStatus::Ok: return "ok";
        case CompletionStatus::ContextOverflow: return "context_overflow";
        case CompletionStatus::ReplayDivergence: return "replay_divergence";
        case CompletionStatus::TransportError: return "transport_error";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// ScriptedBackend

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

ScriptedBackend::ScriptedBackend(Handler handler) : handler_(std::move(handler)) {}

BackendReply ScriptedBackend::complete(const ChatRequest& request, const PlanningContext* ctx) {
    if (handler_) return {handler_(request, ctx), std::nullopt};
    std::lock_guard<std::mutex> lock(mu_);
    if (next_ >= responses_.size()) {
        throw TransportFailure("scripted backend exhausted after " +
                               std::to_string(responses_.size()) + " responses");
    }
    return {responses_[next_++], std::nullopt};
}

// ---------------------------------------------------------------------------
// OracleBackend

OracleBackend::OracleBackend(SearchLimits limits) : limits_(limits) {}

std::vector<ActionAssignment> OracleBackend::plan_for(const EnvState& state) {
    const std::string digest = state_digest(state);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(digest);
    if (it == plans_.end()) {
        it = plans_.emplace(digest, optimal_joint_plan(state, limits_)).first;
    }
    return it->second;
}

BackendReply OracleBackend::complete(const ChatRequest& request, const PlanningContext* ctx) {
    if (!ctx || !ctx->state) {
        throw TransportFailure("oracle backend needs a planning context");
    }
    const EnvState& state = *ctx->state;
    if (is_goal(state)) return {"EXECUTE", std::nullopt};

    std::vector<ActionAssignment> plan;
    try {
        plan = plan_for(state);
    } catch (const std::exception& e) {
        throw TransportFailure(std::string("oracle planning failed: ") + e.what());
    }
    const ActionAssignment next = plan.empty() ? ActionAssignment{} : plan.front();

    if (ctx->proposal) {
        // Review: agree exactly when the proposed own action matches the
        // optimal one.
        const Action* proposed = ctx->proposal->find(ctx->role.robot);
        const Action* optimal = next.find(ctx->role.robot);
        const Action prop = proposed ? *proposed : do_nothing_action();
        const Action opt = optimal ? *optimal : do_nothing_action();
        if (prop == opt) return {"AGREE", std::nullopt};
        return {"DISAGREE: I should do " + opt.render() + " instead.", std::nullopt};
    }
    if (request.purpose == "initial_plan") {
        std::string draft = "Suggested joint action:";
        for (const auto& [robot, action] : next.entries()) {
            draft += " " + robot_name(robot) + " does " + action.render() + ";";
        }
        if (next.empty()) draft += " everyone holds position;";
        return {draft, std::nullopt};
    }
    return {format_execute_block(next), std::nullopt};
}

// ---------------------------------------------------------------------------
// RemoteBackend

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {}

BackendReply RemoteBackend::complete(const ChatRequest& request, const PlanningContext*) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key) key = std::getenv("OPENAI_API_KEY");
    if (!key || !*key) {
        throw TransportFailure("no API key in $" + config_.api_key_env + " or $OPENAI_API_KEY");
    }

    const json body = {
        {"model", request.model},
        {"temperature", config_.temperature},
        {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
    };
    const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};

    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
        }
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        auto res = client.Post(config_.path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status == 400 || res->status == 401 || res->status == 403 ||
                res->status == 404) {
                break;  // not retryable
            }
            continue;
        }
        const json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
            last_error = "unparseable response body";
            continue;
        }
        BackendReply out;
        out.text = reply["choices"][0]["message"]["content"].get<std::string>();
        if (reply.contains("usage")) {
            out.usage = Usage{reply["usage"].value("prompt_tokens", 0),
                              reply["usage"].value("completion_tokens", 0)};
        }
        return out;
    }
    throw TransportFailure("remote backend failed: " + last_error);
}

// ---------------------------------------------------------------------------
// Cassettes

json exchange_to_json(const ChatExchange& e) {
    return {{"trial_id", e.request.trial_id},
            {"call_index", e.request.call_index},
            {"role", e.request.role},
            {"purpose", e.request.purpose},
            {"model", e.request.model},
            {"prompt", e.request.prompt},
            {"prompt_digest", e.prompt_digest},
            {"response", e.response},
            {"prompt_tokens", e.usage.prompt_tokens},
            {"completion_tokens", e.usage.completion_tokens}};
}

ChatExchange exchange_from_json(const json& j) {
    ChatExchange e;
    e.request.trial_id = j.at("trial_id").get<std::string>();
    e.request.call_index = j.at("call_index").get<int>();
    e.request.role = j.at("role").get<std::string>();
    e.request.purpose = j.at("purpose").get<std::string>();
    e.request.model = j.at("model").get<std::string>();
    e.request.prompt = j.at("prompt").get<std::string>();
    e.prompt_digest = j.at("prompt_digest").get<std::string>();
    e.response = j.at("response").get<std::string>();
    e.usage.prompt_tokens = j.at("prompt_tokens").get<int>();
    e.usage.completion_tokens = j.at("completion_tokens").get<int>();
    return e;
}

CassetteWriter::CassetteWriter(const std::string& path) : path_(path) {
    write_file(path_, "");  // truncate, creating parent directories
}

void CassetteWriter::append(const ChatExchange& exchange) {
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw std::runtime_error("cannot append to cassette: " + path_);
    out << exchange_to_json(exchange).dump() << '\n';
}

CassetteReplayBackend::CassetteReplayBackend(const std::string& path) {
    for (const auto& line : split_lines(read_file(path))) {
        if (trim(line).empty()) continue;
        ChatExchange e = exchange_from_json(json::parse(line));
        exchanges_[{e.request.trial_id, e.request.call_index}] = std::move(e);
    }
}

BackendReply CassetteReplayBackend::complete(const ChatRequest& request,
                                             const PlanningContext*) {
    const auto it = exchanges_.find({request.trial_id, request.call_index});
    if (it == exchanges_.end()) {
        throw ReplayMismatch("no recorded exchange for trial " + request.trial_id + " call " +
                             std::to_string(request.call_index));
    }
    const ChatExchange& rec = it->second;
    const std::string digest = hex64(fnv1a(request.prompt));
    if (digest != rec.prompt_digest || request.role != rec.request.role ||
        request.purpose != rec.request.purpose) {
        throw ReplayMismatch("replay diverged at trial " + request.trial_id + " call " +
                             std::to_string(request.call_index) + " (" + request.role + "/" +
                             request.purpose + "): prompt or identity differs from recording");
    }
    return {rec.response, rec.usage};
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(std::string trial_id, std::shared_ptr<Backend> backend, ModelProfile profile,
                 TokenCounter counter)
    : trial_id_(std::move(trial_id)),
      backend_(std::move(backend)),
      profile_(std::move(profile)),
      counter_(std::move(counter)) {}

CompletionResult Gateway::complete(const std::string& role, const std::string& purpose,
                                   const std::string& prompt, const PlanningContext* ctx) {
    const int prompt_tokens = counter_.count(prompt);
    CompletionResult result;
    result.usage.prompt_tokens = prompt_tokens;

    if (prompt_tokens + profile_.reserved_response_tokens > profile_.context_limit) {
        result.status = CompletionStatus::ContextOverflow;
        result.detail = "prompt counts " + std::to_string(prompt_tokens) + " tokens + " +
                        std::to_string(profile_.reserved_response_tokens) +
                        " reserved for the reply > context limit " +
                        std::to_string(profile_.context_limit) + " of " + profile_.name;
        result.backend_touched = false;
        return result;
    }

    ChatRequest request{trial_id_, calls_, role, purpose, profile_.name, prompt};
    BackendReply reply;
    try {
        reply = backend_->complete(request, ctx);
    } catch (const ReplayMismatch& e) {
        result.status = CompletionStatus::ReplayDivergence;
        result.detail = e.what();
        result.backend_touched = true;
        return result;
    } catch (const TransportFailure& e) {
        result.status = CompletionStatus::TransportError;
        result.detail = e.what();
        result.backend_touched = true;
        return result;
    }

    ++calls_;
    const Usage usage = reply.usage.value_or(Usage{prompt_tokens, counter_.count(reply.text)});
    total_usage_.prompt_tokens += usage.prompt_tokens;
    total_usage_.completion_tokens += usage.completion_tokens;

    ChatExchange exchange{request, hex64(fnv1a(prompt)), reply.text, usage};
    if (cassette_) cassette_->append(exchange);
    exchanges_.push_back(std::move(exchange));

    result.status = CompletionStatus::Ok;
    result.text = reply.text;
    result.usage = usage;
    result.backend_touched = true;
    return result;
}

}  // namespace mrtp
