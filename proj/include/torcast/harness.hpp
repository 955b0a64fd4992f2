#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torcast/datastore.hpp"
#include "torcast/dates.hpp"

namespace torcast {

struct MessagePart {
    enum class Kind { text, image };
    Kind kind = Kind::text;
    std::string text;         // text parts
    std::string media_type;   // image parts, e.g. "image/png"
    std::string data_base64;  // embedded image payload
    std::string path;         // reference-by-path alternative
};

struct ToolCall {
    std::string id;
    std::string name;
    std::string arguments_json;
};

struct Message {
    std::string role;  // system | user | assistant | tool
    std::vector<MessagePart> parts;
    std::vector<ToolCall> tool_calls;  // assistant messages only
    std::string tool_call_id;          // tool messages only
    std::string tool_name;             // tool messages only
    std::string error_code;            // tool messages, "" on success
};

struct ToolResult {
    std::string tool_call_id;
    std::string tool_name;
    std::string text;
    std::string error_code;  // "" on success
    std::optional<std::string> image_media_type;
    std::optional<std::string> image_base64;
    std::optional<std::string> image_path;
    std::optional<int> remaining_quota;
};

/// Estimates token counts from raw byte counts; pluggable because exact
/// tokenization is model specific. Default: bytes/4.
using TokenEstimator = std::function<std::size_t(std::size_t bytes)>;

struct SessionConfig {
    int quota_total = 50;
    int max_assistant_turns = 100;
    bool embed_images = true;  // false: results reference image paths
    std::size_t context_limit_tokens = 200000;
    TokenEstimator token_estimator;  // default installed by run_session
};

enum class TerminalState { open, submitted, max_turns, agent_error };

const char* terminal_state_name(TerminalState s);

/// One forecast day's interaction: append-only transcript, sounding quota,
/// and exactly one accepted submission.
struct Session {
    Date date;
    SessionConfig config;
    int quota_used = 0;
    std::vector<Message> transcript;
    int assistant_turns = 0;
    int tool_calls = 0;
    int sounding_requests = 0;  // quota-charged sounding results
    TerminalState terminal = TerminalState::open;
    PredictionDocument submission;  // meaningful once terminal == submitted
    bool has_submission = false;
    std::string endpoint_error;
};

/// What the harness sends an endpoint each turn: the transcript so far, the
/// tool catalog, and the per-turn token-usage note.
struct EndpointRequest {
    const std::vector<Message>* messages = nullptr;
    std::string tools_json;
    std::string usage_note;
};

/// Either tool calls or final text.
struct EndpointResponse {
    std::vector<ToolCall> tool_calls;
    std::string text;
};

class AgentEndpoint {
public:
    virtual ~AgentEndpoint() = default;
    virtual EndpointResponse next(const EndpointRequest& request) = 0;
};

/// Endpoint factory for CLI specs:
///   script:FILE  replays a canned JSON decision list
///   http:URL     POSTs the chat exchange to URL
///   proc:CMD     spawns CMD and exchanges one JSON line per turn
std::unique_ptr<AgentEndpoint> make_endpoint(const std::string& spec);

/// Scripted endpoint usable directly from tests.
class ScriptedEndpoint : public AgentEndpoint {
public:
    explicit ScriptedEndpoint(std::vector<EndpointResponse> steps);
    static std::unique_ptr<ScriptedEndpoint> from_file(const std::string& path);
    EndpointResponse next(const EndpointRequest& request) override;

private:
    std::vector<EndpointResponse> steps_;
    std::size_t cursor_ = 0;
};

/// JSON-schema catalog of the four tools.
std::string tool_schemas_json(const SessionConfig& config);

std::string system_prompt(const Date& date, const SessionConfig& config);
std::string first_user_prompt(const Date& date, const SessionConfig& config);
std::string token_usage_note(const Session& session);

// Tool dispatch. Each call appends its ToolResult to the transcript and
// returns it; errors are informative results, never session-fatal.
ToolResult dispatch_tool_call(Session& session, const ArchiveIndex& archive,
                              const LambertConfig& cfg, const ToolCall& call);

/// Runs the full interaction loop for one date.
Session run_session(AgentEndpoint& endpoint, const Date& date, const ArchiveIndex& archive,
                    const LambertConfig& cfg, const SessionConfig& config = {});

/// Serialized transcript (pretty JSON) for persistence and replay.
std::string transcript_to_json(const Session& session);

/// Extracts the tool calls of a serialized transcript in order, for replay.
std::vector<ToolCall> transcript_tool_calls(const std::string& transcript_json);

/// Builds the RunRecord a session persists as.
RunRecord run_record(const Session& session, const std::string& model);

}  // namespace torcast
