#include "torcast/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "torcast/errors.hpp"
#include "torcast/util.hpp"

using nlohmann::json;

namespace torcast {

namespace {

constexpr const char* kToolListMapTypes = "list_available_map_types";
constexpr const char* kToolRequestMap = "request_hrrr_map";
constexpr const char* kToolRequestSounding = "request_sounding";
constexpr const char* kToolSubmit = "submit_tornado_prediction";

Message text_message(const std::string& role, const std::string& text) {
    Message m;
    m.role = role;
    MessagePart part;
    part.kind = MessagePart::Kind::text;
    part.text = text;
    m.parts.push_back(std::move(part));
    return m;
}

void append_result(Session& session, const ToolResult& result) {
    Message m;
    m.role = "tool";
    m.tool_call_id = result.tool_call_id;
    m.tool_name = result.tool_name;
    m.error_code = result.error_code;
    MessagePart text;
    text.kind = MessagePart::Kind::text;
    text.text = result.text;
    m.parts.push_back(std::move(text));
    if (result.image_base64 || result.image_path) {
        MessagePart img;
        img.kind = MessagePart::Kind::image;
        img.media_type = result.image_media_type.value_or("image/png");
        if (result.image_base64) img.data_base64 = *result.image_base64;
        if (result.image_path) img.path = *result.image_path;
        m.parts.push_back(std::move(img));
    }
    session.transcript.push_back(std::move(m));
}

ToolResult error_result(const ToolCall& call, const std::string& code, const std::string& text) {
    ToolResult r;
    r.tool_call_id = call.id;
    r.tool_name = call.name;
    r.error_code = code;
    r.text = text;
    return r;
}

// Integer-valued JSON number, else nullopt (covers 18 and 18.0, not 18.5).
std::optional<int> integral_arg(const json& j) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::floor(v) == v && std::abs(v) < 1e9) return static_cast<int>(v);
    }
    return std::nullopt;
}

void attach_image(ToolResult& r, const Session& session, const std::string& path) {
    r.image_media_type = "image/png";
    if (session.config.embed_images) {
        r.image_base64 = base64_encode(read_file(path));
    } else {
        r.image_path = path;
    }
}

ToolResult run_list_map_types(Session& session, const ArchiveIndex& archive,
                              const ToolCall& call) {
    json names = json::array();
    for (const std::string& t : archive.map_types) names.push_back(t);
    ToolResult r;
    r.tool_call_id = call.id;
    r.tool_name = call.name;
    r.text = names.dump();
    (void)session;
    return r;
}

ToolResult run_request_map(Session& session, const ArchiveIndex& archive, const ToolCall& call) {
    json args;
    try {
        args = json::parse(call.arguments_json.empty() ? "{}" : call.arguments_json);
    } catch (const json::parse_error& e) {
        return error_result(call, "argument_error", std::string("arguments are not valid JSON: ") + e.what());
    }
    if (!args.contains("map_type_directory") || !args["map_type_directory"].is_string()) {
        return error_result(call, "argument_error", "map_type_directory (string) is required");
    }
    const auto hour = args.contains("forecast_hour") ? integral_arg(args["forecast_hour"])
                                                     : std::nullopt;
    if (!hour) {
        return error_result(call, "argument_error", "forecast_hour (integer) is required");
    }
    if (*hour < ArchiveIndex::kMinForecastHour || *hour > ArchiveIndex::kMaxForecastHour) {
        return error_result(call, "argument_error",
                            "forecast_hour must be between 12 and 36, got " +
                                std::to_string(*hour));
    }
    const std::string type = args["map_type_directory"].get<std::string>();
    const auto asset = archive.map_asset(type, *hour);
    if (!asset) {
        return error_result(call, "map_not_found",
                            "map not found: '" + type + "' forecast hour " +
                                std::to_string(*hour));
    }
    ToolResult r;
    r.tool_call_id = call.id;
    r.tool_name = call.name;
    r.text = "HRRR map '" + type + "' at forecast hour " + std::to_string(*hour) + ".";
    attach_image(r, session, *asset);
    return r;
}

ToolResult run_request_sounding(Session& session, const ArchiveIndex& archive,
                                const ToolCall& call) {
    json args;
    try {
        args = json::parse(call.arguments_json.empty() ? "{}" : call.arguments_json);
    } catch (const json::parse_error& e) {
        return error_result(call, "argument_error", std::string("arguments are not valid JSON: ") + e.what());
    }
    // Argument validation precedes any lookup and never consumes quota.
    if (!args.contains("latitude") || !args["latitude"].is_number() ||
        !args.contains("longitude") || !args["longitude"].is_number()) {
        return error_result(call, "argument_error", "latitude and longitude (numbers) are required");
    }
    const auto hour = args.contains("forecast_hour") ? integral_arg(args["forecast_hour"])
                                                     : std::nullopt;
    if (!hour) {
        return error_result(call, "argument_error", "forecast_hour (integer) is required");
    }
    if (*hour < ArchiveIndex::kMinForecastHour || *hour > ArchiveIndex::kMaxForecastHour) {
        return error_result(call, "argument_error",
                            "forecast_hour must be between 12 and 36, got " +
                                std::to_string(*hour));
    }
    const double lat = args["latitude"].get<double>();
    const double lon = args["longitude"].get<double>();
    if (lat < -90.0 || lat > 90.0 || !std::isfinite(lat) || !std::isfinite(lon)) {
        return error_result(call, "argument_error", "coordinates out of range");
    }

    if (session.quota_used >= session.config.quota_total) {
        return error_result(call, "quota_exceeded",
                            "quota exceeded: all " + std::to_string(session.config.quota_total) +
                                " daily sounding requests have been used");
    }

    // Nearest station by great-circle distance; ties go to the lower id.
    // Stations are already sorted by id, so strict improvement keeps the
    // first of any equidistant pair.
    const GeoCoord query(lat, lon);
    const StationInfo* best = nullptr;
    double best_km = 0.0;
    for (const StationInfo& s : archive.stations) {
        const double d = haversine_km(query, s.location);
        if (!best || d < best_km) {
            best = &s;
            best_km = d;
        }
    }

    // The lookup ran: generation outcomes consume quota either way.
    session.quota_used += 1;
    session.sounding_requests += 1;
    const int remaining = session.config.quota_total - session.quota_used;

    if (!best) {
        ToolResult r = error_result(call, "sounding_generation_error",
                                    "sounding generation error: no stations available");
        r.remaining_quota = remaining;
        return r;
    }
    const auto asset = archive.sounding_asset(best->id, *hour);
    char dist[32];
    std::snprintf(dist, sizeof(dist), "%.1f", best_km);
    if (!asset) {
        ToolResult r = error_result(call, "sounding_generation_error",
                                    "sounding generation error: station " + best->id +
                                        " has no sounding for forecast hour " +
                                        std::to_string(*hour) + ". Remaining sounding quota: " +
                                        std::to_string(remaining) + ".");
        r.remaining_quota = remaining;
        return r;
    }
    ToolResult r;
    r.tool_call_id = call.id;
    r.tool_name = call.name;
    r.text = "Sounding for station " + best->id + " (" + dist +
             " km from the requested point) at forecast hour " + std::to_string(*hour) +
             ". Remaining sounding quota: " + std::to_string(remaining) + ".";
    r.remaining_quota = remaining;
    attach_image(r, session, *asset);
    return r;
}

ToolResult run_submit(Session& session, const LambertConfig& cfg, const ToolCall& call) {
    json args;
    try {
        args = json::parse(call.arguments_json.empty() ? "{}" : call.arguments_json);
    } catch (const json::parse_error& e) {
        // Unparseable arguments still end the day: the agent spent its one
        // submission on a document nobody can read.
        session.terminal = TerminalState::submitted;
        session.has_submission = true;
        session.submission = validate_prediction("", cfg);
        return error_result(call, "validation_failed",
                            std::string("prediction rejected: arguments are not valid JSON: ") +
                                e.what());
    }
    if (!args.contains("prediction_geojson") || !args["prediction_geojson"].is_string()) {
        session.terminal = TerminalState::submitted;
        session.has_submission = true;
        session.submission = validate_prediction("", cfg);
        return error_result(call, "validation_failed",
                            "prediction rejected: prediction_geojson (string) is required");
    }
    const std::string text = args["prediction_geojson"].get<std::string>();
    session.submission = validate_prediction(text, cfg);
    session.submission.riskmap.date = session.date;
    session.has_submission = true;
    session.terminal = TerminalState::submitted;

    ToolResult r;
    r.tool_call_id = call.id;
    r.tool_name = call.name;
    if (session.submission.accepted) {
        r.text = "Prediction accepted for " + format_date(session.date) +
                 " (max risk level " + risk_label(session.submission.riskmap.max_level()) +
                 "). The interaction for this forecast day is complete.";
    } else {
        r.error_code = "validation_failed";
        std::string msg = "prediction rejected:";
        for (const ValidationIssue& issue : session.submission.errors) {
            msg += " [" + issue.code + "] " + issue.message + ";";
        }
        r.text = msg;
    }
    return r;
}

}  // namespace

const char* terminal_state_name(TerminalState s) {
    switch (s) {
        case TerminalState::open: return "open";
        case TerminalState::submitted: return "submitted";
        case TerminalState::max_turns: return "max_turns";
        case TerminalState::agent_error: return "agent_error";
    }
    return "unknown";
}

std::string tool_schemas_json(const SessionConfig& config) {
    json tools = json::array();
    tools.push_back(
        {{"name", kToolListMapTypes},
         {"description",
          "Lists the available HRRR map plot types for the forecast day. Call this first to "
          "see what map types can be requested."},
         {"parameters",
          {{"type", "object"}, {"properties", json::object()}, {"required", json::array()}}}});
    tools.push_back(
        {{"name", kToolRequestMap},
         {"description",
          "Requests one HRRR forecast map image (PNG). Provide the exact map_type_directory "
          "name from list_available_map_types and an integer forecast_hour from 12 to 36."},
         {"parameters",
          {{"type", "object"},
           {"properties",
            {{"map_type_directory",
              {{"type", "string"},
               {"description", "Exact directory name of the map type, as listed."}}},
             {"forecast_hour",
              {{"type", "integer"},
               {"description", "Forecast hour for the map, e.g. 12, 18, 36."}}}}},
           {"required", json::array({"map_type_directory", "forecast_hour"})}}}});
    tools.push_back(
        {{"name", kToolRequestSounding},
         {"description",
          "Returns a forecast sounding plot (PNG) for the station nearest the given latitude "
          "and longitude at an integer forecast_hour from 12 to 36. Limited to " +
              std::to_string(config.quota_total) + " soundings per day."},
         {"parameters",
          {{"type", "object"},
           {"properties",
            {{"latitude",
              {{"type", "number"}, {"description", "Target latitude in decimal degrees."}}},
             {"longitude",
              {{"type", "number"}, {"description", "Target longitude in decimal degrees."}}},
             {"forecast_hour",
              {{"type", "integer"}, {"description", "Forecast hour, e.g. 12, 15, 24."}}}}},
           {"required", json::array({"latitude", "longitude", "forecast_hour"})}}}});
    tools.push_back(
        {{"name", kToolSubmit},
         {"description",
          "Submits the final tornado risk prediction and ends the forecast day. Call exactly "
          "once, when your analysis is complete. The prediction must be a GeoJSON "
          "FeatureCollection string; every Feature carries properties.risk_level (one of 2%, "
          "5%, 10%, 15%, 30%, 45%, 60%) and Polygon or MultiPolygon geometry. Use MultiPolygon "
          "for disjoint areas of one level, and nest higher risk areas spatially inside all "
          "lower ones."},
         {"parameters",
          {{"type", "object"},
           {"properties",
            {{"prediction_geojson",
              {{"type", "string"},
               {"description", "The forecast as a GeoJSON FeatureCollection string."}}}}},
           {"required", json::array({"prediction_geojson"})}}}});
    return tools.dump();
}

std::string system_prompt(const Date& date, const SessionConfig& config) {
    const std::string date_str = format_date(date);
    const std::string next_str = format_date(next_day(date));
    std::string p;
    p += "You are an expert autonomous AI meteorologist issuing Storm Prediction Center "
         "(SPC)-style tornado risk forecasts from 00z HRRR model data.\n\n";
    p += "Objective: produce an SPC-style tornado risk outlook for the CONUS covering " +
         date_str + " 12:00 UTC through " + next_str +
         " 12:00 UTC (forecast hours 12-36 of the 00z run).\n\n";
    p += "Evaluation: your prediction is scored against a ground truth derived from observed "
         "tornado reports. Reports are smoothed into a probability density on an ~80 km grid "
         "with a Gaussian kernel (sigma ~120 km), interpolated to ~5 km, integrated over a "
         "40 km radius neighborhood, converted to a probability via P = 1 - exp(-lambda), "
         "thresholded into the standard SPC categories, and vectorized into polygons. Your "
         "risk polygons are compared per category against these polygons, and your daily "
         "score is the mean Intersection over Union across the categories present on either "
         "side. Placement, extent, and correct nesting of the risk levels all matter.\n\n";
    p += "Each risk probability you draw (2%, 5%, 10%, 15%, 30%, 45%, 60%) is the chance of "
         "a tornado within 25 miles (about 40 km) of any point inside that area during the "
         "forecast period.\n\n";
    p += "Workflow: start by calling " + std::string(kToolListMapTypes) +
         " to see the data available for the day. Use " + kToolRequestMap + " and " +
         kToolRequestSounding +
         " strategically (soundings are limited to " + std::to_string(config.quota_total) +
         " per day) to build your analysis. When confident, call " + kToolSubmit +
         " with the nested GeoJSON forecast, including every separate area for each risk "
         "level.\n\n";
    p += "Map and sounding images arrive as PNGs embedded directly in the conversation and "
         "consume context. Budget your requests against the context limit of " +
         std::to_string(config.context_limit_tokens) + " tokens.\n\n";
    p += "There is no human in the loop. Never ask for permission or preferences; decide and "
         "act yourself. If you need more evidence, request specific maps or soundings within "
         "the quota; otherwise submit a valid GeoJSON prediction.";
    return p;
}

std::string first_user_prompt(const Date& date, const SessionConfig& config) {
    return "Today's forecast date is " + format_date(date) + ".\n\nYou have " +
           std::to_string(config.quota_total) +
           " sounding requests available for today.\n\nPlease start by calling " +
           kToolListMapTypes + " to see the available map plots. Remember to call " +
           std::string(kToolSubmit) + " with your final GeoJSON prediction when you are "
           "confident in your analysis.";
}

namespace {

std::size_t message_bytes(const Message& m) {
    std::size_t n = m.role.size() + m.tool_name.size() + m.tool_call_id.size();
    for (const MessagePart& p : m.parts) {
        n += p.text.size() + p.data_base64.size() + p.path.size();
    }
    for (const ToolCall& c : m.tool_calls) {
        n += c.name.size() + c.arguments_json.size();
    }
    return n;
}

}  // namespace

std::string token_usage_note(const Session& session) {
    const TokenEstimator& est = session.config.token_estimator;
    auto tokens = [&](std::size_t bytes) {
        return est ? est(bytes) : bytes / 4;
    };
    std::size_t total = 0;
    for (const Message& m : session.transcript) total += message_bytes(m);
    const std::size_t last =
        session.transcript.empty() ? 0 : message_bytes(session.transcript.back());
    return "Token usage: The current prompt is about " + std::to_string(tokens(last)) +
           " tokens. The conversation so far totals about " + std::to_string(tokens(total)) +
           " tokens. Context limit: " + std::to_string(session.config.context_limit_tokens) +
           " tokens.";
}

ToolResult dispatch_tool_call(Session& session, const ArchiveIndex& archive,
                              const LambertConfig& cfg, const ToolCall& call) {
    session.tool_calls += 1;
    ToolResult result;
    if (session.terminal != TerminalState::open) {
        result = error_result(call, "session_terminal",
                              "the session is already terminal; no further tool calls are "
                              "accepted");
    } else if (call.name == kToolListMapTypes) {
        result = run_list_map_types(session, archive, call);
    } else if (call.name == kToolRequestMap) {
        result = run_request_map(session, archive, call);
    } else if (call.name == kToolRequestSounding) {
        result = run_request_sounding(session, archive, call);
    } else if (call.name == kToolSubmit) {
        result = run_submit(session, cfg, call);
    } else {
        result = error_result(call, "unknown_tool", "unknown tool: '" + call.name + "'");
    }
    append_result(session, result);
    return result;
}

Session run_session(AgentEndpoint& endpoint, const Date& date, const ArchiveIndex& archive,
                    const LambertConfig& cfg, const SessionConfig& config) {
    Session session;
    session.date = date;
    session.config = config;
    if (!session.config.token_estimator) {
        session.config.token_estimator = [](std::size_t bytes) { return bytes / 4; };
    }
    session.transcript.push_back(text_message("system", system_prompt(date, session.config)));
    session.transcript.push_back(text_message("user", first_user_prompt(date, session.config)));
    const std::string tools = tool_schemas_json(session.config);

    int call_counter = 0;
    while (session.terminal == TerminalState::open) {
        if (session.assistant_turns >= session.config.max_assistant_turns) {
            session.terminal = TerminalState::max_turns;
            break;
        }
        EndpointRequest request;
        request.messages = &session.transcript;
        request.tools_json = tools;
        request.usage_note = token_usage_note(session);

        EndpointResponse response;
        try {
            response = endpoint.next(request);
        } catch (const std::exception& e) {
            session.terminal = TerminalState::agent_error;
            session.endpoint_error = e.what();
            break;
        }
        session.assistant_turns += 1;

        Message assistant;
        assistant.role = "assistant";
        if (response.tool_calls.empty()) {
            MessagePart part;
            part.kind = MessagePart::Kind::text;
            part.text = response.text;
            assistant.parts.push_back(std::move(part));
            session.transcript.push_back(std::move(assistant));
            continue;
        }
        for (ToolCall& call : response.tool_calls) {
            if (call.id.empty()) {
                call.id = "call_" + std::to_string(++call_counter);
            }
        }
        assistant.tool_calls = response.tool_calls;
        session.transcript.push_back(std::move(assistant));
        for (const ToolCall& call : response.tool_calls) {
            dispatch_tool_call(session, archive, cfg, call);
        }
    }
    return session;
}

std::string transcript_to_json(const Session& session) {
    json doc;
    doc["date"] = format_date(session.date);
    doc["quota_total"] = session.config.quota_total;
    doc["quota_used"] = session.quota_used;
    doc["terminal_state"] = terminal_state_name(session.terminal);
    doc["stats"] = {{"assistant_turns", session.assistant_turns},
                    {"tool_calls", session.tool_calls},
                    {"sounding_requests", session.sounding_requests}};
    if (!session.endpoint_error.empty()) doc["endpoint_error"] = session.endpoint_error;
    json messages = json::array();
    for (const Message& m : session.transcript) {
        json jm;
        jm["role"] = m.role;
        if (!m.tool_call_id.empty()) jm["tool_call_id"] = m.tool_call_id;
        if (!m.tool_name.empty()) jm["tool_name"] = m.tool_name;
        if (!m.error_code.empty()) jm["error_code"] = m.error_code;
        json parts = json::array();
        for (const MessagePart& p : m.parts) {
            json jp;
            if (p.kind == MessagePart::Kind::text) {
                jp["kind"] = "text";
                jp["text"] = p.text;
            } else {
                jp["kind"] = "image";
                jp["media_type"] = p.media_type;
                if (!p.data_base64.empty()) jp["base64"] = p.data_base64;
                if (!p.path.empty()) jp["path"] = p.path;
            }
            parts.push_back(std::move(jp));
        }
        jm["parts"] = std::move(parts);
        if (!m.tool_calls.empty()) {
            json calls = json::array();
            for (const ToolCall& c : m.tool_calls) {
                calls.push_back({{"id", c.id},
                                 {"name", c.name},
                                 {"arguments_json", c.arguments_json}});
            }
            jm["tool_calls"] = std::move(calls);
        }
        messages.push_back(std::move(jm));
    }
    doc["messages"] = std::move(messages);
    return doc.dump(2) + "\n";
}

std::vector<ToolCall> transcript_tool_calls(const std::string& transcript_json) {
    std::vector<ToolCall> out;
    const json doc = json::parse(transcript_json);
    for (const auto& m : doc.at("messages")) {
        if (!m.contains("tool_calls")) continue;
        for (const auto& c : m["tool_calls"]) {
            ToolCall call;
            call.id = c.value("id", "");
            call.name = c.value("name", "");
            call.arguments_json = c.value("arguments_json", "");
            out.push_back(std::move(call));
        }
    }
    return out;
}

RunRecord run_record(const Session& session, const std::string& model) {
    RunRecord run;
    run.model = model;
    run.date = session.date;
    run.transcript_json = transcript_to_json(session);
    run.prediction_text = session.has_submission ? session.submission.raw : "";
    json validation;
    validation["accepted"] = session.has_submission && session.submission.accepted;
    validation["terminal_state"] = terminal_state_name(session.terminal);
    json errors = json::array();
    if (session.has_submission) {
        for (const ValidationIssue& issue : session.submission.errors) {
            errors.push_back({{"code", issue.code}, {"message", issue.message}});
        }
    }
    validation["errors"] = std::move(errors);
    run.validation_json = validation.dump(2) + "\n";
    run.terminal_state = terminal_state_name(session.terminal);
    run.assistant_turns = session.assistant_turns;
    run.tool_calls = session.tool_calls;
    run.sounding_requests = session.sounding_requests;
    return run;
}

}  // namespace torcast
