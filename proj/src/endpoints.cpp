#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <utility>

#include <nlohmann/json.hpp>

#include "torcast/errors.hpp"
#include "torcast/harness.hpp"
#include "torcast/util.hpp"

#include <httplib.h>

using nlohmann::json;

namespace torcast {

namespace {

json wire_messages(const std::vector<Message>& messages) {
    json out = json::array();
    for (const Message& m : messages) {
        json jm;
        jm["role"] = m.role;
        if (!m.tool_call_id.empty()) jm["tool_call_id"] = m.tool_call_id;
        if (!m.tool_name.empty()) jm["name"] = m.tool_name;
        json content = json::array();
        for (const MessagePart& p : m.parts) {
            if (p.kind == MessagePart::Kind::text) {
                content.push_back({{"type", "text"}, {"text", p.text}});
            } else {
                json img{{"type", "image"}, {"media_type", p.media_type}};
                if (!p.data_base64.empty()) img["data"] = p.data_base64;
                if (!p.path.empty()) img["path"] = p.path;
                content.push_back(std::move(img));
            }
        }
        jm["content"] = std::move(content);
        if (!m.tool_calls.empty()) {
            json calls = json::array();
            for (const ToolCall& c : m.tool_calls) {
                calls.push_back(
                    {{"id", c.id}, {"name", c.name}, {"arguments", c.arguments_json}});
            }
            jm["tool_calls"] = std::move(calls);
        }
        out.push_back(std::move(jm));
    }
    return out;
}

std::string wire_request(const EndpointRequest& request) {
    json body;
    body["messages"] = wire_messages(*request.messages);
    body["tools"] = json::parse(request.tools_json);
    body["usage_note"] = request.usage_note;
    return body.dump();
}

EndpointResponse parse_wire_response(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw EndpointError(std::string("endpoint returned malformed JSON: ") + e.what());
    }
    EndpointResponse resp;
    if (j.contains("tool_calls") && j["tool_calls"].is_array() && !j["tool_calls"].empty()) {
        for (const auto& c : j["tool_calls"]) {
            ToolCall call;
            call.id = c.value("id", "");
            if (!c.contains("name") || !c["name"].is_string()) {
                throw EndpointError("endpoint tool call is missing a name");
            }
            call.name = c["name"].get<std::string>();
            if (c.contains("arguments")) {
                call.arguments_json = c["arguments"].is_string()
                                          ? c["arguments"].get<std::string>()
                                          : c["arguments"].dump();
            }
            resp.tool_calls.push_back(std::move(call));
        }
    } else if (j.contains("text") && j["text"].is_string()) {
        resp.text = j["text"].get<std::string>();
    } else {
        throw EndpointError("endpoint response carries neither tool_calls nor text");
    }
    return resp;
}

class HttpEndpoint : public AgentEndpoint {
public:
    explicit HttpEndpoint(const std::string& url) {
        // Split scheme://host[:port] from the path.
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            throw ArgumentError("http endpoint needs a full URL, got '" + url + "'");
        }
        const auto path_start = url.find('/', scheme_end + 3);
        base_ = path_start == std::string::npos ? url : url.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    }

    EndpointResponse next(const EndpointRequest& request) override {
        httplib::Client client(base_);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(300, 0);
        const std::string body = wire_request(request);
        auto res = client.Post(path_, body, "application/json");
        if (!res) {
            throw EndpointError("http endpoint unreachable: " + base_ + path_ + " (" +
                                httplib::to_string(res.error()) + ")");
        }
        if (res->status != 200) {
            throw EndpointError("http endpoint returned status " + std::to_string(res->status));
        }
        return parse_wire_response(res->body);
    }

private:
    std::string base_;
    std::string path_;
};

/// Child process speaking one JSON line per turn on stdin/stdout.
class ProcEndpoint : public AgentEndpoint {
public:
    explicit ProcEndpoint(const std::string& command) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw EndpointError("cannot create pipes for child endpoint");
        }
        pid_ = fork();
        if (pid_ < 0) {
            throw EndpointError("cannot fork child endpoint");
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];
    }

    ~ProcEndpoint() override {
        if (write_fd_ >= 0) close(write_fd_);
        if (read_fd_ >= 0) close(read_fd_);
        if (pid_ > 0) {
            int status = 0;
            waitpid(pid_, &status, 0);
        }
    }

    EndpointResponse next(const EndpointRequest& request) override {
        const std::string line = wire_request(request) + "\n";
        std::size_t off = 0;
        while (off < line.size()) {
            const ssize_t n = write(write_fd_, line.data() + off, line.size() - off);
            if (n <= 0) {
                throw EndpointError("child endpoint closed its input");
            }
            off += static_cast<std::size_t>(n);
        }
        std::string reply;
        char buf[4096];
        while (true) {
            struct pollfd pfd{read_fd_, POLLIN, 0};
            const int pr = poll(&pfd, 1, kReadTimeoutMs);
            if (pr == 0) {
                throw EndpointError("child endpoint timed out");
            }
            if (pr < 0) {
                throw EndpointError("poll on child endpoint failed");
            }
            const ssize_t n = read(read_fd_, buf, sizeof(buf));
            if (n <= 0) {
                throw EndpointError("child endpoint closed its output");
            }
            reply.append(buf, static_cast<std::size_t>(n));
            const auto nl = reply.find('\n');
            if (nl != std::string::npos) {
                reply.resize(nl);
                break;
            }
        }
        return parse_wire_response(reply);
    }

private:
    static constexpr int kReadTimeoutMs = 120000;
    pid_t pid_ = -1;
    int write_fd_ = -1;
    int read_fd_ = -1;
};

}  // namespace

ScriptedEndpoint::ScriptedEndpoint(std::vector<EndpointResponse> steps)
    : steps_(std::move(steps)) {}

std::unique_ptr<ScriptedEndpoint> ScriptedEndpoint::from_file(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("script endpoint file is not valid JSON: " + path + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw ConfigError("script endpoint file must hold a JSON array of steps: " + path);
    }
    std::vector<EndpointResponse> steps;
    for (const auto& step : doc) {
        steps.push_back(parse_wire_response(step.dump()));
    }
    return std::make_unique<ScriptedEndpoint>(std::move(steps));
}

EndpointResponse ScriptedEndpoint::next(const EndpointRequest& request) {
    (void)request;
    if (cursor_ >= steps_.size()) {
        throw EndpointError("scripted endpoint ran out of steps");
    }
    return steps_[cursor_++];
}

std::unique_ptr<AgentEndpoint> make_endpoint(const std::string& spec) {
    if (spec.rfind("script:", 0) == 0) {
        return ScriptedEndpoint::from_file(spec.substr(7));
    }
    if (spec.rfind("http:", 0) == 0 || spec.rfind("https:", 0) == 0) {
        return std::make_unique<HttpEndpoint>(spec);
    }
    if (spec.rfind("proc:", 0) == 0) {
        return std::make_unique<ProcEndpoint>(spec.substr(5));
    }
    throw ArgumentError("unknown endpoint spec '" + spec +
                        "' (want script:FILE, http(s)://URL, or proc:CMD)");
}

}  // namespace torcast
