#pragma once

#include "vizblend/api.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vizblend {

// What a script talks to: the engine in-process or a running service.
class EngineClient {
public:
    virtual ~EngineClient() = default;
    virtual Json create_session(const Json& body) = 0;
    virtual Json get(const std::string& session_id, const std::string& resource, bool all) = 0;
    virtual Json op(const std::string& session_id, const std::string& name, const Json& params,
                    std::optional<std::int64_t> expected_revision) = 0;
    virtual Json demonstrate(const std::string& session_id, const Json& demonstration) = 0;
    virtual Json recommendation(const std::string& rec_id, const std::string& action,
                                std::optional<std::int64_t> expected_revision) = 0;
    virtual Json reject_all(const std::string& session_id) = 0;
};

class InProcessClient : public EngineClient {
public:
    explicit InProcessClient(Engine& engine) : engine_(engine) {}
    Json create_session(const Json& body) override;
    Json get(const std::string& session_id, const std::string& resource, bool all) override;
    Json op(const std::string& session_id, const std::string& name, const Json& params,
            std::optional<std::int64_t> expected_revision) override;
    Json demonstrate(const std::string& session_id, const Json& demonstration) override;
    Json recommendation(const std::string& rec_id, const std::string& action,
                        std::optional<std::int64_t> expected_revision) override;
    Json reject_all(const std::string& session_id) override;

private:
    Engine& engine_;
};

// Error responses are rethrown as vizblend::Error with the server's code.
std::unique_ptr<EngineClient> make_http_client(const std::string& base_url);

struct StepOutcome {
    std::size_t index = 0;
    std::string action;
    bool ok = true;
    std::string message;
};

struct ScriptResult {
    std::string session_id;
    Json spec;
    Json view;             // null when the final spec does not render
    Json recommendations;  // last set, all entries
    std::vector<StepOutcome> steps;
    bool ok = true;
};

// Request body that creates the script's session: {"csv": ...} from a local
// file, or {"dataset": name} resolved by the engine.
Json session_body_for_file(const std::string& path);

// Throws ScriptError when the document is not a script.
Json parse_script(std::string_view text);

// Runs every step, stopping at the first failure.
ScriptResult run_script(EngineClient& client, const Json& script, const Json& session_body);

// Compares the keys present in `expected` ("spec", "view", "recommendations")
// with the result. Returns mismatch descriptions; empty means pass.
std::vector<std::string> check_assertions(const ScriptResult& result, const Json& expected);

}  // namespace vizblend
