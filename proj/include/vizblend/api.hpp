#pragma once

#include "vizblend/json_io.hpp"
#include "vizblend/session.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace vizblend {

struct EngineOptions {
    // Server-side dataset directory; defaults to $LIGER_DATA_DIR.
    std::optional<std::filesystem::path> data_dir;
};

// Directory named by LIGER_DATA_DIR, if set.
std::optional<std::filesystem::path> data_dir_from_env();

// JSON-level entry surface shared by the CLI, the HTTP service and the Python
// module. Every method throws vizblend::Error; responses are the same objects
// the service sends as bodies.
class Engine {
public:
    explicit Engine(EngineOptions options = {});

    // body: {"dataset": "<name in data dir>"} or {"csv": "<text>", "dataset_id"?}
    Json create_session(const Json& body);
    // Adds a session on an already loaded dataset.
    Json create_session(std::shared_ptr<const Dataset> dataset);
    Json restore_session(const Json& snapshot);
    bool delete_session(std::string_view session_id);

    // resource: spec | view | filters | shelves | recommendations | snapshot | dataset | log
    Json get(std::string_view session_id, std::string_view resource, bool all = false) const;

    // name: set_axis | set_mark | switch | filter | update_filter | sort | remove |
    //       remove_filter | undo | redo
    Json op(std::string_view session_id, std::string_view name, const Json& params,
            std::optional<std::int64_t> expected_revision = {});

    Json demonstrate(std::string_view session_id, const Json& demonstration);
    // action: preview | accept | reject
    Json recommendation(std::string_view rec_id, std::string_view action,
                        std::optional<std::int64_t> expected_revision = {});
    Json reject_all(std::string_view session_id);

    std::shared_ptr<Session> session(std::string_view session_id) const {
        return sessions_.get(session_id);
    }
    SessionRegistry& sessions() { return sessions_; }

    std::shared_ptr<const Dataset> load_named_dataset(std::string_view name);

private:
    EngineOptions options_;
    SessionRegistry sessions_;
    std::mutex datasets_mu_;
    std::map<std::string, std::shared_ptr<const Dataset>, std::less<>> datasets_;
};

// Runs one named MVS op against a session; returns the CommitResult JSON.
Json run_op(Session& session, std::string_view name, const Json& params,
            std::optional<std::int64_t> expected_revision = {});

}  // namespace vizblend
