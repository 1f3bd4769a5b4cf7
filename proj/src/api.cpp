#include "vizblend/api.hpp"

#include "vizblend/error.hpp"

#include <cstdlib>

namespace vizblend {

namespace {

std::string param(const Json& params, const char* key) {
    if (!params.is_object() || !params.contains(key) || !params.at(key).is_string()) {
        throw Error(ErrorCode::invalid_request, std::string("missing string parameter '") + key + "'");
    }
    return params.at(key).get<std::string>();
}

Json session_info(const Session& s) {
    return {{"session_id", s.id()},
            {"revision", s.revision()},
            {"dataset", dataset_summary(s.dataset())}};
}

}  // namespace

std::optional<std::filesystem::path> data_dir_from_env() {
    const char* dir = std::getenv("LIGER_DATA_DIR");
    if (!dir || !*dir) return std::nullopt;
    return std::filesystem::path(dir);
}

Json run_op(Session& s, std::string_view name, const Json& params,
            std::optional<std::int64_t> expected) {
    CommitResult r;
    if (name == "set_axis") {
        r = s.set_axis(parse_channel(param(params, "channel")), param(params, "attribute"), expected);
    } else if (name == "set_mark") {
        r = s.set_mark(parse_channel(param(params, "channel")), param(params, "attribute"), expected);
    } else if (name == "switch") {
        r = s.switch_vis_type(parse_vis_type(param(params, "vis_type")), expected);
    } else if (name == "filter") {
        r = s.add_filter(param(params, "attribute"), expected);
    } else if (name == "update_filter") {
        r = s.update_filter(param(params, "rule_id"), widget_selection_from_json(params), expected);
    } else if (name == "sort") {
        r = s.sort(parse_sort_direction(param(params, "direction")), expected);
    } else if (name == "remove") {
        r = s.remove_encoding(parse_channel(param(params, "channel")), expected);
    } else if (name == "remove_filter") {
        r = s.remove_filter(param(params, "rule_id"), expected);
    } else if (name == "undo") {
        r = s.undo(expected);
    } else if (name == "redo") {
        r = s.redo(expected);
    } else {
        throw Error(ErrorCode::invalid_request, "unknown op '" + std::string(name) + "'");
    }
    return to_json(r);
}

Engine::Engine(EngineOptions options) : options_(std::move(options)) {
    if (!options_.data_dir) options_.data_dir = data_dir_from_env();
}

std::shared_ptr<const Dataset> Engine::load_named_dataset(std::string_view name) {
    if (!options_.data_dir) {
        throw Error(ErrorCode::invalid_request, "no data directory configured (LIGER_DATA_DIR)");
    }
    if (name.empty() || name.find('/') != std::string_view::npos ||
        name.find('\\') != std::string_view::npos || name.find("..") != std::string_view::npos) {
        throw Error(ErrorCode::invalid_request, "bad dataset name '" + std::string(name) + "'");
    }
    std::string file(name);
    if (std::filesystem::path(file).extension() != ".csv") file += ".csv";
    std::lock_guard lock(datasets_mu_);
    if (auto it = datasets_.find(file); it != datasets_.end()) return it->second;
    const auto path = *options_.data_dir / file;
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorCode::invalid_request, "no dataset '" + std::string(name) + "' in " +
                                                    options_.data_dir->string());
    }
    auto d = std::make_shared<const Dataset>(load_csv_file(path.string()));
    datasets_.emplace(file, d);
    return d;
}

Json Engine::create_session(const Json& body) {
    if (!body.is_object()) throw Error(ErrorCode::invalid_request, "session body must be an object");
    std::shared_ptr<const Dataset> dataset;
    std::optional<std::string> name;
    if (body.contains("csv")) {
        CsvOptions opt;
        opt.dataset_id = body.value("dataset_id", std::string("upload"));
        dataset = std::make_shared<const Dataset>(load_csv_text(param(body, "csv"), opt));
    } else {
        name = param(body, "dataset");
        dataset = load_named_dataset(*name);
    }
    auto s = sessions_.create(std::move(dataset));
    if (name) s->set_dataset_path(*name);
    return session_info(*s);
}

Json Engine::create_session(std::shared_ptr<const Dataset> dataset) {
    return session_info(*sessions_.create(std::move(dataset)));
}

Json Engine::restore_session(const Json& snapshot) {
    SessionSnapshot snap = snapshot_from_json(snapshot);
    snap.session_id = sessions_.available_id(snap.session_id);
    std::shared_ptr<const Dataset> dataset;
    if (snapshot.contains("csv")) {
        // Uploaded data has no path; the caller sends it back inline.
        CsvOptions opt;
        opt.dataset_id = snap.dataset_id;
        dataset = std::make_shared<const Dataset>(load_csv_text(param(snapshot, "csv"), opt));
    } else if (snap.dataset_path) {
        dataset = load_named_dataset(*snap.dataset_path);
    } else {
        throw Error(ErrorCode::invalid_request, "snapshot has no dataset path; send the data as \"csv\"");
    }
    auto s = sessions_.adopt(Session::from_snapshot(snap, std::move(dataset)));
    return session_info(*s);
}

bool Engine::delete_session(std::string_view session_id) { return sessions_.erase(session_id); }

Json Engine::get(std::string_view session_id, std::string_view resource, bool all) const {
    const auto s = sessions_.get(session_id);
    if (resource == "spec") return to_json(s->spec());
    if (resource == "view") return to_json(s->view());
    if (resource == "filters") {
        Json out = Json::array();
        for (const auto& w : s->filters()) out.push_back(to_json(w));
        return out;
    }
    if (resource == "shelves") {
        Json out = Json::array();
        for (const auto& sh : s->shelves()) out.push_back(to_json(sh));
        return out;
    }
    if (resource == "recommendations") return to_json(s->recommendations(), all);
    if (resource == "snapshot") return to_json(s->snapshot());
    if (resource == "dataset") return dataset_summary(s->dataset());
    if (resource == "log") {
        const CommandLog log = s->log();
        Json entries = Json::array();
        for (const auto& e : log.entries()) entries.push_back(to_json(e));
        return {{"entries", entries}, {"cursor", log.cursor()}};
    }
    throw Error(ErrorCode::invalid_request, "unknown resource '" + std::string(resource) + "'");
}

Json Engine::op(std::string_view session_id, std::string_view name, const Json& params,
                std::optional<std::int64_t> expected) {
    return run_op(*sessions_.get(session_id), name, params, expected);
}

Json Engine::demonstrate(std::string_view session_id, const Json& demonstration) {
    const auto s = sessions_.get(session_id);
    return to_json(s->demonstrate(demonstration_from_json(demonstration)));
}

Json Engine::recommendation(std::string_view rec_id, std::string_view action,
                            std::optional<std::int64_t> expected) {
    const auto s = sessions_.get(session_of_recommendation(rec_id));
    if (action == "preview") return to_json(s->preview(rec_id));
    if (action == "accept") return to_json(s->accept(rec_id, expected));
    if (action == "reject") {
        s->reject(rec_id);
        return {{"rec_id", rec_id}, {"state", "rejected"}, {"revision", s->revision()}};
    }
    throw Error(ErrorCode::invalid_request, "unknown recommendation action '" + std::string(action) + "'");
}

Json Engine::reject_all(std::string_view session_id) {
    const auto s = sessions_.get(session_id);
    const std::size_t n = s->reject_all();
    return {{"rejected", n}, {"revision", s->revision()}};
}

}  // namespace vizblend
