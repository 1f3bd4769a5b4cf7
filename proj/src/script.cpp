#include "vizblend/script.hpp"

#include "vizblend/error.hpp"

#include <httplib.h>

#include <filesystem>
#include <set>
#include <fstream>
#include <sstream>

namespace vizblend {

Json InProcessClient::create_session(const Json& body) { return engine_.create_session(body); }

Json InProcessClient::get(const std::string& sid, const std::string& resource, bool all) {
    return engine_.get(sid, resource, all);
}

Json InProcessClient::op(const std::string& sid, const std::string& name, const Json& params,
                         std::optional<std::int64_t> expected) {
    return engine_.op(sid, name, params, expected);
}

Json InProcessClient::demonstrate(const std::string& sid, const Json& demo) {
    return engine_.demonstrate(sid, demo);
}

Json InProcessClient::recommendation(const std::string& rec_id, const std::string& action,
                                     std::optional<std::int64_t> expected) {
    return engine_.recommendation(rec_id, action, expected);
}

Json InProcessClient::reject_all(const std::string& sid) { return engine_.reject_all(sid); }

namespace {

class HttpClient : public EngineClient {
public:
    explicit HttpClient(const std::string& base_url) : client_(base_url) {
        client_.set_read_timeout(30, 0);
    }

    Json create_session(const Json& body) override { return post("/sessions", body, {}); }
    Json get(const std::string& sid, const std::string& resource, bool all) override {
        std::string path = "/sessions/" + sid + "/" + resource;
        if (all) path += "?all=true";
        return check(client_.Get(path), path);
    }
    Json op(const std::string& sid, const std::string& name, const Json& params,
            std::optional<std::int64_t> expected) override {
        return post("/sessions/" + sid + "/ops/" + name, params, expected);
    }
    Json demonstrate(const std::string& sid, const Json& demo) override {
        return post("/sessions/" + sid + "/demonstrations", demo, {});
    }
    Json recommendation(const std::string& rec_id, const std::string& action,
                        std::optional<std::int64_t> expected) override {
        return post("/recommendations/" + rec_id + "/" + action, Json::object(), expected);
    }
    Json reject_all(const std::string& sid) override {
        return post("/sessions/" + sid + "/recommendations/reject_all", Json::object(), {});
    }

private:
    Json post(const std::string& path, const Json& body, std::optional<std::int64_t> expected) {
        httplib::Headers headers;
        if (expected) headers.emplace("X-Revision", std::to_string(*expected));
        return check(client_.Post(path, headers, body.dump(), "application/json"), path);
    }

    static Json check(const httplib::Result& res, const std::string& path) {
        if (!res) {
            throw Error(ErrorCode::script_error,
                        "request " + path + " failed: " + httplib::to_string(res.error()));
        }
        Json body = res->body.empty() ? Json::object() : parse_json(res->body);
        if (res->status >= 400) {
            const Json& err = body.value("error", Json::object());
            throw Error(parse_error_code(err.value("code", std::string("InvalidRequest"))),
                        err.value("message", "HTTP " + std::to_string(res->status)));
        }
        return body;
    }

    httplib::Client client_;
};

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::script_error, msg); }

std::vector<Json> pending(const Json& recs, const std::string& division) {
    std::vector<Json> out;
    for (const auto& d : recs.at("divisions")) {
        if (!division.empty() && d.at("name") != division) continue;
        for (const auto& r : d.at("recommendations")) {
            if (r.at("state") == "pending") out.push_back(r);
        }
    }
    return out;
}

bool rec_matches(const Json& rec, const Json& pick) {
    const Json& ev = rec.at("evidence");
    if (pick.contains("template") && ev.at("template") != pick.at("template")) return false;
    if (pick.contains("attribute") && ev.at("attribute") != pick.at("attribute")) return false;
    if (pick.contains("direction")) {
        const Json& change = rec.at("change");
        if (!change.contains("sort") || change.at("sort").at("direction") != pick.at("direction")) {
            return false;
        }
    }
    return true;
}

std::string pick_recommendation(const Json& recs, const Json& pick) {
    const auto candidates = pending(recs, pick.value("division", std::string()));
    const std::size_t rank = pick.value("rank", std::size_t{1});
    std::size_t seen = 0;
    for (const auto& r : candidates) {
        if (!rec_matches(r, pick)) continue;
        if (++seen == rank) return r.at("rec_id").get<std::string>();
    }
    fail("no pending recommendation matches " + pick.dump());
}

std::string describe(const Json& j) { return j.dump(); }

void check_expectations(EngineClient& client, const std::string& sid, const Json& expect) {
    for (const auto& [key, want] : expect.items()) {
        if (key == "widget") {
            const Json filters = client.get(sid, "filters", false);
            bool found = false;
            for (const auto& w : filters) {
                if (want.contains("attribute") && w.at("attribute") != want.at("attribute")) continue;
                if (want.contains("kind") && w.at("kind") != want.at("kind")) continue;
                if (want.contains("values") && (!w.contains("values") ||
                                                w.at("values").size() != want.at("values").get<std::size_t>())) {
                    continue;
                }
                if (want.contains("checked") && (!w.contains("values") ||
                                                 [&] {
                                                     Json on = Json::array();
                                                     for (std::size_t i = 0; i < w.at("values").size(); ++i) {
                                                         if (w.at("checked")[i]) on.push_back(w.at("values")[i]);
                                                     }
                                                     return on != want.at("checked");
                                                 }())) {
                    continue;
                }
                found = true;
                break;
            }
            if (!found) fail("no filter widget matching " + describe(want) + " in " + describe(filters));
        } else if (key == "recommendations_include") {
            const Json recs = client.get(sid, "recommendations", true);
            const auto list = pending(recs, want.value("division", std::string()));
            const std::size_t top = want.value("top", kDivisionLimit);
            for (const auto& attr : want.at("attributes")) {
                bool found = false;
                for (std::size_t i = 0; i < list.size() && i < top; ++i) {
                    if (list[i].at("evidence").at("attribute") == attr) found = true;
                }
                if (!found) fail(attr.get<std::string>() + " not among the top " + std::to_string(top) + " recommendations");
            }
        } else if (key == "recommendation_exists") {
            const Json recs = client.get(sid, "recommendations", true);
            bool found = false;
            for (const auto& r : pending(recs, want.value("division", std::string()))) {
                if (rec_matches(r, want)) found = true;
            }
            if (!found) fail("no pending recommendation matching " + describe(want));
        } else if (key == "division_nonempty") {
            const Json recs = client.get(sid, "recommendations", true);
            if (pending(recs, want.get<std::string>()).empty()) fail(want.get<std::string>() + " is empty");
        } else if (key == "bar_extreme") {
            const Json view = client.get(sid, "view", false);
            const Json& order = view.at("bar_order");
            if (order.empty()) fail("no bars");
            const bool right = want.value("target", std::string("extreme_right")) == "extreme_right";
            const Json& at = right ? order.back() : order.front();
            if (at != want.at("category")) {
                fail("bar at " + std::string(right ? "right" : "left") + " is " + at.dump() +
                     ", wanted " + want.at("category").dump());
            }
        } else if (key == "mark_count") {
            const Json view = client.get(sid, "view", false);
            if (view.at("marks").size() != want.get<std::size_t>()) {
                fail("mark count " + std::to_string(view.at("marks").size()) + ", wanted " + want.dump());
            }
        } else if (key == "visible_rows") {
            const Json view = client.get(sid, "view", false);
            if (view.at("visible_rows") != want) fail("visible rows " + view.at("visible_rows").dump());
        } else if (key == "vis_type" || key == "sort" || key == "revision") {
            const Json spec = client.get(sid, "spec", false);
            if (spec.at(key) != want) fail(key + " is " + spec.at(key).dump() + ", wanted " + want.dump());
        } else if (key == "binding") {
            const Json spec = client.get(sid, "spec", false);
            const std::string ch = want.at("channel");
            const Json& b = spec.at("bindings");
            const bool bound = b.contains(ch);
            if (want.contains("attribute")) {
                if (want.at("attribute").is_null() ? bound
                                                   : (!bound || b.at(ch).at("attribute") != want.at("attribute"))) {
                    fail(ch + " binding is " + (bound ? b.at(ch).at("attribute").dump() : "unbound"));
                }
            }
        } else if (key == "shelf") {
            const Json shelves = client.get(sid, "shelves", false);
            bool found = false;
            for (const auto& s : shelves) {
                if (s.at("channel") == want.at("channel") && (!want.contains("label") || s.at("label") == want.at("label"))) {
                    found = true;
                }
            }
            if (!found) fail("no shelf matching " + describe(want) + " in " + describe(shelves));
        } else {
            fail("unknown expectation '" + key + "'");
        }
    }
}

const std::set<std::string>& op_names() {
    static const std::set<std::string> names{"set_axis", "set_mark",      "switch", "filter",
                                             "update_filter", "sort",     "remove", "remove_filter",
                                             "undo",     "redo"};
    return names;
}

}  // namespace

std::unique_ptr<EngineClient> make_http_client(const std::string& base_url) {
    return std::make_unique<HttpClient>(base_url);
}

Json session_body_for_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::invalid_request, "cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return {{"csv", text.str()}, {"dataset_id", std::filesystem::path(path).stem().string()}};
}

Json parse_script(std::string_view text) {
    Json script;
    try {
        script = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("script is not JSON: ") + e.what());
    }
    if (!script.is_object() || !script.contains("steps") || !script.at("steps").is_array()) {
        fail("script must be an object with a \"steps\" array");
    }
    for (std::size_t i = 0; i < script.at("steps").size(); ++i) {
        const Json& step = script.at("steps")[i];
        if (!step.is_object() || !step.contains("do") || !step.at("do").is_string()) {
            fail("step " + std::to_string(i) + " needs a \"do\" string");
        }
    }
    return script;
}

ScriptResult run_script(EngineClient& client, const Json& script, const Json& session_body) {
    ScriptResult result;
    const Json created = client.create_session(session_body);
    result.session_id = created.at("session_id").get<std::string>();
    const std::string& sid = result.session_id;
    std::int64_t revision = created.at("revision").get<std::int64_t>();

    const Json& steps = script.at("steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Json& step = steps[i];
        StepOutcome out;
        out.index = i;
        out.action = step.at("do").get<std::string>();
        const std::string expect_error = step.value("expect_error", std::string());
        const std::int64_t sent_revision = step.value("revision", revision);
        Json params = step;
        for (const char* k : {"do", "expect", "expect_error", "revision", "note"}) params.erase(k);
        try {
            try {
                Json resp;
                if (op_names().count(out.action)) {
                    resp = client.op(sid, out.action, params, sent_revision);
                } else if (out.action == "demonstrate") {
                    resp = client.demonstrate(sid, step.at("demonstration"));
                } else if (out.action == "preview" || out.action == "accept" || out.action == "reject") {
                    const Json recs = client.get(sid, "recommendations", true);
                    const std::string rec_id = pick_recommendation(recs, step.value("pick", Json::object()));
                    resp = client.recommendation(rec_id, out.action, sent_revision);
                } else if (out.action == "reject_all") {
                    resp = client.reject_all(sid);
                } else if (out.action != "check") {
                    fail("unknown step action '" + out.action + "'");
                }
                if (resp.is_object() && resp.contains("revision") && out.action != "preview") {
                    revision = resp.at("revision").get<std::int64_t>();
                }
                if (!expect_error.empty()) fail("expected " + expect_error + ", step succeeded");
            } catch (const Error& e) {
                if (e.code() == ErrorCode::script_error || to_string(e.code()) != expect_error) throw;
            }
            if (step.contains("expect")) check_expectations(client, sid, step.at("expect"));
        } catch (const Error& e) {
            out.ok = false;
            out.message = std::string(to_string(e.code())) + ": " + e.what();
        } catch (const nlohmann::json::exception& e) {
            out.ok = false;
            out.message = std::string("malformed step or response: ") + e.what();
        }
        result.steps.push_back(out);
        if (!out.ok) {
            result.ok = false;
            break;
        }
    }

    result.spec = client.get(sid, "spec", false);
    try {
        result.view = client.get(sid, "view", false);
    } catch (const Error&) {
        result.view = nullptr;
    }
    result.recommendations = client.get(sid, "recommendations", true);
    return result;
}

std::vector<std::string> check_assertions(const ScriptResult& result, const Json& expected) {
    std::vector<std::string> mismatches;
    auto compare = [&](const char* key, const Json& actual) {
        if (!expected.contains(key)) return;
        if (expected.at(key) != actual) {
            const Json patch = Json::diff(expected.at(key), actual);
            mismatches.push_back(std::string(key) + " differs: " + patch.dump());
        }
    };
    compare("spec", result.spec);
    compare("view", result.view);
    if (expected.contains("ok") && expected.at("ok") != result.ok) {
        mismatches.push_back("ok is " + Json(result.ok).dump());
    }
    if (expected.contains("recommendations")) {
        Json recs = result.recommendations;
        // rec ids embed the session id, which differs between runs.
        for (auto& d : recs.at("divisions")) {
            for (auto& r : d.at("recommendations")) r.erase("rec_id");
        }
        Json want = expected.at("recommendations");
        if (want != recs) mismatches.push_back("recommendations differ: " + Json::diff(want, recs).dump());
    }
    return mismatches;
}

}  // namespace vizblend
