#include "vizblend/recommend.hpp"

#include "vizblend/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace vizblend {

// Generated from data/explanations.json.
extern const char* const kExplanationTemplatesJson;

namespace {

std::string fill(std::string text, const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(text.size() + 16);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '{') {
            const auto close = text.find('}', i);
            if (close != std::string::npos) {
                const auto it = vars.find(text.substr(i + 1, close - i - 1));
                if (it != vars.end()) {
                    out += it->second;
                    i = close;
                    continue;
                }
            }
        }
        out.push_back(text[i]);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ", ";
        out += p;
    }
    return out;
}

}  // namespace

std::string_view to_string(Division d) {
    switch (d) {
        case Division::encodings: return "Recommended Encodings";
        case Division::filters: return "Recommended Filters";
        case Division::sorts: return "Recommended Sorts";
    }
    return "";
}

std::string_view to_string(RecommendationState s) {
    switch (s) {
        case RecommendationState::pending: return "pending";
        case RecommendationState::accepted: return "accepted";
        case RecommendationState::rejected: return "rejected";
        case RecommendationState::expired: return "expired";
    }
    return "";
}

Division division_of(CandidateKind kind) {
    switch (kind) {
        case CandidateKind::encoding: return Division::encodings;
        case CandidateKind::filter: return Division::filters;
        case CandidateKind::sort: return Division::sorts;
    }
    return Division::encodings;
}

const ExplanationTemplates& ExplanationTemplates::builtin() {
    static const ExplanationTemplates instance = from_json_text(kExplanationTemplatesJson);
    return instance;
}

ExplanationTemplates ExplanationTemplates::from_json_text(std::string_view text) {
    ExplanationTemplates t;
    const auto doc = nlohmann::json::parse(text);
    for (const auto& [key, value] : doc.items()) t.templates_[key] = value.get<std::string>();
    return t;
}

const std::string& ExplanationTemplates::lookup(std::string_view key) const {
    const auto it = templates_.find(key);
    if (it == templates_.end()) {
        throw Error(ErrorCode::invalid_request, "no explanation template '" + std::string(key) + "'");
    }
    return it->second;
}

std::string ExplanationTemplates::explain(const Candidate& candidate) const {
    const Evidence& e = candidate.evidence;
    std::map<std::string, std::string> vars{{"attribute", e.attribute}};
    std::string key = e.template_name;
    if (const auto* add = std::get_if<change::AddFilter>(&candidate.change.action)) {
        if (const auto* range = std::get_if<RangeFilter>(&add->rule.form)) {
            vars["lo"] = format_number(range->lo);
            vars["hi"] = format_number(range->hi);
        } else if (const auto* points = std::get_if<PointSetFilter>(&add->rule.form)) {
            vars["count"] = std::to_string(points->excluded.size());
            if (points->excluded.size() == 1) key = "point_set_one";
        } else {
            vars["values"] = join(e.excluded_values);
            if (e.excluded_values.size() > 1) key = "value_set_many";
        }
    } else if (const auto* sort = std::get_if<change::SetSort>(&candidate.change.action)) {
        vars["direction"] = std::string(to_string(sort->sort.direction));
    }
    return fill(lookup(key), vars);
}

std::string explain(const Candidate& candidate) {
    return ExplanationTemplates::builtin().explain(candidate);
}

const RecommendationSet& RecommendationBook::publish(std::vector<Candidate> candidates,
                                                     std::int64_t revision) {
    for (auto& r : current_.recommendations) {
        if (r.state == RecommendationState::pending) r.state = RecommendationState::expired;
        retired_[r.rec_id] = r.state;
    }
    RecommendationSet next;
    next.base_revision = revision;
    for (auto& c : candidates) {
        Recommendation r;
        r.rec_id = prefix_ + "r" + std::to_string(next_id_++);
        r.explanation = explain(c);
        r.division = division_of(c.kind);
        r.base_revision = revision;
        r.candidate = std::move(c);
        next.recommendations.push_back(std::move(r));
    }
    current_ = std::move(next);
    return current_;
}

const Recommendation& RecommendationBook::find(std::string_view rec_id) const {
    for (const auto& r : current_.recommendations) {
        if (r.rec_id == rec_id) return r;
    }
    if (retired_.count(rec_id)) {
        throw Error(ErrorCode::expired, "recommendation " + std::string(rec_id) + " was superseded");
    }
    throw Error(ErrorCode::unknown_recommendation, "unknown recommendation " + std::string(rec_id));
}

const Recommendation& RecommendationBook::require_pending(std::string_view rec_id,
                                                          std::int64_t revision) const {
    const Recommendation& r = find(rec_id);
    if (r.state != RecommendationState::pending || r.base_revision != revision) {
        throw Error(ErrorCode::expired, "recommendation " + std::string(rec_id) + " is " +
                                            std::string(r.state == RecommendationState::pending
                                                            ? "stale"
                                                            : to_string(r.state)));
    }
    return r;
}

Recommendation& RecommendationBook::find_mutable(std::string_view rec_id) {
    return const_cast<Recommendation&>(find(rec_id));
}

void RecommendationBook::mark_accepted(std::string_view rec_id) {
    for (auto& r : current_.recommendations) {
        if (r.state != RecommendationState::pending) continue;
        r.state = r.rec_id == rec_id ? RecommendationState::accepted : RecommendationState::expired;
    }
}

void RecommendationBook::reject(std::string_view rec_id) {
    Recommendation& r = find_mutable(rec_id);
    if (r.state != RecommendationState::pending) {
        throw Error(ErrorCode::expired, "recommendation " + std::string(rec_id) + " is " +
                                            std::string(to_string(r.state)));
    }
    r.state = RecommendationState::rejected;
}

std::size_t RecommendationBook::reject_all() {
    std::size_t n = 0;
    for (auto& r : current_.recommendations) {
        if (r.state == RecommendationState::pending) {
            r.state = RecommendationState::rejected;
            ++n;
        }
    }
    return n;
}

void RecommendationBook::expire_stale(std::int64_t revision) {
    for (auto& r : current_.recommendations) {
        if (r.state == RecommendationState::pending && r.base_revision != revision) {
            r.state = RecommendationState::expired;
        }
    }
}

}  // namespace vizblend
