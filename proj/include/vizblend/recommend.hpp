#pragma once

#include "vizblend/intent.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vizblend {

enum class Division { encodings, filters, sorts };
enum class RecommendationState { pending, accepted, rejected, expired };

std::string_view to_string(Division d);  // "Recommended Encodings", ...
std::string_view to_string(RecommendationState s);
Division division_of(CandidateKind kind);

struct Recommendation {
    std::string rec_id;
    Candidate candidate;
    std::string explanation;
    Division division = Division::encodings;
    RecommendationState state = RecommendationState::pending;
    std::int64_t base_revision = 0;
};

struct RecommendationSet {
    std::int64_t base_revision = 0;
    std::vector<Recommendation> recommendations;  // score order
};

// Presentation cap per division; the full list stays queryable.
inline constexpr std::size_t kDivisionLimit = 5;

// Wording lives in data/explanations.json, compiled in at build time.
class ExplanationTemplates {
public:
    static const ExplanationTemplates& builtin();
    static ExplanationTemplates from_json_text(std::string_view text);

    std::string explain(const Candidate& candidate) const;

private:
    std::map<std::string, std::string, std::less<>> templates_;
    const std::string& lookup(std::string_view key) const;
};

std::string explain(const Candidate& candidate);

// Pending recommendation lifecycle for one session. Not thread-safe; the
// owning session serializes access.
class RecommendationBook {
public:
    explicit RecommendationBook(std::string id_prefix) : prefix_(std::move(id_prefix)) {}

    // Replaces the pending set; earlier pending entries expire.
    const RecommendationSet& publish(std::vector<Candidate> candidates, std::int64_t revision);

    const RecommendationSet& current() const { return current_; }
    // Throws UnknownRecommendation.
    const Recommendation& find(std::string_view rec_id) const;
    // Throws UnknownRecommendation or Expired unless pending at `revision`.
    const Recommendation& require_pending(std::string_view rec_id, std::int64_t revision) const;

    void mark_accepted(std::string_view rec_id);
    void reject(std::string_view rec_id);
    std::size_t reject_all();
    // Pending entries built against another revision become expired.
    void expire_stale(std::int64_t revision);

private:
    Recommendation& find_mutable(std::string_view rec_id);

    std::string prefix_;
    std::uint64_t next_id_ = 1;
    RecommendationSet current_;
    std::map<std::string, RecommendationState, std::less<>> retired_;
};

}  // namespace vizblend
