#pragma once

#include "vizblend/data.hpp"
#include "vizblend/history.hpp"
#include "vizblend/intent.hpp"
#include "vizblend/mvs.hpp"
#include "vizblend/recommend.hpp"
#include "vizblend/render.hpp"
#include "vizblend/session.hpp"
#include "vizblend/spec.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace vizblend {

using Json = nlohmann::json;

// Object keys serialize sorted, so dump() of any of these is canonical.
struct SpecJsonOptions {
    bool revision = true;
    bool provenance = true;
};

Json to_json(const Attribute& a);
Json dataset_summary(const Dataset& d);
Json to_json(const ColorPalette& p);
Json to_json(const ChannelBinding& b, const SpecJsonOptions& opt = {});
Json to_json(const FilterRule& r, const SpecJsonOptions& opt = {});
Json to_json(const SortState& s);
Json to_json(const VisSpec& spec, const SpecJsonOptions& opt = {});
Json to_json(const SpecChange& c);
Json to_json(const Mark& m);
Json to_json(const AxisInfo& a);
Json to_json(const ViewModel& v);
Json to_json(const Selection& s);
Json to_json(const Demonstration& d);
Json to_json(const Evidence& e);
Json to_json(const Candidate& c);
Json to_json(const Recommendation& r);
// Grouped by division; each capped at kDivisionLimit unless `all`.
Json to_json(const RecommendationSet& s, bool all = false);
Json to_json(const FilterWidgetModel& w);
Json to_json(const ShelfState& s);
Json to_json(const CorollaryUpdate& u);
Json to_json(const CommitResult& r);
Json to_json(const LogEntry& e);
Json to_json(const PaletteMemory& m);
Json to_json(const SessionSnapshot& s);
Json to_json(const Event& e);
Json error_json(const std::string& code, const std::string& message);

// Parsers throw Error(InvalidRequest) on malformed input.
ColorPalette palette_from_json(const Json& j);
ChannelBinding binding_from_json(const Json& j, Channel channel);
FilterRule filter_from_json(const Json& j);
SortState sort_from_json(const Json& j);
VisSpec spec_from_json(const Json& j);
SpecChange change_from_json(const Json& j);
Selection selection_from_json(const Json& j);
Demonstration demonstration_from_json(const Json& j);
WidgetSelection widget_selection_from_json(const Json& j);
LogEntry log_entry_from_json(const Json& j);
PaletteMemory palette_memory_from_json(const Json& j);
SessionSnapshot snapshot_from_json(const Json& j);

// Parses text, mapping syntax errors to InvalidRequest.
Json parse_json(std::string_view text);

std::string canonical_spec(const VisSpec& spec, const SpecJsonOptions& opt = {});
std::string canonical_view(const ViewModel& view);

}  // namespace vizblend
