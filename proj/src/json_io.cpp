#include "vizblend/json_io.hpp"

#include "vizblend/error.hpp"

#include <cmath>

namespace vizblend {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_request, std::string("bad ") + what + ": " + e.what());
    }
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string_view kind_name(CandidateKind k) {
    switch (k) {
        case CandidateKind::encoding: return "encoding";
        case CandidateKind::filter: return "filter";
        case CandidateKind::sort: return "sort";
    }
    return "";
}

Json extent_json(const std::optional<Extent>& e) {
    if (!e) return nullptr;
    return Json::array({e->min, e->max});
}

std::string str(const Json& j, const char* key) { return j.at(key).get<std::string>(); }

}  // namespace

Json to_json(const Attribute& a) {
    return {{"name", a.name},
            {"kind", a.is_quantitative() ? "quantitative" : "categorical"},
            {"discrete", a.discrete},
            {"distinct_count", a.distinct_count},
            {"missing_count", a.missing_count},
            {"extent", extent_json(a.extent)},
            {"categories", a.categories}};
}

Json dataset_summary(const Dataset& d) {
    Json attrs = Json::array();
    for (const auto& a : d.attributes()) attrs.push_back(to_json(a));
    return {{"id", d.id()}, {"row_count", d.row_count()}, {"attributes", attrs}};
}

Json to_json(const ColorPalette& p) {
    Json values = Json::array();
    for (const auto& v : p.values) values.push_back({{"value", v.value}, {"color", v.color}});
    Json intervals = Json::array();
    for (const auto& i : p.intervals) {
        intervals.push_back({{"lo", i.lo}, {"hi", i.hi}, {"color", i.color}});
    }
    return {{"values", values},
            {"intervals", intervals},
            {"default_color", p.default_color},
            {"customized", p.customized}};
}

Json to_json(const ChannelBinding& b, const SpecJsonOptions& opt) {
    Json j{{"attribute", b.attribute}};
    if (b.palette) j["palette"] = to_json(*b.palette);
    if (opt.provenance) j["provenance"] = to_string(b.provenance);
    return j;
}

Json to_json(const FilterRule& r, const SpecJsonOptions& opt) {
    Json j{{"id", r.id}};
    if (opt.provenance) j["provenance"] = to_string(r.provenance);
    std::visit(overloaded{
                   [&](const RangeFilter& f) {
                       j["form"] = "Range";
                       j["attribute"] = f.attribute;
                       j["lo"] = f.lo;
                       j["hi"] = f.hi;
                       j["exclude"] = f.exclude;
                   },
                   [&](const ValueSetFilter& f) {
                       j["form"] = "ValueSet";
                       j["attribute"] = f.attribute;
                       j["included"] = f.included;
                   },
                   [&](const PointSetFilter& f) {
                       j["form"] = "PointSet";
                       j["excluded"] = f.excluded;
                   },
               },
               r.form);
    return j;
}

Json to_json(const SortState& s) {
    return {{"by_attribute", s.by_attribute}, {"direction", to_string(s.direction)}};
}

Json to_json(const VisSpec& spec, const SpecJsonOptions& opt) {
    Json bindings = Json::object();
    for (Channel c : kAllChannels) {
        if (const ChannelBinding* b = spec.binding(c)) bindings[std::string(to_string(c))] = to_json(*b, opt);
    }
    Json filters = Json::array();
    for (const auto& f : spec.filters) filters.push_back(to_json(f, opt));
    Json j{{"vis_type", to_string(spec.vis_type)},
           {"bindings", bindings},
           {"filters", filters},
           {"sort", to_json(spec.sort)}};
    if (opt.revision) j["revision"] = spec.revision;
    return j;
}

Json to_json(const SpecChange& c) {
    Json j{{"base_revision", c.base_revision}};
    std::visit(overloaded{
                   [&](const change::SetBinding& a) {
                       j["op"] = "SetBinding";
                       j["channel"] = to_string(a.binding.channel);
                       j["binding"] = to_json(a.binding);
                   },
                   [&](const change::RemoveBinding& a) {
                       j["op"] = "RemoveBinding";
                       j["channel"] = to_string(a.channel);
                   },
                   [&](const change::SetVisType& a) {
                       j["op"] = "SetVisType";
                       j["vis_type"] = to_string(a.vis_type);
                       if (a.exact_bindings) {
                           Json bs = Json::object();
                           for (const auto& b : *a.exact_bindings) {
                               bs[std::string(to_string(b.channel))] = to_json(b);
                           }
                           j["exact_bindings"] = bs;
                       }
                   },
                   [&](const change::AddFilter& a) {
                       j["op"] = "AddFilter";
                       j["rule"] = to_json(a.rule);
                       if (a.position) j["position"] = *a.position;
                   },
                   [&](const change::ReplaceFilter& a) {
                       j["op"] = "ReplaceFilter";
                       j["rule"] = to_json(a.rule);
                   },
                   [&](const change::RemoveFilter& a) {
                       j["op"] = "RemoveFilter";
                       j["rule_id"] = a.rule_id;
                   },
                   [&](const change::SetSort& a) {
                       j["op"] = "SetSort";
                       j["sort"] = to_json(a.sort);
                   },
               },
               c.action);
    return j;
}

Json to_json(const Mark& m) {
    Json j{{"mark_id", m.mark_id}, {"x", number(m.x)},         {"y", number(m.y)},
           {"size", number(m.size)}, {"color", m.color}};
    if (m.row) {
        j["row"] = *m.row;
    } else {
        j["category"] = m.category;
        j["y0"] = number(m.y0);
        j["value"] = number(m.value);
        if (!m.series.empty()) j["series"] = m.series;
    }
    return j;
}

Json to_json(const AxisInfo& a) {
    return {{"channel", to_string(a.channel)},
            {"attribute", a.attribute},
            {"domain", extent_json(a.domain)},
            {"categories", a.categories}};
}

Json to_json(const ViewModel& v) {
    Json marks = Json::array();
    for (const auto& m : v.marks) marks.push_back(to_json(m));
    Json axes = Json::array();
    for (const auto& a : v.axes) axes.push_back(to_json(a));
    return {{"vis_type", to_string(v.vis_type)}, {"revision", v.revision},
            {"marks", marks},                    {"axes", axes},
            {"bar_order", v.bar_order},          {"visible_rows", v.visible_rows}};
}

Json to_json(const Selection& s) {
    return {{"row_ids", s.row_ids}, {"origin", to_string(s.origin)}};
}

Json to_json(const Demonstration& d) {
    return std::visit(
        overloaded{
            [](const RecolorDemo& r) {
                Json groups = Json::array();
                for (const auto& g : r.groups) {
                    groups.push_back({{"color", g.color}, {"selection", to_json(g.selection)}});
                }
                return Json{{"type", "Recolor"}, {"groups", groups}};
            },
            [](const ResizeDemo& r) {
                Json points = Json::array();
                for (const auto& p : r.points) points.push_back({{"row", p.row}, {"size", p.size}});
                return Json{{"type", "Resize"}, {"points", points}};
            },
            [](const DragOutDemo& r) {
                return Json{{"type", "DragOutToFilter"}, {"selection", to_json(r.selection)}};
            },
            [](const DragBarDemo& r) {
                return Json{{"type", "DragBar"}, {"category", r.category}, {"target", to_string(r.target)}};
            },
        },
        d);
}

Json to_json(const Evidence& e) {
    Json j{{"template", e.template_name},
           {"attribute", e.attribute},
           {"type_affinity", number(e.type_affinity)},
           {"separation", number(e.separation)},
           {"parsimony", number(e.parsimony)},
           {"selection_size", e.selection_size},
           {"extension_size", e.extension_size}};
    if (!e.excluded_values.empty()) j["excluded_values"] = e.excluded_values;
    return j;
}

Json to_json(const Candidate& c) {
    return {{"kind", kind_name(c.kind)},
            {"score", c.score},
            {"evidence", to_json(c.evidence)},
            {"template_order", c.template_order},
            {"change", to_json(c.change)}};
}

Json to_json(const Recommendation& r) {
    return {{"rec_id", r.rec_id},
            {"explanation", r.explanation},
            {"division", to_string(r.division)},
            {"state", to_string(r.state)},
            {"base_revision", r.base_revision},
            {"score", r.candidate.score},
            {"kind", kind_name(r.candidate.kind)},
            {"evidence", to_json(r.candidate.evidence)},
            {"change", to_json(r.candidate.change)}};
}

Json to_json(const RecommendationSet& s, bool all) {
    Json divisions = Json::array();
    std::size_t total = 0;
    for (Division d : {Division::encodings, Division::filters, Division::sorts}) {
        Json recs = Json::array();
        std::size_t count = 0;
        for (const auto& r : s.recommendations) {
            if (r.division != d) continue;
            ++count;
            if (all || recs.size() < kDivisionLimit) recs.push_back(to_json(r));
        }
        total += count;
        divisions.push_back({{"name", to_string(d)}, {"total", count}, {"recommendations", recs}});
    }
    return {{"base_revision", s.base_revision}, {"total", total}, {"divisions", divisions}};
}

Json to_json(const FilterWidgetModel& w) {
    Json j{{"rule_id", w.rule_id},
           {"attribute", w.attribute},
           {"provenance", to_string(w.provenance)},
           {"kind", widget_kind(w.widget)},
           {"visible_count", w.visible_count},
           {"excluded_count", w.excluded_count},
           {"editable", w.editable}};
    std::visit(overloaded{
                   [&](const RangeSliderWidget& s) {
                       j["domain"] = Json::array({s.domain.min, s.domain.max});
                       j["lo"] = s.lo;
                       j["hi"] = s.hi;
                       j["exclude"] = s.exclude;
                   },
                   [&](const CheckboxSetWidget& c) {
                       j["values"] = c.values;
                       j["checked"] = c.checked;
                   },
                   [&](const PointChipWidget& p) { j["point_count"] = p.point_count; },
               },
               w.widget);
    return j;
}

Json to_json(const ShelfState& s) {
    return {{"channel", to_string(s.channel)},
            {"attribute", s.attribute},
            {"label", s.label},
            {"provenance", to_string(s.provenance)},
            {"customized", s.customized}};
}

Json to_json(const CorollaryUpdate& u) {
    if (u.target == CorollaryUpdate::Target::filter_widget) {
        return {{"target", "filter_widget"}, {"widget", to_json(*u.widget)}};
    }
    return {{"target", "encoding_shelf"}, {"shelf", to_json(*u.shelf)}};
}

Json to_json(const CommitResult& r) {
    Json dropped = Json::array();
    for (const auto& b : r.dropped) {
        dropped.push_back({{"channel", to_string(b.channel)}, {"attribute", b.attribute}});
    }
    Json corollary = Json::array();
    for (const auto& u : r.corollary) corollary.push_back(to_json(u));
    Json j{{"revision", r.spec.revision},
           {"spec", to_json(r.spec)},
           {"view", r.view ? to_json(*r.view) : Json(nullptr)},
           {"dropped", dropped},
           {"corollary", corollary},
           {"committed", r.committed}};
    if (r.widget) j["widget"] = to_json(*r.widget);
    return j;
}

Json to_json(const LogEntry& e) {
    return {{"revision", e.revision},
            {"change", to_json(e.change)},
            {"paradigm", to_string(e.paradigm)},
            {"inverse", to_json(e.inverse)}};
}

Json to_json(const PaletteMemory& m) {
    Json j = Json::object();
    for (const auto& [attr, p] : m.entries()) j[attr] = to_json(p);
    return j;
}

Json to_json(const SessionSnapshot& s) {
    Json entries = Json::array();
    for (const auto& e : s.entries) entries.push_back(to_json(e));
    Json dataset{{"id", s.dataset_id}};
    if (s.dataset_path) dataset["path"] = *s.dataset_path;
    return {{"session_id", s.session_id},
            {"dataset", dataset},
            {"initial_spec", to_json(s.initial)},
            {"log", entries},
            {"cursor", s.cursor},
            {"revision", s.revision},
            {"palette_memory", to_json(s.palettes)}};
}

Json to_json(const Event& e) {
    return {{"type", to_string(e.type)}, {"revision", e.revision}};
}

Json error_json(const std::string& code, const std::string& message) {
    return {{"error", {{"code", code}, {"message", message}}}};
}

ColorPalette palette_from_json(const Json& j) {
    return guarded("palette", [&] {
        ColorPalette p;
        for (const auto& v : j.value("values", Json::array())) {
            p.values.push_back({str(v, "value"), str(v, "color")});
        }
        for (const auto& i : j.value("intervals", Json::array())) {
            p.intervals.push_back({i.at("lo").get<double>(), i.at("hi").get<double>(), str(i, "color")});
        }
        p.default_color = j.value("default_color", std::string(kDefaultMarkColor));
        p.customized = j.value("customized", false);
        return p;
    });
}

ChannelBinding binding_from_json(const Json& j, Channel channel) {
    return guarded("binding", [&] {
        ChannelBinding b;
        b.channel = channel;
        b.attribute = j.is_string() ? j.get<std::string>() : str(j, "attribute");
        if (j.is_object()) {
            if (j.contains("palette")) b.palette = palette_from_json(j.at("palette"));
            b.provenance = parse_provenance(j.value("provenance", std::string("mvs")));
        }
        return b;
    });
}

FilterRule filter_from_json(const Json& j) {
    return guarded("filter rule", [&] {
        FilterRule r;
        r.id = j.value("id", std::string());
        r.provenance = parse_provenance(j.value("provenance", std::string("mvs")));
        const std::string form = str(j, "form");
        if (form == "Range") {
            r.form = RangeFilter{str(j, "attribute"), j.at("lo").get<double>(),
                                 j.at("hi").get<double>(), j.value("exclude", false)};
        } else if (form == "ValueSet") {
            r.form = ValueSetFilter{str(j, "attribute"),
                                    j.at("included").get<std::vector<std::string>>()};
        } else if (form == "PointSet") {
            r.form = PointSetFilter{j.at("excluded").get<std::vector<RowId>>()};
        } else {
            throw Error(ErrorCode::invalid_request, "unknown filter form '" + form + "'");
        }
        return r;
    });
}

SortState sort_from_json(const Json& j) {
    return guarded("sort", [&] {
        return SortState{j.value("by_attribute", std::string()),
                         parse_sort_direction(j.value("direction", std::string("none")))};
    });
}

namespace {

std::vector<ChannelBinding> bindings_from_json(const Json& j) {
    std::vector<ChannelBinding> out;
    for (const auto& [name, value] : j.items()) {
        out.push_back(binding_from_json(value, parse_channel(name)));
    }
    return out;
}

}  // namespace

VisSpec spec_from_json(const Json& j) {
    return guarded("spec", [&] {
        VisSpec s;
        s.vis_type = parse_vis_type(j.value("vis_type", std::string("Scatterplot")));
        for (auto& b : bindings_from_json(j.value("bindings", Json::object()))) {
            s.bindings[static_cast<std::size_t>(b.channel)] = std::move(b);
        }
        for (const auto& f : j.value("filters", Json::array())) s.filters.push_back(filter_from_json(f));
        if (j.contains("sort")) s.sort = sort_from_json(j.at("sort"));
        s.revision = j.value("revision", std::int64_t{0});
        return s;
    });
}

SpecChange change_from_json(const Json& j) {
    return guarded("change", [&] {
        SpecChange c;
        c.base_revision = j.value("base_revision", std::int64_t{0});
        const std::string op = str(j, "op");
        if (op == "SetBinding") {
            c.action = change::SetBinding{binding_from_json(j.at("binding"), parse_channel(str(j, "channel")))};
        } else if (op == "RemoveBinding") {
            c.action = change::RemoveBinding{parse_channel(str(j, "channel"))};
        } else if (op == "SetVisType") {
            change::SetVisType a{parse_vis_type(str(j, "vis_type")), std::nullopt};
            if (j.contains("exact_bindings")) a.exact_bindings = bindings_from_json(j.at("exact_bindings"));
            c.action = std::move(a);
        } else if (op == "AddFilter") {
            change::AddFilter a{filter_from_json(j.at("rule")), std::nullopt};
            if (j.contains("position")) a.position = j.at("position").get<std::size_t>();
            c.action = std::move(a);
        } else if (op == "ReplaceFilter") {
            c.action = change::ReplaceFilter{filter_from_json(j.at("rule"))};
        } else if (op == "RemoveFilter") {
            c.action = change::RemoveFilter{str(j, "rule_id")};
        } else if (op == "SetSort") {
            c.action = change::SetSort{sort_from_json(j.at("sort"))};
        } else {
            throw Error(ErrorCode::invalid_request, "unknown change op '" + op + "'");
        }
        return c;
    });
}

Selection selection_from_json(const Json& j) {
    return guarded("selection", [&] {
        Selection s;
        if (j.is_array()) {
            s.row_ids = j.get<std::vector<RowId>>();
            return s;
        }
        s.row_ids = j.at("row_ids").get<std::vector<RowId>>();
        s.origin = parse_selection_origin(j.value("origin", std::string("lasso")));
        return s;
    });
}

Demonstration demonstration_from_json(const Json& j) {
    return guarded("demonstration", [&]() -> Demonstration {
        const std::string type = str(j, "type");
        if (type == "Recolor") {
            RecolorDemo d;
            const Json& groups = j.at("groups");
            if (groups.is_object()) {
                // {"#ff0000": selection, ...}
                for (const auto& [color, sel] : groups.items()) {
                    d.groups.push_back({color, selection_from_json(sel)});
                }
            } else {
                for (const auto& g : groups) {
                    d.groups.push_back({str(g, "color"), selection_from_json(g.at("selection"))});
                }
            }
            return d;
        }
        if (type == "Resize") {
            ResizeDemo d;
            if (j.contains("sized")) {
                // {"5": 0.9, ...}
                for (const auto& [row, size] : j.at("sized").items()) {
                    d.points.push_back({static_cast<RowId>(std::stoul(row)), size.get<double>()});
                }
            } else {
                for (const auto& p : j.at("points")) {
                    d.points.push_back({p.at("row").get<RowId>(), p.at("size").get<double>()});
                }
            }
            return d;
        }
        if (type == "DragOutToFilter") return DragOutDemo{selection_from_json(j.at("selection"))};
        if (type == "DragBar") {
            const Json& cat = j.at("category");
            return DragBarDemo{cat.is_string() ? cat.get<std::string>() : format_number(cat.get<double>()),
                               parse_bar_extreme(str(j, "target"))};
        }
        throw Error(ErrorCode::invalid_request, "unknown demonstration type '" + type + "'");
    });
}

WidgetSelection widget_selection_from_json(const Json& j) {
    return guarded("widget selection", [&]() -> WidgetSelection {
        if (j.contains("checked")) {
            CheckboxSelection c;
            for (const auto& v : j.at("checked")) {
                c.checked.push_back(v.is_string() ? v.get<std::string>() : format_number(v.get<double>()));
            }
            return c;
        }
        RangeSelection r{j.at("lo").get<double>(), j.at("hi").get<double>(), std::nullopt};
        if (j.contains("exclude")) r.exclude = j.at("exclude").get<bool>();
        return r;
    });
}

LogEntry log_entry_from_json(const Json& j) {
    return guarded("log entry", [&] {
        return LogEntry{j.at("revision").get<std::int64_t>(), change_from_json(j.at("change")),
                        parse_provenance(str(j, "paradigm")), change_from_json(j.at("inverse"))};
    });
}

PaletteMemory palette_memory_from_json(const Json& j) {
    return guarded("palette memory", [&] {
        PaletteMemory m;
        for (const auto& [attr, p] : j.items()) m.remember(attr, palette_from_json(p));
        return m;
    });
}

SessionSnapshot snapshot_from_json(const Json& j) {
    return guarded("snapshot", [&] {
        SessionSnapshot s;
        s.session_id = str(j, "session_id");
        const Json& dataset = j.at("dataset");
        s.dataset_id = str(dataset, "id");
        if (dataset.contains("path")) s.dataset_path = str(dataset, "path");
        s.initial = spec_from_json(j.at("initial_spec"));
        for (const auto& e : j.at("log")) s.entries.push_back(log_entry_from_json(e));
        s.cursor = j.at("cursor").get<std::size_t>();
        s.revision = j.at("revision").get<std::int64_t>();
        s.palettes = palette_memory_from_json(j.value("palette_memory", Json::object()));
        return s;
    });
}

Json parse_json(std::string_view text) {
    return guarded("JSON", [&] { return Json::parse(text); });
}

std::string canonical_spec(const VisSpec& spec, const SpecJsonOptions& opt) {
    return to_json(spec, opt).dump();
}

std::string canonical_view(const ViewModel& view) { return to_json(view).dump(); }

}  // namespace vizblend
