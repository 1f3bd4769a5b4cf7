#include "vizblend/intent.hpp"

#include "vizblend/error.hpp"
#include "vizblend/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

namespace vizblend {

namespace {

[[noreturn]] void bad_demo(const std::string& msg) {
    throw Error(ErrorCode::invalid_demonstration, msg);
}

struct Axes {
    std::size_t x;
    std::size_t y;
};

Axes require_axes(const VisSpec& spec, const Dataset& dataset) {
    if (!spec.binding(Channel::x) || !spec.binding(Channel::y)) {
        throw Error(ErrorCode::missing_axes, "demonstrations need a rendered view with X and Y bound");
    }
    return {dataset.attribute_index(spec.binding(Channel::x)->attribute),
            dataset.attribute_index(spec.binding(Channel::y)->attribute)};
}

// Rows that currently have a mark (or contribute to a bar).
std::vector<bool> mark_mask(const VisSpec& spec, const Dataset& dataset) {
    auto mask = visible_mask(spec, dataset);
    std::vector<std::size_t> required;
    for (Channel c : kAllChannels) {
        if (is_bar_type(spec.vis_type) && c != Channel::x && c != Channel::y) continue;
        if (const ChannelBinding* b = spec.binding(c)) {
            required.push_back(dataset.attribute_index(b->attribute));
        }
    }
    for (RowId r = 0; r < dataset.row_count(); ++r) {
        if (!mask[r]) continue;
        for (std::size_t a : required) {
            if (dataset.is_missing(a, r)) {
                mask[r] = false;
                break;
            }
        }
    }
    return mask;
}

void check_rows(const std::vector<RowId>& rows, const std::vector<bool>& marks,
                const Dataset& dataset) {
    for (RowId r : rows) {
        if (r >= dataset.row_count()) bad_demo("row " + std::to_string(r) + " does not exist");
        if (!marks[r]) bad_demo("row " + std::to_string(r) + " is not a visible mark");
    }
}

double score_of(const Evidence& e, const RankingWeights& w) {
    return w.type_affinity * e.type_affinity + w.separation * e.separation +
           w.parsimony * e.parsimony;
}

void rank(std::vector<Candidate>& out) {
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.evidence.attribute != b.evidence.attribute) {
            return a.evidence.attribute < b.evidence.attribute;
        }
        return a.template_order < b.template_order;
    });
}

bool applies(const SpecChange& change, const VisSpec& spec, const Dataset& dataset) {
    try {
        apply_change(spec, change, dataset);
        return true;
    } catch (const Error&) {
        return false;
    }
}

double parsimony_of(const Attribute& a) {
    return 1.0 / static_cast<double>(std::max<std::size_t>(1, a.distinct_count));
}

// Smallest gap between consecutive sorted intervals relative to the extent.
double interval_separation(std::vector<std::pair<double, double>> intervals, const Attribute& a) {
    if (intervals.size() < 2) return 1.0;
    std::sort(intervals.begin(), intervals.end());
    const double span = a.extent ? a.extent->span() : 0.0;
    if (span <= 0.0) return 1.0;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        gap = std::min(gap, intervals[i].first - intervals[i - 1].second);
    }
    return std::clamp(gap / span, 0.0, 1.0);
}

double category_number(const std::string& label) {
    return std::strtod(label.c_str(), nullptr);
}

// A unit is what the user recolors: a row, or a whole bar on bar charts.
struct RecolorUnits {
    bool bars = false;
    std::vector<std::vector<RowId>> group_rows;       // rows per group (row units)
    std::vector<std::vector<std::size_t>> group_bars;  // bar indices per group
    std::vector<BarGroup> bar_list;
};

RecolorUnits recolor_units(const Dataset& dataset, const VisSpec& spec, const RecolorDemo& demo,
                           const std::vector<bool>& marks) {
    RecolorUnits units;
    units.bars = spec.vis_type == VisType::bar_chart;
    std::set<RowId> seen_rows;
    for (const auto& g : demo.groups) {
        check_rows(g.selection.row_ids, marks, dataset);
        std::vector<RowId> rows;
        for (RowId r : g.selection.row_ids) {
            if (!seen_rows.insert(r).second) bad_demo("color groups must be disjoint");
            rows.push_back(r);
        }
        units.group_rows.push_back(std::move(rows));
    }
    if (!units.bars) return units;

    units.bar_list = bar_groups(spec, dataset, visible_mask(spec, dataset));
    const std::size_t xa = dataset.attribute_index(spec.binding(Channel::x)->attribute);
    std::map<std::int32_t, std::size_t> bar_of_code;
    for (std::size_t i = 0; i < units.bar_list.size(); ++i) {
        bar_of_code[static_cast<std::int32_t>(units.bar_list[i].category_index)] = i;
    }
    std::set<std::size_t> seen_bars;
    for (const auto& rows : units.group_rows) {
        std::set<std::size_t> bars;
        for (RowId r : rows) bars.insert(bar_of_code.at(dataset.category_code(xa, r)));
        for (std::size_t b : bars) {
            if (!seen_bars.insert(b).second) bad_demo("color groups must cover disjoint bars");
        }
        units.group_bars.emplace_back(bars.begin(), bars.end());
    }
    return units;
}

}  // namespace

std::string_view to_string(SelectionOrigin o) {
    switch (o) {
        case SelectionOrigin::lasso: return "lasso";
        case SelectionOrigin::click: return "click";
        case SelectionOrigin::rubber_band: return "rubber-band";
    }
    return "";
}

std::string_view to_string(BarExtreme e) {
    return e == BarExtreme::extreme_left ? "extreme_left" : "extreme_right";
}

SelectionOrigin parse_selection_origin(std::string_view s) {
    for (auto o : {SelectionOrigin::lasso, SelectionOrigin::click, SelectionOrigin::rubber_band}) {
        if (to_string(o) == s) return o;
    }
    throw Error(ErrorCode::invalid_request, "unknown selection origin '" + std::string(s) + "'");
}

BarExtreme parse_bar_extreme(std::string_view s) {
    if (s == "extreme_left") return BarExtreme::extreme_left;
    if (s == "extreme_right") return BarExtreme::extreme_right;
    throw Error(ErrorCode::invalid_request, "unknown bar target '" + std::string(s) + "'");
}

std::vector<RowId> rule_extension(const FilterRule& rule, const Dataset& dataset,
                                  const std::vector<bool>& visible) {
    VisSpec probe;
    probe.filters.push_back(rule);
    const auto keep = visible_mask(probe, dataset);
    std::vector<RowId> out;
    for (RowId r = 0; r < dataset.row_count(); ++r) {
        if (visible[r] && !keep[r]) out.push_back(r);
    }
    return out;
}

std::vector<Candidate> infer_color_candidates(const Dataset& dataset, const VisSpec& spec,
                                              const RecolorDemo& demo,
                                              const RankingWeights& weights) {
    require_axes(spec, dataset);
    if (demo.groups.empty()) bad_demo("recolor needs at least one color group");
    std::vector<std::string> colors;
    for (const auto& g : demo.groups) {
        if (g.selection.row_ids.empty()) throw Error(ErrorCode::empty_selection, "empty color group");
        auto hex = normalize_hex(g.color);
        if (!hex) bad_demo("'" + g.color + "' is not a #rrggbb color");
        if (std::find(colors.begin(), colors.end(), *hex) != colors.end()) {
            bad_demo("color " + *hex + " used by two groups");
        }
        colors.push_back(*hex);
    }
    const auto marks = mark_mask(spec, dataset);
    const RecolorUnits units = recolor_units(dataset, spec, demo, marks);

    std::vector<Candidate> out;
    for (std::size_t ai = 0; ai < dataset.attribute_count(); ++ai) {
        const Attribute& a = dataset.attribute(ai);
        if (binding_violation(spec.vis_type, Channel::color, a)) continue;
        const bool categorical = a.is_categorical_like();

        // Per group: the labels (categorical) or numbers (continuous) of its units.
        std::vector<std::set<std::string>> labels(demo.groups.size());
        std::vector<std::vector<double>> numbers(demo.groups.size());
        for (std::size_t g = 0; g < demo.groups.size(); ++g) {
            if (units.bars) {
                for (std::size_t b : units.group_bars[g]) {
                    const auto& rows = units.bar_list[b].rows;
                    if (categorical) {
                        auto m = mode_of(dataset, ai, rows);
                        if (!m.empty()) labels[g].insert(std::move(m));
                    } else {
                        const double v = mean_of(dataset, ai, rows);
                        if (!std::isnan(v)) numbers[g].push_back(v);
                    }
                }
            } else {
                for (RowId r : units.group_rows[g]) {
                    if (dataset.is_missing(ai, r)) continue;
                    if (categorical) {
                        labels[g].insert(dataset.label(ai, r));
                    } else {
                        numbers[g].push_back(dataset.number(ai, r));
                    }
                }
            }
        }

        ColorPalette palette;
        palette.customized = true;
        std::vector<std::pair<double, double>> intervals;
        bool consistent = true;
        if (categorical) {
            std::map<std::string, std::string> assigned;
            for (std::size_t g = 0; g < labels.size() && consistent; ++g) {
                if (labels[g].size() != 1) {
                    consistent = false;
                    break;
                }
                const std::string& v = *labels[g].begin();
                if (!assigned.emplace(v, colors[g]).second) consistent = false;
            }
            if (!consistent) continue;
            std::size_t next = 0;
            for (const auto& cat : a.categories) {
                if (auto it = assigned.find(cat); it != assigned.end()) {
                    palette.values.push_back({cat, it->second});
                    continue;
                }
                std::string fill;
                for (std::size_t tries = 0; tries < kCategoricalScheme.size(); ++tries) {
                    fill = std::string(kCategoricalScheme[next++ % kCategoricalScheme.size()]);
                    if (std::find(colors.begin(), colors.end(), fill) == colors.end()) break;
                }
                palette.values.push_back({cat, fill});
            }
            if (a.discrete) {
                for (const auto& l : labels) {
                    const double v = category_number(*l.begin());
                    intervals.emplace_back(v, v);
                }
            }
        } else {
            for (std::size_t g = 0; g < numbers.size(); ++g) {
                if (numbers[g].empty()) {
                    consistent = false;
                    break;
                }
                const auto [lo, hi] = std::minmax_element(numbers[g].begin(), numbers[g].end());
                intervals.emplace_back(*lo, *hi);
            }
            if (!consistent) continue;
            std::vector<std::size_t> order(intervals.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t l, std::size_t r) { return intervals[l] < intervals[r]; });
            for (std::size_t k = 1; k < order.size(); ++k) {
                if (!(intervals[order[k - 1]].second < intervals[order[k]].first)) consistent = false;
            }
            if (!consistent) continue;
            for (std::size_t g : order) {
                palette.intervals.push_back({intervals[g].first, intervals[g].second, colors[g]});
            }
        }

        Candidate c;
        c.kind = CandidateKind::encoding;
        c.change.base_revision = spec.revision;
        c.change.action = change::SetBinding{{Channel::color, a.name, palette, Provenance::vbd}};
        c.evidence.template_name = "color";
        c.evidence.attribute = a.name;
        c.evidence.type_affinity = categorical ? 1.0 : 0.5;
        c.evidence.separation =
            a.kind == AttributeKind::categorical ? 1.0 : interval_separation(intervals, a);
        c.evidence.parsimony = parsimony_of(a);
        std::size_t demonstrated = 0;
        for (const auto& g : demo.groups) demonstrated += g.selection.row_ids.size();
        c.evidence.selection_size = demonstrated;
        c.score = score_of(c.evidence, weights);
        if (applies(c.change, spec, dataset)) out.push_back(std::move(c));
    }
    rank(out);
    return out;
}

std::vector<Candidate> infer_size_candidates(const Dataset& dataset, const VisSpec& spec,
                                             const ResizeDemo& demo,
                                             const RankingWeights& weights) {
    if (spec.vis_type != VisType::scatterplot) {
        throw Error(ErrorCode::wrong_vis_type, "size demonstrations need a scatterplot");
    }
    require_axes(spec, dataset);
    if (demo.points.size() < 2) bad_demo("resize needs at least two points");
    std::set<RowId> rows;
    std::set<double> sizes;
    for (const auto& p : demo.points) {
        if (!(p.size > 0.0 && p.size <= 1.0)) bad_demo("demonstrated sizes must lie in (0, 1]");
        if (!rows.insert(p.row).second) bad_demo("row resized twice");
        sizes.insert(p.size);
    }
    if (sizes.size() < 2) bad_demo("resize needs at least two distinct sizes");
    const auto marks = mark_mask(spec, dataset);
    check_rows({rows.begin(), rows.end()}, marks, dataset);

    std::vector<Candidate> out;
    for (std::size_t ai = 0; ai < dataset.attribute_count(); ++ai) {
        const Attribute& a = dataset.attribute(ai);
        if (binding_violation(spec.vis_type, Channel::size, a)) continue;
        std::vector<std::pair<double, double>> pts;  // (size, value)
        for (const auto& p : demo.points) {
            if (!dataset.is_missing(ai, p.row)) pts.emplace_back(p.size, dataset.number(ai, p.row));
        }
        std::set<double> levels;
        for (const auto& p : pts) levels.insert(p.first);
        if (levels.size() < 2) continue;
        bool monotone = true;
        for (std::size_t i = 0; i < pts.size() && monotone; ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (pts[i].first < pts[j].first && !(pts[i].second < pts[j].second)) {
                    monotone = false;
                    break;
                }
            }
        }
        if (!monotone) continue;
        std::map<double, std::pair<double, double>> by_level;
        for (const auto& [s, v] : pts) {
            auto [it, fresh] = by_level.emplace(s, std::make_pair(v, v));
            if (!fresh) {
                it->second.first = std::min(it->second.first, v);
                it->second.second = std::max(it->second.second, v);
            }
        }
        std::vector<std::pair<double, double>> intervals;
        for (const auto& [s, iv] : by_level) intervals.push_back(iv);

        Candidate c;
        c.kind = CandidateKind::encoding;
        c.change.base_revision = spec.revision;
        c.change.action = change::SetBinding{{Channel::size, a.name, std::nullopt, Provenance::vbd}};
        c.evidence.template_name = "size";
        c.evidence.attribute = a.name;
        c.evidence.type_affinity = 0.5;
        c.evidence.separation = interval_separation(intervals, a);
        c.evidence.parsimony = parsimony_of(a);
        c.evidence.selection_size = demo.points.size();
        c.score = score_of(c.evidence, weights);
        if (applies(c.change, spec, dataset)) out.push_back(std::move(c));
    }
    rank(out);
    return out;
}

std::vector<Candidate> infer_filter_candidates(const Dataset& dataset, const VisSpec& spec,
                                               const DragOutDemo& demo,
                                               const RankingWeights& weights) {
    if (demo.selection.row_ids.empty()) {
        throw Error(ErrorCode::empty_selection, "drag-out needs a non-empty selection");
    }
    const Axes axes = require_axes(spec, dataset);
    const auto marks = mark_mask(spec, dataset);
    check_rows(demo.selection.row_ids, marks, dataset);
    std::vector<RowId> selection = demo.selection.row_ids;
    std::sort(selection.begin(), selection.end());
    selection.erase(std::unique(selection.begin(), selection.end()), selection.end());

    const auto visible = visible_mask(spec, dataset);
    const std::string id = next_filter_id(spec);
    std::vector<Candidate> out;
    std::vector<FilterForm> emitted;

    auto add = [&](FilterForm form, FilterTemplate tmpl, std::string attribute, double terms,
                   std::vector<std::string> excluded_values) {
        for (const auto& f : emitted) {
            if (f == form) return;
        }
        FilterRule rule{id, form, Provenance::vbd};
        const auto ext = rule_extension(rule, dataset, visible);
        const bool exact = ext == selection;
        Candidate c;
        c.kind = CandidateKind::filter;
        c.change.base_revision = spec.revision;
        c.change.action = change::AddFilter{rule, std::nullopt};
        c.template_order = static_cast<int>(tmpl);
        static constexpr const char* names[] = {"point_set", "x_range", "y_range", "value_set"};
        c.evidence.template_name = names[static_cast<int>(tmpl)];
        c.evidence.attribute = std::move(attribute);
        c.evidence.type_affinity = exact ? 1.0 : 0.5;
        // Selection is always inside the extension, so Jaccard = |sel| / |ext|.
        c.evidence.separation =
            ext.empty() ? 0.0 : static_cast<double>(selection.size()) / static_cast<double>(ext.size());
        c.evidence.parsimony = 1.0 / terms;
        c.evidence.selection_size = selection.size();
        c.evidence.extension_size = ext.size();
        c.evidence.excluded_values = std::move(excluded_values);
        c.score = score_of(c.evidence, weights);
        if (!applies(c.change, spec, dataset)) return;
        emitted.push_back(std::move(form));
        out.push_back(std::move(c));
    };

    add(PointSetFilter{selection}, FilterTemplate::point_set, {},
        static_cast<double>(selection.size()), {});

    auto axis_range = [&](std::size_t attr, FilterTemplate tmpl) {
        const Attribute& a = dataset.attribute(attr);
        if (!a.is_quantitative()) return;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (RowId r : selection) {
            lo = std::min(lo, dataset.number(attr, r));
            hi = std::max(hi, dataset.number(attr, r));
        }
        add(RangeFilter{a.name, lo, hi, true}, tmpl, a.name, 1.0, {});
    };
    axis_range(axes.x, FilterTemplate::x_range);
    axis_range(axes.y, FilterTemplate::y_range);

    for (std::size_t ai = 0; ai < dataset.attribute_count(); ++ai) {
        const Attribute& a = dataset.attribute(ai);
        if (!a.is_categorical_like()) continue;
        std::vector<bool> hit(a.categories.size(), false);
        bool complete = true;
        for (RowId r : selection) {
            const auto code = dataset.category_code(ai, r);
            if (code < 0) {
                complete = false;
                break;
            }
            hit[static_cast<std::size_t>(code)] = true;
        }
        if (!complete) continue;
        ValueSetFilter vs{a.name, {}};
        std::vector<std::string> excluded;
        for (std::size_t c = 0; c < a.categories.size(); ++c) {
            (hit[c] ? excluded : vs.included).push_back(a.categories[c]);
        }
        FilterRule probe{id, vs, Provenance::vbd};
        if (rule_extension(probe, dataset, visible) != selection) continue;
        const auto terms = static_cast<double>(excluded.size());
        add(std::move(vs), FilterTemplate::value_set, a.name, terms, std::move(excluded));
    }
    rank(out);
    return out;
}

std::vector<Candidate> infer_sort_candidates(const Dataset& dataset, const VisSpec& spec,
                                             const DragBarDemo& demo,
                                             const RankingWeights& weights) {
    if (!is_bar_type(spec.vis_type)) {
        throw Error(ErrorCode::wrong_vis_type, "bar drags need a bar chart");
    }
    const Axes axes = require_axes(spec, dataset);
    const auto groups = bar_groups(spec, dataset, visible_mask(spec, dataset));
    std::optional<std::size_t> dragged;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].category == demo.category) dragged = i;
    }
    if (!dragged) {
        throw Error(ErrorCode::unknown_category, "no bar for category '" + demo.category + "'");
    }

    std::vector<Candidate> out;
    for (std::size_t ai = 0; ai < dataset.attribute_count(); ++ai) {
        const Attribute& a = dataset.attribute(ai);
        if (!a.is_quantitative() || ai == axes.x) continue;
        int order_index = 0;
        for (auto dir : {SortDirection::ascending, SortDirection::descending}) {
            const SortState sort{a.name, dir};
            const auto order = order_bars(groups, dataset, sort);
            const std::size_t landing =
                demo.target == BarExtreme::extreme_left ? order.front() : order.back();
            if (landing == *dragged) {
                Candidate c;
                c.kind = CandidateKind::sort;
                c.change.base_revision = spec.revision;
                c.change.action = change::SetSort{sort};
                c.template_order = order_index;
                c.evidence.template_name = "sort";
                c.evidence.attribute = a.name;
                c.evidence.type_affinity = ai == axes.y ? 1.0 : 0.5;
                c.evidence.separation = 1.0;
                c.evidence.parsimony = 1.0;
                c.evidence.selection_size = 1;
                c.score = score_of(c.evidence, weights);
                if (applies(c.change, spec, dataset)) out.push_back(std::move(c));
            }
            ++order_index;
        }
    }
    rank(out);
    return out;
}

std::vector<Candidate> infer_candidates(const Dataset& dataset, const VisSpec& spec,
                                        const Demonstration& demo, const RankingWeights& weights) {
    return std::visit(
        [&](const auto& d) -> std::vector<Candidate> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, RecolorDemo>) {
                return infer_color_candidates(dataset, spec, d, weights);
            } else if constexpr (std::is_same_v<T, ResizeDemo>) {
                return infer_size_candidates(dataset, spec, d, weights);
            } else if constexpr (std::is_same_v<T, DragOutDemo>) {
                return infer_filter_candidates(dataset, spec, d, weights);
            } else {
                return infer_sort_candidates(dataset, spec, d, weights);
            }
        },
        demo);
}

}  // namespace vizblend
