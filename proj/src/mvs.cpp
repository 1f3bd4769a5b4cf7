#include "vizblend/mvs.hpp"

#include "vizblend/error.hpp"
#include "vizblend/history.hpp"

#include <algorithm>

namespace vizblend {

namespace {

[[noreturn]] void illegal(const std::string& msg) { throw Error(ErrorCode::illegal_change, msg); }

void require_legal(const VisSpec& spec, const Dataset& dataset, Channel channel,
                   std::string_view attribute) {
    const Attribute& a = dataset.attribute(attribute);
    if (auto why = binding_violation(spec.vis_type, channel, a)) illegal(*why);
}

}  // namespace

std::string_view widget_kind(const FilterWidget& w) {
    switch (w.index()) {
        case 0: return "RangeSlider";
        case 1: return "CheckboxSet";
        default: return "PointChip";
    }
}

FilterWidgetModel widget_for(const FilterRule& rule, const Dataset& dataset) {
    FilterWidgetModel m;
    m.rule_id = rule.id;
    m.attribute = rule.attribute();
    m.provenance = rule.provenance;
    if (const auto* r = std::get_if<RangeFilter>(&rule.form)) {
        const Attribute& a = dataset.attribute(r->attribute);
        m.widget = RangeSliderWidget{a.extent.value_or(Extent{}), r->lo, r->hi, r->exclude};
    } else if (const auto* v = std::get_if<ValueSetFilter>(&rule.form)) {
        const Attribute& a = dataset.attribute(v->attribute);
        CheckboxSetWidget w;
        w.values = a.categories;
        for (const auto& c : a.categories) {
            w.checked.push_back(std::find(v->included.begin(), v->included.end(), c) !=
                                v->included.end());
        }
        m.widget = std::move(w);
    } else {
        m.widget = PointChipWidget{std::get<PointSetFilter>(rule.form).excluded.size()};
        m.editable = false;
    }
    VisSpec alone;
    alone.filters.push_back(rule);
    const auto keep = visible_mask(alone, dataset);
    m.visible_count = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
    m.excluded_count = dataset.row_count() - m.visible_count;
    return m;
}

std::vector<FilterWidgetModel> filter_widgets(const VisSpec& spec, const Dataset& dataset) {
    std::vector<FilterWidgetModel> out;
    out.reserve(spec.filters.size());
    for (const auto& rule : spec.filters) out.push_back(widget_for(rule, dataset));
    return out;
}

ShelfState shelf_for(const ChannelBinding& binding) {
    ShelfState s;
    s.channel = binding.channel;
    s.attribute = binding.attribute;
    s.provenance = binding.provenance;
    s.customized = binding.palette && binding.palette->customized;
    s.label = s.customized ? binding.attribute + " (customized)" : binding.attribute;
    return s;
}

std::vector<ShelfState> encoding_shelves(const VisSpec& spec) {
    std::vector<ShelfState> out;
    for (Channel c : kAllChannels) {
        if (const ChannelBinding* b = spec.binding(c)) out.push_back(shelf_for(*b));
    }
    return out;
}

namespace mvs {

SpecChange set_axis(const VisSpec& spec, const Dataset& dataset, Channel channel,
                    std::string_view attribute) {
    if (channel != Channel::x && channel != Channel::y) illegal("axes are X and Y");
    require_legal(spec, dataset, channel, attribute);
    return {change::SetBinding{{channel, std::string(attribute), std::nullopt, Provenance::mvs}},
            spec.revision};
}

SpecChange set_mark_encoding(const VisSpec& spec, const Dataset& dataset, Channel channel,
                             std::string_view attribute, const PaletteMemory& memory) {
    if (channel != Channel::color && channel != Channel::size) illegal("marks take Color or Size");
    require_legal(spec, dataset, channel, attribute);
    ChannelBinding b{channel, std::string(attribute), std::nullopt, Provenance::mvs};
    if (channel == Channel::color) {
        b.palette = memory.recall(attribute);
        if (!b.palette) b.palette = default_palette(dataset.attribute(attribute));
    }
    return {change::SetBinding{std::move(b)}, spec.revision};
}

SwitchPlan switch_vis_type(const VisSpec& spec, const Dataset& dataset, VisType target) {
    SwitchPlan plan;
    plan.dropped = bindings_dropped_by(spec, target, dataset);
    plan.change = {change::SetVisType{target, std::nullopt}, spec.revision};
    return plan;
}

FilterRule initial_attribute_rule(const Dataset& dataset, std::string_view attribute,
                                  std::string rule_id) {
    const Attribute& a = dataset.attribute(attribute);
    FilterRule rule;
    rule.id = std::move(rule_id);
    rule.provenance = Provenance::mvs;
    if (a.is_categorical_like()) {
        rule.form = ValueSetFilter{a.name, a.categories};
    } else {
        const Extent e = a.extent.value_or(Extent{});
        rule.form = RangeFilter{a.name, e.min, e.max, false};
    }
    return rule;
}

const FilterRule* attribute_rule(const VisSpec& spec, std::string_view attribute) {
    for (const auto& f : spec.filters) {
        if (!std::holds_alternative<PointSetFilter>(f.form) && f.attribute() == attribute) return &f;
    }
    return nullptr;
}

SpecChange add_attribute_filter(const VisSpec& spec, const Dataset& dataset,
                                std::string_view attribute) {
    return {change::AddFilter{initial_attribute_rule(dataset, attribute, next_filter_id(spec)),
                              std::nullopt},
            spec.revision};
}

SpecChange update_filter_widget(const VisSpec& spec, const Dataset& dataset,
                                std::string_view rule_id, const WidgetSelection& selection) {
    const FilterRule* rule = spec.find_filter(rule_id);
    if (!rule) throw Error(ErrorCode::unknown_rule, "unknown filter " + std::string(rule_id));
    FilterRule next = *rule;
    if (const auto* range = std::get_if<RangeFilter>(&rule->form)) {
        const auto* sel = std::get_if<RangeSelection>(&selection);
        if (!sel) throw Error(ErrorCode::out_of_domain, "range filters take a lo/hi selection");
        const Extent domain = dataset.attribute(range->attribute).extent.value_or(Extent{});
        if (!(sel->lo <= sel->hi) || sel->lo < domain.min || sel->hi > domain.max) {
            throw Error(ErrorCode::out_of_domain,
                        "selection [" + format_number(sel->lo) + ", " + format_number(sel->hi) +
                            "] outside [" + format_number(domain.min) + ", " +
                            format_number(domain.max) + "]");
        }
        next.form = RangeFilter{range->attribute, sel->lo, sel->hi,
                                sel->exclude.value_or(range->exclude)};
    } else if (const auto* values = std::get_if<ValueSetFilter>(&rule->form)) {
        const auto* sel = std::get_if<CheckboxSelection>(&selection);
        if (!sel) throw Error(ErrorCode::out_of_domain, "value filters take a checked list");
        const Attribute& a = dataset.attribute(values->attribute);
        for (const auto& v : sel->checked) {
            if (!a.category_index(v)) {
                throw Error(ErrorCode::out_of_domain,
                            "'" + v + "' is not a value of " + values->attribute);
            }
        }
        std::vector<std::string> checked = sel->checked;
        std::sort(checked.begin(), checked.end());
        checked.erase(std::unique(checked.begin(), checked.end()), checked.end());
        next.form = ValueSetFilter{values->attribute, std::move(checked)};
    } else {
        illegal("point-set filters are not editable");
    }
    return {change::ReplaceFilter{std::move(next)}, spec.revision};
}

SpecChange sort_bars(const VisSpec& spec, SortDirection direction) {
    if (!is_bar_type(spec.vis_type)) {
        throw Error(ErrorCode::wrong_vis_type, "sort buttons exist only on bar charts");
    }
    const ChannelBinding* y = spec.binding(Channel::y);
    if (!y) throw Error(ErrorCode::missing_axes, "sorting needs Y bound");
    return {change::SetSort{{y->attribute, direction}}, spec.revision};
}

SpecChange remove_encoding(const VisSpec& spec, Channel channel) {
    if (!spec.binding(channel)) {
        throw Error(ErrorCode::channel_unbound, std::string(to_string(channel)) + " is not bound");
    }
    if (channel == Channel::x || channel == Channel::y ||
        (channel == Channel::color && spec.vis_type == VisType::stacked_bar_chart)) {
        throw Error(ErrorCode::required_channel,
                    std::string(to_string(channel)) + " is required by " +
                        std::string(to_string(spec.vis_type)) + "; replace it instead");
    }
    return {change::RemoveBinding{channel}, spec.revision};
}

SpecChange remove_filter(const VisSpec& spec, std::string_view rule_id) {
    if (!spec.find_filter(rule_id)) {
        throw Error(ErrorCode::unknown_rule, "unknown filter " + std::string(rule_id));
    }
    return {change::RemoveFilter{std::string(rule_id)}, spec.revision};
}

}  // namespace mvs

}  // namespace vizblend
