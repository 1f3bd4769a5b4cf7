#include "vizblend/spec.hpp"

#include "vizblend/error.hpp"

#include <algorithm>
#include <cmath>

namespace vizblend {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t channel_index(Channel c) { return static_cast<std::size_t>(c); }

void validate_filter(const FilterRule& rule, const Dataset& dataset, std::vector<Violation>& out) {
    auto illegal = [&](std::string msg) {
        out.push_back({Violation::Kind::illegal, "filter " + rule.id + ": " + std::move(msg)});
    };
    std::visit(
        overloaded{
            [&](const RangeFilter& f) {
                const auto idx = dataset.find_attribute(f.attribute);
                if (!idx) return illegal("unknown attribute '" + f.attribute + "'");
                if (!dataset.attribute(*idx).is_quantitative()) {
                    illegal("range filter on non-quantitative attribute '" + f.attribute + "'");
                }
                if (!std::isfinite(f.lo) || !std::isfinite(f.hi) || f.lo > f.hi) {
                    illegal("range requires lo <= hi");
                }
            },
            [&](const ValueSetFilter& f) {
                const auto idx = dataset.find_attribute(f.attribute);
                if (!idx) return illegal("unknown attribute '" + f.attribute + "'");
                const Attribute& a = dataset.attribute(*idx);
                if (!a.is_categorical_like()) {
                    return illegal("value filter on continuous attribute '" + f.attribute + "'");
                }
                for (std::size_t i = 0; i < f.included.size(); ++i) {
                    if (!a.category_index(f.included[i])) {
                        illegal("value '" + f.included[i] + "' not a category of " + f.attribute);
                    }
                    for (std::size_t j = 0; j < i; ++j) {
                        if (f.included[i] == f.included[j]) illegal("duplicate value");
                    }
                }
            },
            [&](const PointSetFilter& f) {
                for (RowId id : f.excluded) {
                    if (id >= dataset.row_count()) illegal("row " + std::to_string(id) + " out of range");
                }
            },
        },
        rule.form);
}

// Row-level predicate with the attribute resolved once.
struct CompiledRule {
    const FilterRule* rule;
    std::size_t attr = 0;
    std::vector<bool> allowed_codes;
    std::vector<bool> excluded_rows;

    CompiledRule(const FilterRule& r, const Dataset& dataset) : rule(&r) {
        if (const auto* vs = std::get_if<ValueSetFilter>(&r.form)) {
            attr = dataset.attribute_index(vs->attribute);
            const Attribute& a = dataset.attribute(attr);
            allowed_codes.assign(a.categories.size(), false);
            for (const auto& v : vs->included) {
                if (auto i = a.category_index(v)) allowed_codes[*i] = true;
            }
        } else if (const auto* rf = std::get_if<RangeFilter>(&r.form)) {
            attr = dataset.attribute_index(rf->attribute);
        } else {
            excluded_rows.assign(dataset.row_count(), false);
            for (RowId id : std::get<PointSetFilter>(r.form).excluded) {
                if (id < dataset.row_count()) excluded_rows[id] = true;
            }
        }
    }

    // Missing values never fail an attribute rule.
    bool keeps(const Dataset& dataset, RowId row) const {
        if (const auto* rf = std::get_if<RangeFilter>(&rule->form)) {
            const double v = dataset.number(attr, row);
            if (std::isnan(v)) return true;
            const bool inside = v >= rf->lo && v <= rf->hi;
            return rf->exclude ? !inside : inside;
        }
        if (std::holds_alternative<ValueSetFilter>(rule->form)) {
            const auto code = dataset.category_code(attr, row);
            if (code < 0) return true;
            return allowed_codes[static_cast<std::size_t>(code)];
        }
        return !excluded_rows[row];
    }
};

void canonicalize(FilterRule& rule, const Dataset& dataset) {
    if (auto* vs = std::get_if<ValueSetFilter>(&rule.form)) {
        const auto idx = dataset.find_attribute(vs->attribute);
        if (!idx) return;
        const Attribute& a = dataset.attribute(*idx);
        std::stable_sort(vs->included.begin(), vs->included.end(),
                         [&](const std::string& l, const std::string& r) {
                             return a.category_index(l).value_or(SIZE_MAX) <
                                    a.category_index(r).value_or(SIZE_MAX);
                         });
    } else if (auto* ps = std::get_if<PointSetFilter>(&rule.form)) {
        std::sort(ps->excluded.begin(), ps->excluded.end());
        ps->excluded.erase(std::unique(ps->excluded.begin(), ps->excluded.end()),
                           ps->excluded.end());
    }
}

std::vector<FilterRule>::iterator find_rule(std::vector<FilterRule>& rules, std::string_view id) {
    return std::find_if(rules.begin(), rules.end(),
                        [&](const FilterRule& r) { return r.id == id; });
}

[[noreturn]] void illegal(const std::string& msg) { throw Error(ErrorCode::illegal_change, msg); }

}  // namespace

std::string_view to_string(VisType t) {
    switch (t) {
        case VisType::scatterplot: return "Scatterplot";
        case VisType::bar_chart: return "BarChart";
        case VisType::stacked_bar_chart: return "StackedBarChart";
    }
    return "";
}

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::x: return "X";
        case Channel::y: return "Y";
        case Channel::color: return "Color";
        case Channel::size: return "Size";
    }
    return "";
}

std::string_view to_string(Provenance p) { return p == Provenance::mvs ? "mvs" : "vbd"; }

std::string_view to_string(SortDirection d) {
    switch (d) {
        case SortDirection::none: return "none";
        case SortDirection::ascending: return "ascending";
        case SortDirection::descending: return "descending";
    }
    return "";
}

VisType parse_vis_type(std::string_view s) {
    for (VisType t : kAllVisTypes) {
        if (to_string(t) == s) return t;
    }
    throw Error(ErrorCode::invalid_request, "unknown vis type '" + std::string(s) + "'");
}

Channel parse_channel(std::string_view s) {
    for (Channel c : kAllChannels) {
        if (to_string(c) == s) return c;
    }
    throw Error(ErrorCode::invalid_request, "unknown channel '" + std::string(s) + "'");
}

Provenance parse_provenance(std::string_view s) {
    if (s == "mvs") return Provenance::mvs;
    if (s == "vbd") return Provenance::vbd;
    throw Error(ErrorCode::invalid_request, "unknown provenance '" + std::string(s) + "'");
}

SortDirection parse_sort_direction(std::string_view s) {
    for (auto d : {SortDirection::none, SortDirection::ascending, SortDirection::descending}) {
        if (to_string(d) == s) return d;
    }
    throw Error(ErrorCode::invalid_request, "unknown sort direction '" + std::string(s) + "'");
}

bool is_bar_type(VisType t) { return t == VisType::bar_chart || t == VisType::stacked_bar_chart; }

std::string FilterRule::attribute() const {
    return std::visit(overloaded{
                          [](const RangeFilter& f) { return f.attribute; },
                          [](const ValueSetFilter& f) { return f.attribute; },
                          [](const PointSetFilter&) { return std::string(); },
                      },
                      form);
}

const ChannelBinding* VisSpec::binding(Channel c) const {
    const auto& b = bindings[channel_index(c)];
    return b ? &*b : nullptr;
}

const FilterRule* VisSpec::find_filter(std::string_view id) const {
    for (const auto& f : filters) {
        if (f.id == id) return &f;
    }
    return nullptr;
}

std::optional<std::string> binding_violation(VisType type, Channel channel,
                                             const Attribute& attribute) {
    const std::string where = std::string(to_string(channel)) + " on " + std::string(to_string(type));
    if (type == VisType::scatterplot) {
        switch (channel) {
            case Channel::x:
            case Channel::y:
            case Channel::size:
                if (!attribute.is_quantitative()) {
                    return where + " requires a quantitative attribute, got '" + attribute.name + "'";
                }
                return std::nullopt;
            case Channel::color:
                return std::nullopt;
        }
    }
    switch (channel) {
        case Channel::x:
            if (!attribute.is_categorical_like()) {
                return where + " requires a categorical or discrete attribute, got '" +
                       attribute.name + "'";
            }
            return std::nullopt;
        case Channel::y:
            if (!attribute.is_quantitative()) {
                return where + " requires a quantitative attribute, got '" + attribute.name + "'";
            }
            return std::nullopt;
        case Channel::size:
            return "Size invalid for " + std::string(to_string(type));
        case Channel::color:
            if (type == VisType::stacked_bar_chart && !attribute.is_categorical_like()) {
                return where + " requires a categorical or discrete attribute, got '" +
                       attribute.name + "'";
            }
            return std::nullopt;
    }
    return std::nullopt;
}

std::vector<Violation> validate(const VisSpec& spec, const Dataset& dataset) {
    std::vector<Violation> out;
    for (Channel c : kAllChannels) {
        const ChannelBinding* b = spec.binding(c);
        if (!b) continue;
        if (b->channel != c) {
            out.push_back({Violation::Kind::illegal, "binding stored under the wrong channel"});
        }
        const auto idx = dataset.find_attribute(b->attribute);
        if (!idx) {
            out.push_back({Violation::Kind::illegal, "unknown attribute '" + b->attribute + "'"});
            continue;
        }
        if (auto why = binding_violation(spec.vis_type, c, dataset.attribute(*idx))) {
            out.push_back({Violation::Kind::illegal, *why});
        }
        if (b->palette) {
            if (c != Channel::color) {
                out.push_back({Violation::Kind::illegal, "palette attached to non-color channel"});
            } else if (auto why = b->palette->disjointness_error()) {
                out.push_back({Violation::Kind::illegal, "palette: " + *why});
            }
        }
    }
    if (spec.vis_type == VisType::stacked_bar_chart && !spec.binding(Channel::color)) {
        out.push_back({Violation::Kind::incomplete, "StackedBarChart requires Color"});
    }
    for (std::size_t i = 0; i < spec.filters.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.filters[i].id == spec.filters[j].id) {
                out.push_back({Violation::Kind::illegal, "duplicate filter id " + spec.filters[i].id});
            }
        }
        validate_filter(spec.filters[i], dataset, out);
    }
    if (!spec.sort.by_attribute.empty()) {
        const auto idx = dataset.find_attribute(spec.sort.by_attribute);
        if (!idx) {
            out.push_back({Violation::Kind::illegal,
                           "unknown sort attribute '" + spec.sort.by_attribute + "'"});
        } else if (!dataset.attribute(*idx).is_quantitative()) {
            out.push_back({Violation::Kind::illegal, "sort requires a quantitative attribute"});
        }
    }
    return out;
}

VisSpec apply_change(const VisSpec& spec, const SpecChange& change, const Dataset& dataset) {
    if (change.base_revision != spec.revision) {
        throw Error(ErrorCode::stale_revision,
                    "change built against revision " + std::to_string(change.base_revision) +
                        ", spec is at " + std::to_string(spec.revision));
    }
    VisSpec out = spec;
    std::visit(
        overloaded{
            [&](const change::SetBinding& c) {
                dataset.attribute_index(c.binding.attribute);
                out.bindings[channel_index(c.binding.channel)] = c.binding;
            },
            [&](const change::RemoveBinding& c) {
                auto& slot = out.bindings[channel_index(c.channel)];
                if (!slot) illegal(std::string(to_string(c.channel)) + " is not bound");
                slot.reset();
            },
            [&](const change::SetVisType& c) {
                out.vis_type = c.vis_type;
                if (c.exact_bindings) {
                    for (auto& slot : out.bindings) slot.reset();
                    for (const auto& b : *c.exact_bindings) out.bindings[channel_index(b.channel)] = b;
                    return;
                }
                for (const auto& dropped : bindings_dropped_by(spec, c.vis_type, dataset)) {
                    out.bindings[channel_index(dropped.channel)].reset();
                }
            },
            [&](const change::AddFilter& c) {
                if (c.rule.id.empty()) illegal("filter id must not be empty");
                if (out.find_filter(c.rule.id)) illegal("filter id " + c.rule.id + " already in use");
                FilterRule rule = c.rule;
                canonicalize(rule, dataset);
                const std::size_t pos = c.position.value_or(out.filters.size());
                if (pos > out.filters.size()) illegal("filter position out of range");
                out.filters.insert(out.filters.begin() + static_cast<std::ptrdiff_t>(pos),
                                   std::move(rule));
            },
            [&](const change::ReplaceFilter& c) {
                auto it = find_rule(out.filters, c.rule.id);
                if (it == out.filters.end()) {
                    throw Error(ErrorCode::unknown_rule, "unknown filter " + c.rule.id);
                }
                *it = c.rule;
                canonicalize(*it, dataset);
            },
            [&](const change::RemoveFilter& c) {
                auto it = find_rule(out.filters, c.rule_id);
                if (it == out.filters.end()) {
                    throw Error(ErrorCode::unknown_rule, "unknown filter " + c.rule_id);
                }
                out.filters.erase(it);
            },
            [&](const change::SetSort& c) { out.sort = c.sort; },
        },
        change.action);

    std::string problems;
    for (const auto& v : validate(out, dataset)) {
        if (v.kind != Violation::Kind::illegal) continue;
        if (!problems.empty()) problems += "; ";
        problems += v.message;
    }
    if (!problems.empty()) illegal(problems);
    out.revision = spec.revision + 1;
    return out;
}

SpecChange inverse_change(const VisSpec& before, const SpecChange& change) {
    SpecChange inv;
    inv.base_revision = before.revision + 1;
    inv.action = std::visit(
        overloaded{
            [&](const change::SetBinding& c) -> SpecAction {
                if (const auto* old = before.binding(c.binding.channel)) {
                    return change::SetBinding{*old};
                }
                return change::RemoveBinding{c.binding.channel};
            },
            [&](const change::RemoveBinding& c) -> SpecAction {
                if (const auto* old = before.binding(c.channel)) return change::SetBinding{*old};
                return c;
            },
            [&](const change::SetVisType&) -> SpecAction {
                std::vector<ChannelBinding> all;
                for (const auto& b : before.bindings) {
                    if (b) all.push_back(*b);
                }
                return change::SetVisType{before.vis_type, std::move(all)};
            },
            [&](const change::AddFilter& c) -> SpecAction {
                return change::RemoveFilter{c.rule.id};
            },
            [&](const change::ReplaceFilter& c) -> SpecAction {
                if (const auto* old = before.find_filter(c.rule.id)) return change::ReplaceFilter{*old};
                return c;
            },
            [&](const change::RemoveFilter& c) -> SpecAction {
                for (std::size_t i = 0; i < before.filters.size(); ++i) {
                    if (before.filters[i].id == c.rule_id) {
                        return change::AddFilter{before.filters[i], i};
                    }
                }
                return c;
            },
            [&](const change::SetSort&) -> SpecAction { return change::SetSort{before.sort}; },
        },
        change.action);
    return inv;
}

std::vector<ChannelBinding> bindings_dropped_by(const VisSpec& spec, VisType target,
                                                const Dataset& dataset) {
    std::vector<ChannelBinding> dropped;
    for (Channel c : kAllChannels) {
        const ChannelBinding* b = spec.binding(c);
        if (!b) continue;
        const auto idx = dataset.find_attribute(b->attribute);
        if (!idx || binding_violation(target, c, dataset.attribute(*idx))) dropped.push_back(*b);
    }
    return dropped;
}

std::string next_filter_id(const VisSpec& spec) {
    long long max_id = 0;
    for (const auto& f : spec.filters) {
        if (f.id.size() < 2 || f.id[0] != 'f') continue;
        try {
            std::size_t used = 0;
            const long long n = std::stoll(f.id.substr(1), &used);
            if (used == f.id.size() - 1) max_id = std::max(max_id, n);
        } catch (const std::exception&) {
        }
    }
    return "f" + std::to_string(max_id + 1);
}

bool rule_keeps(const FilterRule& rule, const Dataset& dataset, RowId row) {
    return CompiledRule(rule, dataset).keeps(dataset, row);
}

std::vector<bool> visible_mask(const VisSpec& spec, const Dataset& dataset) {
    std::vector<bool> mask(dataset.row_count(), true);
    for (const auto& rule : spec.filters) {
        const CompiledRule compiled(rule, dataset);
        for (RowId r = 0; r < dataset.row_count(); ++r) {
            if (mask[r] && !compiled.keeps(dataset, r)) mask[r] = false;
        }
    }
    return mask;
}

}  // namespace vizblend
