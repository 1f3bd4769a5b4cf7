#pragma once

#include "vizblend/data.hpp"
#include "vizblend/spec.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vizblend {

class PaletteMemory;

struct RangeSliderWidget {
    Extent domain;
    double lo = 0.0;
    double hi = 0.0;
    bool exclude = false;  // the selected band is filtered out rather than kept
    bool operator==(const RangeSliderWidget&) const = default;
};

struct CheckboxSetWidget {
    std::vector<std::string> values;
    std::vector<bool> checked;
    bool operator==(const CheckboxSetWidget&) const = default;
};

// Read-only chip for point-set rules.
struct PointChipWidget {
    std::size_t point_count = 0;
    bool operator==(const PointChipWidget&) const = default;
};

using FilterWidget = std::variant<RangeSliderWidget, CheckboxSetWidget, PointChipWidget>;

struct FilterWidgetModel {
    std::string rule_id;
    std::string attribute;
    Provenance provenance = Provenance::mvs;
    FilterWidget widget;
    std::size_t visible_count = 0;   // rows passing this rule alone
    std::size_t excluded_count = 0;  // rows failing this rule alone
    bool editable = true;
    bool operator==(const FilterWidgetModel&) const = default;
};

std::string_view widget_kind(const FilterWidget& w);  // "RangeSlider", "CheckboxSet", "PointChip"

FilterWidgetModel widget_for(const FilterRule& rule, const Dataset& dataset);
// One widget per rule, in rule order.
std::vector<FilterWidgetModel> filter_widgets(const VisSpec& spec, const Dataset& dataset);

struct RangeSelection {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<bool> exclude;  // keep the rule's mode when unset
};
struct CheckboxSelection {
    std::vector<std::string> checked;
};
using WidgetSelection = std::variant<RangeSelection, CheckboxSelection>;

// Encoding-panel view of one channel.
struct ShelfState {
    Channel channel = Channel::x;
    std::string attribute;
    std::string label;  // "Cylinders (customized)" when a custom palette is attached
    Provenance provenance = Provenance::mvs;
    bool customized = false;
    bool operator==(const ShelfState&) const = default;
};

ShelfState shelf_for(const ChannelBinding& binding);
std::vector<ShelfState> encoding_shelves(const VisSpec& spec);

// Change builders for the direct-manipulation paradigm. Each returns a change
// against `spec.revision`; the session commits it.
namespace mvs {

SpecChange set_axis(const VisSpec& spec, const Dataset& dataset, Channel channel,
                    std::string_view attribute);
SpecChange set_mark_encoding(const VisSpec& spec, const Dataset& dataset, Channel channel,
                             std::string_view attribute, const PaletteMemory& memory);

struct SwitchPlan {
    SpecChange change;
    std::vector<ChannelBinding> dropped;
};
SwitchPlan switch_vis_type(const VisSpec& spec, const Dataset& dataset, VisType target);

// Rule a fresh attribute filter starts with: full-range slider for continuous
// attributes, all-checked boxes for categorical/discrete ones.
FilterRule initial_attribute_rule(const Dataset& dataset, std::string_view attribute,
                                  std::string rule_id);
// Existing Range/ValueSet rule on `attribute`, if any.
const FilterRule* attribute_rule(const VisSpec& spec, std::string_view attribute);

SpecChange add_attribute_filter(const VisSpec& spec, const Dataset& dataset,
                                std::string_view attribute);
SpecChange update_filter_widget(const VisSpec& spec, const Dataset& dataset,
                                std::string_view rule_id, const WidgetSelection& selection);
SpecChange sort_bars(const VisSpec& spec, SortDirection direction);
SpecChange remove_encoding(const VisSpec& spec, Channel channel);
SpecChange remove_filter(const VisSpec& spec, std::string_view rule_id);

}  // namespace mvs

}  // namespace vizblend
