#pragma once

#include "vizblend/data.hpp"
#include "vizblend/palette.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vizblend {

enum class VisType { scatterplot, bar_chart, stacked_bar_chart };
enum class Channel { x, y, color, size };
enum class Provenance { mvs, vbd };
enum class SortDirection { none, ascending, descending };

inline constexpr std::array<Channel, 4> kAllChannels = {Channel::x, Channel::y, Channel::color,
                                                        Channel::size};
inline constexpr std::array<VisType, 3> kAllVisTypes = {VisType::scatterplot, VisType::bar_chart,
                                                        VisType::stacked_bar_chart};

std::string_view to_string(VisType t);
std::string_view to_string(Channel c);
std::string_view to_string(Provenance p);
std::string_view to_string(SortDirection d);
// These throw InvalidRequest on unknown names.
VisType parse_vis_type(std::string_view s);
Channel parse_channel(std::string_view s);
Provenance parse_provenance(std::string_view s);
SortDirection parse_sort_direction(std::string_view s);

bool is_bar_type(VisType t);

struct ChannelBinding {
    Channel channel = Channel::x;
    std::string attribute;
    std::optional<ColorPalette> palette;
    Provenance provenance = Provenance::mvs;
    bool operator==(const ChannelBinding&) const = default;
};

// Keeps rows whose value lies in [lo, hi], or drops them when `exclude` is set.
struct RangeFilter {
    std::string attribute;
    double lo = 0.0;
    double hi = 0.0;
    bool exclude = false;
    bool operator==(const RangeFilter&) const = default;
};

// Keeps rows whose value is one of `included` (stored in category order).
struct ValueSetFilter {
    std::string attribute;
    std::vector<std::string> included;
    bool operator==(const ValueSetFilter&) const = default;
};

// Drops exactly the listed rows (sorted ascending).
struct PointSetFilter {
    std::vector<RowId> excluded;
    bool operator==(const PointSetFilter&) const = default;
};

using FilterForm = std::variant<RangeFilter, ValueSetFilter, PointSetFilter>;

struct FilterRule {
    std::string id;
    FilterForm form;
    Provenance provenance = Provenance::mvs;

    // Empty for point sets.
    std::string attribute() const;
    bool operator==(const FilterRule&) const = default;
};

struct SortState {
    std::string by_attribute;
    SortDirection direction = SortDirection::none;
    bool operator==(const SortState&) const = default;
};

struct VisSpec {
    VisType vis_type = VisType::scatterplot;
    std::array<std::optional<ChannelBinding>, 4> bindings;  // indexed by Channel
    std::vector<FilterRule> filters;
    SortState sort;
    std::int64_t revision = 0;

    const ChannelBinding* binding(Channel c) const;
    const FilterRule* find_filter(std::string_view id) const;
    bool operator==(const VisSpec&) const = default;
};

namespace change {

struct SetBinding {
    ChannelBinding binding;
    bool operator==(const SetBinding&) const = default;
};
struct RemoveBinding {
    Channel channel = Channel::x;
    bool operator==(const RemoveBinding&) const = default;
};
// Without `exact_bindings`, bindings illegal under the new type are dropped.
// With it, the binding set is replaced wholesale (used to undo a switch).
struct SetVisType {
    VisType vis_type = VisType::scatterplot;
    std::optional<std::vector<ChannelBinding>> exact_bindings;
    bool operator==(const SetVisType&) const = default;
};
struct AddFilter {
    FilterRule rule;
    std::optional<std::size_t> position;  // append when unset
    bool operator==(const AddFilter&) const = default;
};
struct ReplaceFilter {
    FilterRule rule;
    bool operator==(const ReplaceFilter&) const = default;
};
struct RemoveFilter {
    std::string rule_id;
    bool operator==(const RemoveFilter&) const = default;
};
struct SetSort {
    SortState sort;
    bool operator==(const SetSort&) const = default;
};

}  // namespace change

using SpecAction = std::variant<change::SetBinding, change::RemoveBinding, change::SetVisType,
                                change::AddFilter, change::ReplaceFilter, change::RemoveFilter,
                                change::SetSort>;

struct SpecChange {
    SpecAction action;
    std::int64_t base_revision = 0;
    bool operator==(const SpecChange&) const = default;
};

struct Violation {
    enum class Kind { illegal, incomplete };
    Kind kind = Kind::illegal;
    std::string message;
};

// Why `attribute` cannot sit on `channel` under `type`; nullopt when legal.
std::optional<std::string> binding_violation(VisType type, Channel channel,
                                             const Attribute& attribute);

std::vector<Violation> validate(const VisSpec& spec, const Dataset& dataset);

// Pure. Throws StaleRevision, IllegalChange, UnknownRule, UnknownAttribute.
VisSpec apply_change(const VisSpec& spec, const SpecChange& change, const Dataset& dataset);

// Change that takes apply_change(before, change) back to `before` (up to revision).
SpecChange inverse_change(const VisSpec& before, const SpecChange& change);

// Bindings of `spec` that would be dropped by switching to `target`.
std::vector<ChannelBinding> bindings_dropped_by(const VisSpec& spec, VisType target,
                                                const Dataset& dataset);

// Next unused "f<n>" filter id.
std::string next_filter_id(const VisSpec& spec);

bool rule_keeps(const FilterRule& rule, const Dataset& dataset, RowId row);
// Rows passing every rule.
std::vector<bool> visible_mask(const VisSpec& spec, const Dataset& dataset);

}  // namespace vizblend
