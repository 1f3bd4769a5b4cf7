#pragma once

#include "vizblend/data.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vizblend {

struct ValueColor {
    std::string value;
    std::string color;
    bool operator==(const ValueColor&) const = default;
};

struct IntervalColor {
    double lo = 0.0;
    double hi = 0.0;
    std::string color;
    bool operator==(const IntervalColor&) const = default;
};

inline constexpr std::string_view kDefaultMarkColor = "#4c78a8";

// Categorical attributes use `values`; continuous ones use `intervals`, which
// are sorted, disjoint and interpolated linearly between neighbours.
struct ColorPalette {
    std::vector<ValueColor> values;
    std::vector<IntervalColor> intervals;
    std::string default_color{kDefaultMarkColor};
    // Built from a user demonstration rather than generated.
    bool customized = false;

    std::string color_for_label(std::string_view label) const;
    std::string color_for_number(double value) const;
    // Empty when assignments are pairwise disjoint.
    std::optional<std::string> disjointness_error() const;

    bool operator==(const ColorPalette&) const = default;
};

inline constexpr std::array<std::string_view, 10> kCategoricalScheme = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
};
inline constexpr std::string_view kRampLow = "#c6dbef";
inline constexpr std::string_view kRampHigh = "#08306b";

ColorPalette default_palette(const Attribute& attribute);

// Lowercase "#rrggbb", or nullopt when `text` is not a hex color.
std::optional<std::string> normalize_hex(std::string_view text);
std::string interpolate_color(std::string_view from, std::string_view to, double t);

}  // namespace vizblend
