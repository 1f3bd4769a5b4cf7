#include "vizblend/palette.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace vizblend {

namespace {

struct Rgb {
    int r, g, b;
};

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Rgb to_rgb(std::string_view hex) {
    auto byte = [&](std::size_t i) { return hex_digit(hex[i]) * 16 + hex_digit(hex[i + 1]); };
    return {byte(1), byte(3), byte(5)};
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

}  // namespace

std::optional<std::string> normalize_hex(std::string_view text) {
    if (text.size() == 4 && text[0] == '#') {
        std::string out = "#";
        for (std::size_t i = 1; i < 4; ++i) {
            if (hex_digit(text[i]) < 0) return std::nullopt;
            out.append(2, static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        }
        return out;
    }
    if (text.size() != 7 || text[0] != '#') return std::nullopt;
    std::string out = "#";
    for (std::size_t i = 1; i < 7; ++i) {
        if (hex_digit(text[i]) < 0) return std::nullopt;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
    }
    return out;
}

std::string interpolate_color(std::string_view from, std::string_view to, double t) {
    t = std::clamp(t, 0.0, 1.0);
    const Rgb a = to_rgb(from);
    const Rgb b = to_rgb(to);
    auto mix = [t](int x, int y) {
        return static_cast<int>(std::lround(x + (y - x) * t));
    };
    return to_hex({mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)});
}

std::string ColorPalette::color_for_label(std::string_view label) const {
    for (const auto& v : values) {
        if (v.value == label) return v.color;
    }
    return default_color;
}

std::string ColorPalette::color_for_number(double value) const {
    if (intervals.empty() || std::isnan(value)) return default_color;
    if (value <= intervals.front().hi) return intervals.front().color;
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        const IntervalColor& prev = intervals[i - 1];
        const IntervalColor& next = intervals[i];
        if (value < next.lo) {
            const double t = (value - prev.hi) / (next.lo - prev.hi);
            return interpolate_color(prev.color, next.color, t);
        }
        if (value <= next.hi) return next.color;
    }
    return intervals.back().color;
}

std::optional<std::string> ColorPalette::disjointness_error() const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (values[i].value == values[j].value) {
                return "value '" + values[i].value + "' assigned twice";
            }
        }
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].lo <= intervals[i].hi)) return "interval with lo > hi";
        if (i > 0 && !(intervals[i - 1].hi < intervals[i].lo)) {
            return "overlapping or unsorted intervals";
        }
    }
    return std::nullopt;
}

ColorPalette default_palette(const Attribute& attribute) {
    ColorPalette p;
    if (attribute.is_categorical_like()) {
        for (std::size_t i = 0; i < attribute.categories.size(); ++i) {
            p.values.push_back(
                {attribute.categories[i], std::string(kCategoricalScheme[i % kCategoricalScheme.size()])});
        }
    } else if (attribute.extent) {
        const Extent e = *attribute.extent;
        if (e.min == e.max) {
            p.intervals.push_back({e.min, e.max, std::string(kRampLow)});
        } else {
            p.intervals.push_back({e.min, e.min, std::string(kRampLow)});
            p.intervals.push_back({e.max, e.max, std::string(kRampHigh)});
        }
    }
    return p;
}

}  // namespace vizblend
