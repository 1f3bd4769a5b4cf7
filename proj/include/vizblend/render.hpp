#pragma once

#include "vizblend/data.hpp"
#include "vizblend/spec.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vizblend {

// One rendered mark. Coordinates are normalized to [0, 1]; the client owns
// the pixel mapping.
struct Mark {
    std::string mark_id;
    std::optional<RowId> row;  // scatterplot points
    std::string category;      // bars and stacked segments
    std::string series;        // stacked segment color value
    double x = 0.0;
    double y = 0.0;
    double y0 = 0.0;  // bar baseline
    double size = 0.5;
    double value = 0.0;  // bar aggregate; unused for points
    std::string color;
    bool operator==(const Mark&) const = default;
};

struct AxisInfo {
    Channel channel = Channel::x;
    std::string attribute;
    std::optional<Extent> domain;
    std::vector<std::string> categories;  // bar x axis, in bar order
    bool operator==(const AxisInfo&) const = default;
};

struct ViewModel {
    VisType vis_type = VisType::scatterplot;
    std::int64_t revision = 0;
    std::vector<Mark> marks;
    std::vector<AxisInfo> axes;
    std::vector<std::string> bar_order;
    std::size_t visible_rows = 0;
    bool operator==(const ViewModel&) const = default;
};

inline constexpr double kUniformMarkSize = 0.5;
inline constexpr double kMinMarkSize = 0.1;

// Throws MissingAxes when X or Y is unbound, InvalidSpec on any violation.
ViewModel render(const VisSpec& spec, const Dataset& dataset);

struct BarGroup {
    std::string category;
    std::size_t category_index = 0;
    std::vector<RowId> rows;
};

// One group per X category holding at least one visible row with X and Y
// present, in category order.
std::vector<BarGroup> bar_groups(const VisSpec& spec, const Dataset& dataset,
                                 const std::vector<bool>& visible);

// Mean over non-missing values; NaN when there are none.
double mean_of(const Dataset& dataset, std::size_t attr, std::span<const RowId> rows);
// Most frequent label over non-missing values, ties to the earlier category.
std::string mode_of(const Dataset& dataset, std::size_t attr, std::span<const RowId> rows);

// Permutation of `groups` for `sort`. Ties and undefined means keep category
// order; undefined means go last.
std::vector<std::size_t> order_bars(const std::vector<BarGroup>& groups, const Dataset& dataset,
                                    const SortState& sort);

}  // namespace vizblend
