#include "vizblend/render.hpp"

#include "vizblend/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vizblend {

namespace {

double normalize(double v, const Extent& e) {
    if (e.span() == 0.0) return 0.5;
    return (v - e.min) / e.span();
}

double category_x(std::size_t index, std::size_t count) {
    if (count <= 1) return 0.5;
    return static_cast<double>(index) / static_cast<double>(count - 1);
}

struct ColorEncoder {
    std::size_t attr = 0;
    bool categorical = false;
    ColorPalette palette;
};

std::optional<ColorEncoder> color_encoder(const VisSpec& spec, const Dataset& dataset) {
    const ChannelBinding* b = spec.binding(Channel::color);
    if (!b) return std::nullopt;
    ColorEncoder enc;
    enc.attr = dataset.attribute_index(b->attribute);
    const Attribute& a = dataset.attribute(enc.attr);
    enc.categorical = a.is_categorical_like();
    enc.palette = b->palette ? *b->palette : default_palette(a);
    return enc;
}

void render_scatter(const VisSpec& spec, const Dataset& dataset, const std::vector<bool>& visible,
                    ViewModel& view) {
    const std::size_t xa = dataset.attribute_index(spec.binding(Channel::x)->attribute);
    const std::size_t ya = dataset.attribute_index(spec.binding(Channel::y)->attribute);
    const Extent xe = dataset.attribute(xa).extent.value_or(Extent{});
    const Extent ye = dataset.attribute(ya).extent.value_or(Extent{});
    const auto color = color_encoder(spec, dataset);
    std::optional<std::size_t> sa;
    Extent se;
    if (const ChannelBinding* sb = spec.binding(Channel::size)) {
        sa = dataset.attribute_index(sb->attribute);
        se = dataset.attribute(*sa).extent.value_or(Extent{});
    }

    for (RowId r = 0; r < dataset.row_count(); ++r) {
        if (!visible[r]) continue;
        if (dataset.is_missing(xa, r) || dataset.is_missing(ya, r)) continue;
        if (color && dataset.is_missing(color->attr, r)) continue;
        if (sa && dataset.is_missing(*sa, r)) continue;
        Mark m;
        m.mark_id = "r" + std::to_string(r);
        m.row = r;
        m.x = normalize(dataset.number(xa, r), xe);
        m.y = normalize(dataset.number(ya, r), ye);
        m.size = sa ? kMinMarkSize + (1.0 - kMinMarkSize) * normalize(dataset.number(*sa, r), se)
                    : kUniformMarkSize;
        if (!color) {
            m.color = std::string(kDefaultMarkColor);
        } else if (color->categorical) {
            m.color = color->palette.color_for_label(dataset.label(color->attr, r));
        } else {
            m.color = color->palette.color_for_number(dataset.number(color->attr, r));
        }
        view.marks.push_back(std::move(m));
    }
    view.axes.push_back({Channel::x, dataset.attribute(xa).name, dataset.attribute(xa).extent, {}});
    view.axes.push_back({Channel::y, dataset.attribute(ya).name, dataset.attribute(ya).extent, {}});
}

void render_bars(const VisSpec& spec, const Dataset& dataset, const std::vector<bool>& visible,
                 ViewModel& view) {
    const std::size_t ya = dataset.attribute_index(spec.binding(Channel::y)->attribute);
    const auto groups = bar_groups(spec, dataset, visible);
    const auto order = order_bars(groups, dataset, spec.sort);
    const auto color = color_encoder(spec, dataset);
    const bool stacked = spec.vis_type == VisType::stacked_bar_chart;

    // Bars (or segments) carry raw bottom/top values until the y domain is known.
    struct Raw {
        Mark mark;
        double bottom;
        double top;
    };
    std::vector<Raw> raws;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const BarGroup& g = groups[order[slot]];
        view.bar_order.push_back(g.category);
        const double x = category_x(slot, order.size());
        if (!stacked) {
            Raw raw;
            raw.mark.mark_id = "b:" + g.category;
            raw.mark.category = g.category;
            raw.mark.x = x;
            raw.mark.size = 1.0;
            raw.mark.value = mean_of(dataset, ya, g.rows);
            if (!color) {
                raw.mark.color = std::string(kDefaultMarkColor);
            } else if (color->categorical) {
                raw.mark.color = color->palette.color_for_label(mode_of(dataset, color->attr, g.rows));
            } else {
                raw.mark.color = color->palette.color_for_number(mean_of(dataset, color->attr, g.rows));
            }
            raw.bottom = 0.0;
            raw.top = raw.mark.value;
            lo = std::min(lo, raw.top);
            hi = std::max(hi, raw.top);
            raws.push_back(std::move(raw));
            continue;
        }
        // Segment height = sum over the segment / bar row count, so segments
        // add up to the bar mean.
        const Attribute& ca = dataset.attribute(color->attr);
        std::vector<double> sums(ca.categories.size(), 0.0);
        std::vector<bool> present(ca.categories.size(), false);
        for (RowId r : g.rows) {
            const auto code = dataset.category_code(color->attr, r);
            if (code < 0) continue;
            sums[static_cast<std::size_t>(code)] += dataset.number(ya, r);
            present[static_cast<std::size_t>(code)] = true;
        }
        const double count = static_cast<double>(g.rows.size());
        double base = 0.0;
        for (std::size_t c = 0; c < ca.categories.size(); ++c) {
            if (!present[c]) continue;
            Raw raw;
            raw.mark.mark_id = "s:" + g.category + "|" + ca.categories[c];
            raw.mark.category = g.category;
            raw.mark.series = ca.categories[c];
            raw.mark.x = x;
            raw.mark.size = 1.0;
            raw.mark.value = sums[c] / count;
            raw.mark.color = color->palette.color_for_label(ca.categories[c]);
            raw.bottom = base;
            raw.top = base + raw.mark.value;
            base = raw.top;
            lo = std::min({lo, raw.bottom, raw.top});
            hi = std::max({hi, raw.bottom, raw.top});
            raws.push_back(std::move(raw));
        }
    }
    if (hi == lo) hi = lo + 1.0;
    const Extent domain{lo, hi};
    for (auto& raw : raws) {
        raw.mark.y0 = normalize(raw.bottom, domain);
        raw.mark.y = normalize(raw.top, domain);
        view.marks.push_back(std::move(raw.mark));
    }
    const std::size_t xa = dataset.attribute_index(spec.binding(Channel::x)->attribute);
    view.axes.push_back({Channel::x, dataset.attribute(xa).name, std::nullopt, view.bar_order});
    view.axes.push_back({Channel::y, dataset.attribute(ya).name, domain, {}});
}

}  // namespace

ViewModel render(const VisSpec& spec, const Dataset& dataset) {
    if (!spec.binding(Channel::x) || !spec.binding(Channel::y)) {
        throw Error(ErrorCode::missing_axes, "X and Y must both be bound to render");
    }
    const auto violations = validate(spec, dataset);
    if (!violations.empty()) {
        std::string msg = "invalid spec:";
        for (const auto& v : violations) msg += " " + v.message + ";";
        throw Error(ErrorCode::invalid_spec, msg);
    }
    ViewModel view;
    view.vis_type = spec.vis_type;
    view.revision = spec.revision;
    const auto visible = visible_mask(spec, dataset);
    view.visible_rows = static_cast<std::size_t>(std::count(visible.begin(), visible.end(), true));
    if (spec.vis_type == VisType::scatterplot) {
        render_scatter(spec, dataset, visible, view);
    } else {
        render_bars(spec, dataset, visible, view);
    }
    return view;
}

std::vector<BarGroup> bar_groups(const VisSpec& spec, const Dataset& dataset,
                                 const std::vector<bool>& visible) {
    const std::size_t xa = dataset.attribute_index(spec.binding(Channel::x)->attribute);
    const std::size_t ya = dataset.attribute_index(spec.binding(Channel::y)->attribute);
    const Attribute& x = dataset.attribute(xa);
    std::vector<BarGroup> by_code(x.categories.size());
    for (std::size_t c = 0; c < by_code.size(); ++c) {
        by_code[c].category = x.categories[c];
        by_code[c].category_index = c;
    }
    for (RowId r = 0; r < dataset.row_count(); ++r) {
        if (!visible[r] || dataset.is_missing(ya, r)) continue;
        const auto code = dataset.category_code(xa, r);
        if (code < 0) continue;
        by_code[static_cast<std::size_t>(code)].rows.push_back(r);
    }
    std::vector<BarGroup> out;
    for (auto& g : by_code) {
        if (!g.rows.empty()) out.push_back(std::move(g));
    }
    return out;
}

double mean_of(const Dataset& dataset, std::size_t attr, std::span<const RowId> rows) {
    double sum = 0.0;
    std::size_t n = 0;
    for (RowId r : rows) {
        const double v = dataset.number(attr, r);
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    return n == 0 ? kMissingNumber : sum / static_cast<double>(n);
}

std::string mode_of(const Dataset& dataset, std::size_t attr, std::span<const RowId> rows) {
    const Attribute& a = dataset.attribute(attr);
    std::vector<std::size_t> counts(a.categories.size(), 0);
    for (RowId r : rows) {
        const auto code = dataset.category_code(attr, r);
        if (code >= 0) ++counts[static_cast<std::size_t>(code)];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    if (counts.empty() || counts[best] == 0) return {};
    return a.categories[best];
}

std::vector<std::size_t> order_bars(const std::vector<BarGroup>& groups, const Dataset& dataset,
                                    const SortState& sort) {
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    if (sort.direction == SortDirection::none || sort.by_attribute.empty()) return order;
    const std::size_t attr = dataset.attribute_index(sort.by_attribute);
    std::vector<double> means(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) means[i] = mean_of(dataset, attr, groups[i].rows);
    const bool ascending = sort.direction == SortDirection::ascending;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = means[a];
        const double mb = means[b];
        if (std::isnan(ma) || std::isnan(mb)) return !std::isnan(ma) && std::isnan(mb);
        return ascending ? ma < mb : ma > mb;
    });
    return order;
}

}  // namespace vizblend
