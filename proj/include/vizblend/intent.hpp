#pragma once

#include "vizblend/data.hpp"
#include "vizblend/spec.hpp"

#include <string>
#include <variant>
#include <vector>

namespace vizblend {

enum class SelectionOrigin { lasso, click, rubber_band };

struct Selection {
    std::vector<RowId> row_ids;
    SelectionOrigin origin = SelectionOrigin::lasso;
    bool operator==(const Selection&) const = default;
};

struct ColorGroup {
    std::string color;
    Selection selection;
    bool operator==(const ColorGroup&) const = default;
};

struct RecolorDemo {
    std::vector<ColorGroup> groups;
    bool operator==(const RecolorDemo&) const = default;
};

struct SizedPoint {
    RowId row = 0;
    double size = 0.0;
    bool operator==(const SizedPoint&) const = default;
};

struct ResizeDemo {
    std::vector<SizedPoint> points;
    bool operator==(const ResizeDemo&) const = default;
};

struct DragOutDemo {
    Selection selection;
    bool operator==(const DragOutDemo&) const = default;
};

enum class BarExtreme { extreme_left, extreme_right };

struct DragBarDemo {
    std::string category;
    BarExtreme target = BarExtreme::extreme_right;
    bool operator==(const DragBarDemo&) const = default;
};

using Demonstration = std::variant<RecolorDemo, ResizeDemo, DragOutDemo, DragBarDemo>;

std::string_view to_string(SelectionOrigin o);
std::string_view to_string(BarExtreme e);
SelectionOrigin parse_selection_origin(std::string_view s);
BarExtreme parse_bar_extreme(std::string_view s);

enum class CandidateKind { encoding, filter, sort };

// Filter templates in tie-break order.
enum class FilterTemplate { point_set, x_range, y_range, value_set };

struct Evidence {
    std::string template_name;  // color, size, point_set, x_range, y_range, value_set, sort
    std::string attribute;      // empty for point sets
    double type_affinity = 0.0;
    double separation = 0.0;
    double parsimony = 0.0;
    std::size_t selection_size = 0;
    std::size_t extension_size = 0;
    std::vector<std::string> excluded_values;  // value_set only
    bool operator==(const Evidence&) const = default;
};

struct Candidate {
    SpecChange change;
    CandidateKind kind = CandidateKind::encoding;
    double score = 0.0;
    Evidence evidence;
    int template_order = 0;
    bool operator==(const Candidate&) const = default;
};

// Linear score weights; configuration rather than constants.
struct RankingWeights {
    double type_affinity = 0.4;
    double separation = 0.4;
    double parsimony = 0.2;
};

// Each returns candidates ordered by score (desc), attribute name, template.
// Every candidate's change applies cleanly to `spec`.
std::vector<Candidate> infer_color_candidates(const Dataset& dataset, const VisSpec& spec,
                                              const RecolorDemo& demo,
                                              const RankingWeights& weights = {});
std::vector<Candidate> infer_size_candidates(const Dataset& dataset, const VisSpec& spec,
                                             const ResizeDemo& demo,
                                             const RankingWeights& weights = {});
std::vector<Candidate> infer_filter_candidates(const Dataset& dataset, const VisSpec& spec,
                                               const DragOutDemo& demo,
                                               const RankingWeights& weights = {});
std::vector<Candidate> infer_sort_candidates(const Dataset& dataset, const VisSpec& spec,
                                             const DragBarDemo& demo,
                                             const RankingWeights& weights = {});

std::vector<Candidate> infer_candidates(const Dataset& dataset, const VisSpec& spec,
                                        const Demonstration& demo,
                                        const RankingWeights& weights = {});

// Rows removed by `rule` alone among the `visible` ones.
std::vector<RowId> rule_extension(const FilterRule& rule, const Dataset& dataset,
                                  const std::vector<bool>& visible);

}  // namespace vizblend
