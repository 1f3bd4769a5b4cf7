#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vizblend {

using RowId = std::uint32_t;

enum class AttributeKind { quantitative, categorical };

struct Extent {
    double min = 0.0;
    double max = 0.0;

    bool contains(double v) const { return v >= min && v <= max; }
    double span() const { return max - min; }
    bool operator==(const Extent&) const = default;
};

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::categorical;
    // Quantitative with few repeated integer values; behaves as a category
    // axis on bars and as a hue on color.
    bool discrete = false;
    std::size_t distinct_count = 0;
    std::size_t missing_count = 0;
    std::optional<Extent> extent;
    // First-appearance order. Set for categorical and discrete attributes.
    std::vector<std::string> categories;

    bool is_quantitative() const { return kind == AttributeKind::quantitative; }
    bool is_categorical_like() const { return kind == AttributeKind::categorical || discrete; }
    std::optional<std::size_t> category_index(std::string_view label) const;
};

using Cell = std::variant<std::monostate, double, std::string>;

struct Row {
    RowId id = 0;
    std::vector<Cell> cells;  // aligned with Dataset::attributes()
};

// Column storage. `numbers` is filled for quantitative attributes (NaN when
// missing); `codes` indexes Attribute::categories (-1 when missing).
struct Column {
    std::vector<double> numbers;
    std::vector<std::int32_t> codes;
};

class Dataset {
public:
    Dataset(std::string id, std::vector<Attribute> attributes, std::vector<Column> columns,
            std::size_t row_count);

    const std::string& id() const { return id_; }
    std::size_t row_count() const { return row_count_; }
    std::size_t attribute_count() const { return attributes_.size(); }
    std::span<const Attribute> attributes() const { return attributes_; }

    const Attribute& attribute(std::size_t index) const { return attributes_[index]; }
    const Attribute& attribute(std::string_view name) const;
    std::optional<std::size_t> find_attribute(std::string_view name) const;
    // Throws UnknownAttribute.
    std::size_t attribute_index(std::string_view name) const;

    bool is_missing(std::size_t attr, RowId row) const;
    double number(std::size_t attr, RowId row) const;
    std::int32_t category_code(std::size_t attr, RowId row) const;
    // Display label: category text for categorical/discrete, formatted number
    // otherwise, empty when missing.
    std::string label(std::size_t attr, RowId row) const;

    Row row(RowId id) const;
    const Column& column(std::size_t attr) const { return columns_[attr]; }

private:
    std::string id_;
    std::vector<Attribute> attributes_;
    std::vector<Column> columns_;
    std::size_t row_count_;
};

struct CsvOptions {
    char delimiter = ',';
    bool header = true;
    std::string dataset_id = "dataset";
};

Dataset load_csv(std::istream& source, const CsvOptions& options = {});
Dataset load_csv_text(std::string_view text, const CsvOptions& options = {});
Dataset load_csv_file(const std::string& path, CsvOptions options = {});

struct AttributeStats {
    std::optional<Extent> extent;
    std::vector<std::string> categories;
    std::size_t distinct_count = 0;
    std::size_t missing_count = 0;
};

// Throws UnknownAttribute.
AttributeStats attribute_stats(const Dataset& dataset, std::string_view attr);

// Shortest round-trip decimal text, "4" for integral values.
std::string format_number(double value);

inline constexpr double kMissingNumber = std::numeric_limits<double>::quiet_NaN();

}  // namespace vizblend
