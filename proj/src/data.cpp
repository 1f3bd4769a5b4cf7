#include "vizblend/data.hpp"

#include "vizblend/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace vizblend {

namespace {

constexpr double kNumericShare = 0.95;
constexpr std::size_t kMaxDiscreteDistinct = 12;

using Record = std::vector<std::string>;

// RFC-4180 reader. Returns records with their starting line for diagnostics.
struct ParsedCsv {
    std::vector<Record> records;
    std::vector<std::size_t> lines;
};

ParsedCsv parse_records(std::string_view text, char delimiter) {
    ParsedCsv out;
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    Record record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        out.records.push_back(std::move(record));
        out.lines.push_back(record_line);
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
            ++line;
            record_line = line;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::malformed_csv,
                    "unterminated quoted field starting on line " + std::to_string(record_line));
    }
    if (field_started || !record.empty()) end_record();
    return out;
}

bool is_missing_token(const std::string& s) { return s.empty() || s == "NA"; }

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

struct TypedColumn {
    Attribute attribute;
    Column column;
};

TypedColumn type_column(std::string name, const std::vector<const std::string*>& cells) {
    TypedColumn out;
    out.attribute.name = std::move(name);
    const std::size_t n = cells.size();

    std::size_t present = 0;
    std::size_t numeric = 0;
    std::vector<std::optional<double>> parsed(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (is_missing_token(*cells[r])) continue;
        ++present;
        parsed[r] = parse_number(*cells[r]);
        if (parsed[r]) ++numeric;
    }

    const bool quantitative =
        present > 0 && static_cast<double>(numeric) >= kNumericShare * static_cast<double>(present);
    Attribute& attr = out.attribute;

    if (quantitative) {
        attr.kind = AttributeKind::quantitative;
        out.column.numbers.assign(n, kMissingNumber);
        std::vector<double> order;  // first appearance
        std::unordered_set<double> seen;
        bool all_integer = true;
        Extent extent{std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
        for (std::size_t r = 0; r < n; ++r) {
            if (!parsed[r]) {
                ++attr.missing_count;
                continue;
            }
            const double v = *parsed[r];
            out.column.numbers[r] = v;
            extent.min = std::min(extent.min, v);
            extent.max = std::max(extent.max, v);
            if (v != std::floor(v)) all_integer = false;
            if (seen.insert(v).second) order.push_back(v);
        }
        attr.extent = extent;
        attr.distinct_count = order.size();
        attr.discrete = all_integer && order.size() <= kMaxDiscreteDistinct &&
                        order.size() * 2 <= numeric;
        if (attr.discrete) {
            std::unordered_map<double, std::int32_t> code_of;
            for (double v : order) {
                code_of.emplace(v, static_cast<std::int32_t>(attr.categories.size()));
                attr.categories.push_back(format_number(v));
            }
            out.column.codes.assign(n, -1);
            for (std::size_t r = 0; r < n; ++r) {
                if (parsed[r]) out.column.codes[r] = code_of.at(*parsed[r]);
            }
        }
    } else {
        attr.kind = AttributeKind::categorical;
        out.column.codes.assign(n, -1);
        std::unordered_map<std::string, std::int32_t> code_of;
        for (std::size_t r = 0; r < n; ++r) {
            const std::string& s = *cells[r];
            if (is_missing_token(s)) {
                ++attr.missing_count;
                continue;
            }
            auto [it, inserted] =
                code_of.emplace(s, static_cast<std::int32_t>(attr.categories.size()));
            if (inserted) attr.categories.push_back(s);
            out.column.codes[r] = it->second;
        }
        attr.distinct_count = attr.categories.size();
    }
    return out;
}

}  // namespace

std::optional<std::size_t> Attribute::category_index(std::string_view label) const {
    const auto it = std::find(categories.begin(), categories.end(), label);
    if (it == categories.end()) return std::nullopt;
    return static_cast<std::size_t>(it - categories.begin());
}

Dataset::Dataset(std::string id, std::vector<Attribute> attributes, std::vector<Column> columns,
                 std::size_t row_count)
    : id_(std::move(id)),
      attributes_(std::move(attributes)),
      columns_(std::move(columns)),
      row_count_(row_count) {}

std::optional<std::size_t> Dataset::find_attribute(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t Dataset::attribute_index(std::string_view name) const {
    if (auto i = find_attribute(name)) return *i;
    throw Error(ErrorCode::unknown_attribute, "unknown attribute '" + std::string(name) + "'");
}

const Attribute& Dataset::attribute(std::string_view name) const {
    return attributes_[attribute_index(name)];
}

bool Dataset::is_missing(std::size_t attr, RowId row) const {
    const Column& c = columns_[attr];
    if (!c.numbers.empty()) return std::isnan(c.numbers[row]);
    return c.codes[row] < 0;
}

double Dataset::number(std::size_t attr, RowId row) const {
    const Column& c = columns_[attr];
    return c.numbers.empty() ? kMissingNumber : c.numbers[row];
}

std::int32_t Dataset::category_code(std::size_t attr, RowId row) const {
    const Column& c = columns_[attr];
    return c.codes.empty() ? -1 : c.codes[row];
}

std::string Dataset::label(std::size_t attr, RowId row) const {
    if (is_missing(attr, row)) return {};
    const Column& c = columns_[attr];
    if (!c.codes.empty()) return attributes_[attr].categories[static_cast<std::size_t>(c.codes[row])];
    return format_number(c.numbers[row]);
}

Row Dataset::row(RowId id) const {
    Row out;
    out.id = id;
    out.cells.reserve(attributes_.size());
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
        if (is_missing(a, id)) {
            out.cells.emplace_back(std::monostate{});
        } else if (attributes_[a].is_quantitative()) {
            out.cells.emplace_back(number(a, id));
        } else {
            out.cells.emplace_back(label(a, id));
        }
    }
    return out;
}

Dataset load_csv_text(std::string_view text, const CsvOptions& options) {
    ParsedCsv parsed = parse_records(text, options.delimiter);
    if (parsed.records.empty()) throw Error(ErrorCode::malformed_csv, "empty input");

    std::vector<std::string> names;
    std::size_t first_data = 0;
    const std::size_t width = parsed.records.front().size();
    if (options.header) {
        names = parsed.records.front();
        first_data = 1;
        std::unordered_set<std::string> seen;
        for (const auto& n : names) {
            if (!seen.insert(n).second) {
                throw Error(ErrorCode::duplicate_attribute_name,
                            "duplicate attribute name '" + n + "'");
            }
        }
    } else {
        for (std::size_t i = 0; i < width; ++i) names.push_back("column_" + std::to_string(i + 1));
    }

    const std::size_t n = parsed.records.size() - first_data;
    for (std::size_t r = first_data; r < parsed.records.size(); ++r) {
        if (parsed.records[r].size() != width) {
            throw Error(ErrorCode::malformed_csv,
                        "line " + std::to_string(parsed.lines[r]) + " has " +
                            std::to_string(parsed.records[r].size()) + " fields, expected " +
                            std::to_string(width));
        }
    }

    std::vector<Attribute> attributes;
    std::vector<Column> columns;
    attributes.reserve(width);
    columns.reserve(width);
    std::vector<const std::string*> cells(n);
    for (std::size_t a = 0; a < width; ++a) {
        for (std::size_t r = 0; r < n; ++r) cells[r] = &parsed.records[first_data + r][a];
        TypedColumn typed = type_column(names[a], cells);
        attributes.push_back(std::move(typed.attribute));
        columns.push_back(std::move(typed.column));
    }
    return Dataset(options.dataset_id, std::move(attributes), std::move(columns), n);
}

Dataset load_csv(std::istream& source, const CsvOptions& options) {
    std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
    return load_csv_text(text, options);
}

Dataset load_csv_file(const std::string& path, CsvOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::malformed_csv, "cannot open '" + path + "'");
    if (options.dataset_id == "dataset") {
        const auto slash = path.find_last_of('/');
        options.dataset_id = slash == std::string::npos ? path : path.substr(slash + 1);
    }
    return load_csv(in, options);
}

AttributeStats attribute_stats(const Dataset& dataset, std::string_view attr) {
    const Attribute& a = dataset.attribute(attr);
    AttributeStats out;
    out.extent = a.extent;
    out.categories = a.categories;
    out.distinct_count = a.distinct_count;
    out.missing_count = a.missing_count;
    return out;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "NA";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return std::to_string(value);
    std::string out(buf, ptr);
    if (out == "-0") out = "0";
    return out;
}

}  // namespace vizblend
