#include "vizblend/history.hpp"

#include "vizblend/error.hpp"

namespace vizblend {

void CommandLog::record(LogEntry entry) {
    entries_.resize(cursor_);
    entries_.push_back(std::move(entry));
    cursor_ = entries_.size();
}

const LogEntry& CommandLog::undo_target() const {
    if (!can_undo()) throw Error(ErrorCode::nothing_to_undo, "nothing to undo");
    return entries_[cursor_ - 1];
}

const LogEntry& CommandLog::redo_target() const {
    if (!can_redo()) throw Error(ErrorCode::nothing_to_redo, "nothing to redo");
    return entries_[cursor_];
}

void CommandLog::step_back() {
    undo_target();
    --cursor_;
}

void CommandLog::step_forward() {
    redo_target();
    ++cursor_;
}

VisSpec CommandLog::replay(const Dataset& dataset) const {
    VisSpec spec = initial_;
    for (std::size_t i = 0; i < cursor_; ++i) {
        SpecChange c = entries_[i].change;
        c.base_revision = spec.revision;
        spec = apply_change(spec, c, dataset);
    }
    return spec;
}

void CommandLog::restore(VisSpec initial, std::vector<LogEntry> entries, std::size_t cursor) {
    if (cursor > entries.size()) {
        throw Error(ErrorCode::invalid_request, "log cursor past the end of the log");
    }
    initial_ = std::move(initial);
    entries_ = std::move(entries);
    cursor_ = cursor;
}

bool PaletteMemory::remember(const std::string& attribute, const ColorPalette& palette) {
    if (!palette.customized) return false;
    palettes_[attribute] = palette;
    return true;
}

std::optional<ColorPalette> PaletteMemory::recall(std::string_view attribute) const {
    const auto it = palettes_.find(attribute);
    if (it == palettes_.end()) return std::nullopt;
    return it->second;
}

std::vector<CorollaryUpdate> corollary_state(const SpecChange& change, Provenance paradigm,
                                             const VisSpec& committed, const Dataset& dataset) {
    std::vector<CorollaryUpdate> out;
    if (paradigm == Provenance::mvs) return out;
    auto widget_update = [&](const std::string& rule_id) {
        if (const FilterRule* rule = committed.find_filter(rule_id)) {
            CorollaryUpdate u;
            u.target = CorollaryUpdate::Target::filter_widget;
            u.widget = widget_for(*rule, dataset);
            out.push_back(std::move(u));
        }
    };
    if (const auto* add = std::get_if<change::AddFilter>(&change.action)) {
        widget_update(add->rule.id);
    } else if (const auto* rep = std::get_if<change::ReplaceFilter>(&change.action)) {
        widget_update(rep->rule.id);
    } else if (const auto* set = std::get_if<change::SetBinding>(&change.action)) {
        if (const ChannelBinding* b = committed.binding(set->binding.channel)) {
            CorollaryUpdate u;
            u.target = CorollaryUpdate::Target::encoding_shelf;
            u.shelf = shelf_for(*b);
            out.push_back(std::move(u));
        }
    }
    return out;
}

}  // namespace vizblend
