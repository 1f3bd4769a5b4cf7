#pragma once

#include "vizblend/data.hpp"
#include "vizblend/mvs.hpp"
#include "vizblend/spec.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vizblend {

struct LogEntry {
    std::int64_t revision = 0;  // revision the change produced when first committed
    SpecChange change;
    Provenance paradigm = Provenance::mvs;
    SpecChange inverse;
};

// Unified MVS/VbD command log with an undo cursor. Entries past the cursor
// are the redo tail and are dropped on the next fresh commit.
class CommandLog {
public:
    CommandLog() = default;
    explicit CommandLog(VisSpec initial) : initial_(std::move(initial)) {}

    const VisSpec& initial() const { return initial_; }
    const std::vector<LogEntry>& entries() const { return entries_; }
    std::size_t cursor() const { return cursor_; }
    bool can_undo() const { return cursor_ > 0; }
    bool can_redo() const { return cursor_ < entries_.size(); }

    void record(LogEntry entry);
    // Entry the next undo reverts / redo re-applies. Throw NothingToUndo/Redo.
    const LogEntry& undo_target() const;
    const LogEntry& redo_target() const;
    void step_back();
    void step_forward();

    // Replays entries [0, cursor) from the initial spec. Revisions advance by
    // one per entry, so compare against the live spec modulo revision.
    VisSpec replay(const Dataset& dataset) const;

    // For snapshot restore.
    void restore(VisSpec initial, std::vector<LogEntry> entries, std::size_t cursor);

private:
    VisSpec initial_;
    std::vector<LogEntry> entries_;
    std::size_t cursor_ = 0;
};

// Last user-customized palette per attribute, scoped to a session.
class PaletteMemory {
public:
    // Stores only customized palettes; returns whether it stored.
    bool remember(const std::string& attribute, const ColorPalette& palette);
    std::optional<ColorPalette> recall(std::string_view attribute) const;
    const std::map<std::string, ColorPalette, std::less<>>& entries() const { return palettes_; }

private:
    std::map<std::string, ColorPalette, std::less<>> palettes_;
};

struct CorollaryUpdate {
    enum class Target { filter_widget, encoding_shelf };
    Target target = Target::filter_widget;
    std::optional<FilterWidgetModel> widget;
    std::optional<ShelfState> shelf;
};

// MVS-side state to surface after a committed VbD change; empty for MVS
// changes, whose widgets the user is already looking at.
std::vector<CorollaryUpdate> corollary_state(const SpecChange& change, Provenance paradigm,
                                             const VisSpec& committed, const Dataset& dataset);

}  // namespace vizblend
