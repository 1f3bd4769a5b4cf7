#pragma once

#include "vizblend/data.hpp"
#include "vizblend/history.hpp"
#include "vizblend/intent.hpp"
#include "vizblend/mvs.hpp"
#include "vizblend/recommend.hpp"
#include "vizblend/render.hpp"
#include "vizblend/spec.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace vizblend {

struct Event {
    enum class Type { spec_changed, recommendations_changed };
    Type type = Type::spec_changed;
    std::int64_t revision = 0;
    bool operator==(const Event&) const = default;
};

std::string_view to_string(Event::Type t);

// One subscriber's ordered event queue.
class EventQueue {
public:
    void push(Event e);
    // nullopt on timeout or after close() once drained.
    std::optional<Event> pop(std::chrono::milliseconds timeout);
    void close();
    bool closed() const;

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Event> events_;
    bool closed_ = false;
};

class EventHub {
public:
    std::shared_ptr<EventQueue> subscribe();
    void publish(const Event& e);
    void close_all();

private:
    std::mutex mu_;
    std::vector<std::weak_ptr<EventQueue>> queues_;
};

struct CommitResult {
    VisSpec spec;
    std::optional<ViewModel> view;  // absent while the spec cannot render (e.g. X unbound)
    std::vector<ChannelBinding> dropped;
    std::vector<CorollaryUpdate> corollary;
    std::optional<FilterWidgetModel> widget;  // add_filter / update_filter
    bool committed = true;                    // false when add_filter found an existing widget
};

struct SessionSnapshot {
    std::string session_id;
    std::string dataset_id;
    std::optional<std::string> dataset_path;
    VisSpec initial;
    std::vector<LogEntry> entries;
    std::size_t cursor = 0;
    std::int64_t revision = 0;
    PaletteMemory palettes;
};

// Single-writer session state. Writers serialize on an exclusive lock; reads
// (spec, view, preview, widgets) share it.
class Session {
public:
    Session(std::string id, std::shared_ptr<const Dataset> dataset, VisSpec initial = {});

    const std::string& id() const { return id_; }
    const Dataset& dataset() const { return *dataset_; }
    std::shared_ptr<const Dataset> dataset_ptr() const { return dataset_; }
    void set_dataset_path(std::string path) { dataset_path_ = std::move(path); }

    VisSpec spec() const;
    std::int64_t revision() const;
    ViewModel view() const;  // throws MissingAxes / InvalidSpec
    std::vector<FilterWidgetModel> filters() const;
    std::vector<ShelfState> shelves() const;
    RecommendationSet recommendations() const;
    CommandLog log() const;
    PaletteMemory palettes() const;

    // MVS operations. `expected` guards against concurrent edits (StaleRevision).
    using Expected = std::optional<std::int64_t>;
    CommitResult set_axis(Channel channel, std::string_view attribute, Expected expected = {});
    CommitResult set_mark(Channel channel, std::string_view attribute, Expected expected = {});
    CommitResult switch_vis_type(VisType target, Expected expected = {});
    CommitResult add_filter(std::string_view attribute, Expected expected = {});
    CommitResult update_filter(std::string_view rule_id, const WidgetSelection& selection,
                               Expected expected = {});
    CommitResult sort(SortDirection direction, Expected expected = {});
    CommitResult remove_encoding(Channel channel, Expected expected = {});
    CommitResult remove_filter(std::string_view rule_id, Expected expected = {});
    CommitResult undo(Expected expected = {});
    CommitResult redo(Expected expected = {});

    // VbD. Errors leave the pending set untouched.
    RecommendationSet demonstrate(const Demonstration& demo);
    ViewModel preview(std::string_view rec_id) const;
    CommitResult accept(std::string_view rec_id, Expected expected = {});
    void reject(std::string_view rec_id);
    std::size_t reject_all();

    void set_weights(const RankingWeights& w);

    std::shared_ptr<EventQueue> subscribe() { return events_.subscribe(); }
    void close_streams() { events_.close_all(); }

    SessionSnapshot snapshot() const;
    static std::unique_ptr<Session> from_snapshot(const SessionSnapshot& snap,
                                                  std::shared_ptr<const Dataset> dataset);

private:
    void check_expected(Expected expected) const;
    CommitResult commit(const SpecChange& change, Provenance paradigm, bool record);
    CommitResult result_for(const SpecChange& change, Provenance paradigm) const;
    std::optional<ViewModel> try_view() const;

    std::string id_;
    std::shared_ptr<const Dataset> dataset_;
    std::optional<std::string> dataset_path_;
    mutable std::shared_mutex mu_;
    VisSpec spec_;
    CommandLog log_;
    PaletteMemory palettes_;
    RecommendationBook book_;
    RankingWeights weights_;
    EventHub events_;
};

// Session id from a "<session>.r<n>" recommendation id.
std::string session_of_recommendation(std::string_view rec_id);

class SessionRegistry {
public:
    std::shared_ptr<Session> create(std::shared_ptr<const Dataset> dataset);
    std::shared_ptr<Session> adopt(std::unique_ptr<Session> session);
    // `preferred` when no live session uses it, otherwise a fresh "s<n>".
    std::string available_id(std::string_view preferred);
    // Throws UnknownSession.
    std::shared_ptr<Session> get(std::string_view id) const;
    bool erase(std::string_view id);
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
    std::uint64_t next_ = 1;
};

}  // namespace vizblend
