#include "vizblend/session.hpp"

#include "vizblend/error.hpp"

#include <algorithm>

namespace vizblend {

std::string_view to_string(Event::Type t) {
    return t == Event::Type::spec_changed ? "spec_changed" : "recommendations_changed";
}

void EventQueue::push(Event e) {
    {
        std::lock_guard lock(mu_);
        if (closed_) return;
        events_.push_back(e);
    }
    cv_.notify_all();
}

std::optional<Event> EventQueue::pop(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return !events_.empty() || closed_; });
    if (events_.empty()) return std::nullopt;
    Event e = events_.front();
    events_.pop_front();
    return e;
}

void EventQueue::close() {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool EventQueue::closed() const {
    std::lock_guard lock(mu_);
    return closed_;
}

std::shared_ptr<EventQueue> EventHub::subscribe() {
    auto q = std::make_shared<EventQueue>();
    std::lock_guard lock(mu_);
    queues_.push_back(q);
    return q;
}

void EventHub::publish(const Event& e) {
    std::lock_guard lock(mu_);
    std::erase_if(queues_, [](const auto& w) { return w.expired(); });
    for (auto& w : queues_) {
        if (auto q = w.lock()) q->push(e);
    }
}

void EventHub::close_all() {
    std::lock_guard lock(mu_);
    for (auto& w : queues_) {
        if (auto q = w.lock()) q->close();
    }
    queues_.clear();
}

Session::Session(std::string id, std::shared_ptr<const Dataset> dataset, VisSpec initial)
    : id_(std::move(id)),
      dataset_(std::move(dataset)),
      spec_(initial),
      log_(std::move(initial)),
      book_(id_ + ".") {}

VisSpec Session::spec() const {
    std::shared_lock lock(mu_);
    return spec_;
}

std::int64_t Session::revision() const {
    std::shared_lock lock(mu_);
    return spec_.revision;
}

ViewModel Session::view() const {
    std::shared_lock lock(mu_);
    return render(spec_, *dataset_);
}

std::vector<FilterWidgetModel> Session::filters() const {
    std::shared_lock lock(mu_);
    return filter_widgets(spec_, *dataset_);
}

std::vector<ShelfState> Session::shelves() const {
    std::shared_lock lock(mu_);
    return encoding_shelves(spec_);
}

RecommendationSet Session::recommendations() const {
    std::shared_lock lock(mu_);
    return book_.current();
}

CommandLog Session::log() const {
    std::shared_lock lock(mu_);
    return log_;
}

PaletteMemory Session::palettes() const {
    std::shared_lock lock(mu_);
    return palettes_;
}

void Session::set_weights(const RankingWeights& w) {
    std::unique_lock lock(mu_);
    weights_ = w;
}

void Session::check_expected(Expected expected) const {
    if (expected && *expected != spec_.revision) {
        throw Error(ErrorCode::stale_revision, "expected revision " + std::to_string(*expected) +
                                                   ", session is at " +
                                                   std::to_string(spec_.revision));
    }
}

std::optional<ViewModel> Session::try_view() const {
    if (!spec_.binding(Channel::x) || !spec_.binding(Channel::y)) return std::nullopt;
    if (!validate(spec_, *dataset_).empty()) return std::nullopt;
    return render(spec_, *dataset_);
}

CommitResult Session::result_for(const SpecChange& change, Provenance paradigm) const {
    CommitResult r;
    r.spec = spec_;
    r.view = try_view();
    r.corollary = corollary_state(change, paradigm, spec_, *dataset_);
    return r;
}

CommitResult Session::commit(const SpecChange& change, Provenance paradigm, bool record) {
    VisSpec next = apply_change(spec_, change, *dataset_);
    if (record) log_.record({next.revision, change, paradigm, inverse_change(spec_, change)});
    spec_ = std::move(next);
    const bool had_pending = std::any_of(
        book_.current().recommendations.begin(), book_.current().recommendations.end(),
        [](const Recommendation& r) { return r.state == RecommendationState::pending; });
    book_.expire_stale(spec_.revision);
    events_.publish({Event::Type::spec_changed, spec_.revision});
    if (had_pending) events_.publish({Event::Type::recommendations_changed, spec_.revision});
    return result_for(change, paradigm);
}

CommitResult Session::set_axis(Channel channel, std::string_view attribute, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    return commit(mvs::set_axis(spec_, *dataset_, channel, attribute), Provenance::mvs, true);
}

CommitResult Session::set_mark(Channel channel, std::string_view attribute, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    return commit(mvs::set_mark_encoding(spec_, *dataset_, channel, attribute, palettes_),
                  Provenance::mvs, true);
}

CommitResult Session::switch_vis_type(VisType target, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    auto plan = mvs::switch_vis_type(spec_, *dataset_, target);
    CommitResult r = commit(plan.change, Provenance::mvs, true);
    r.dropped = std::move(plan.dropped);
    return r;
}

CommitResult Session::add_filter(std::string_view attribute, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    dataset_->attribute_index(attribute);
    if (const FilterRule* existing = mvs::attribute_rule(spec_, attribute)) {
        CommitResult r = result_for(SpecChange{}, Provenance::mvs);
        r.corollary.clear();
        r.widget = widget_for(*existing, *dataset_);
        r.committed = false;
        return r;
    }
    const SpecChange change = mvs::add_attribute_filter(spec_, *dataset_, attribute);
    CommitResult r = commit(change, Provenance::mvs, true);
    r.widget = widget_for(spec_.filters.back(), *dataset_);
    return r;
}

CommitResult Session::update_filter(std::string_view rule_id, const WidgetSelection& selection,
                                    Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    CommitResult r = commit(mvs::update_filter_widget(spec_, *dataset_, rule_id, selection),
                            Provenance::mvs, true);
    r.widget = widget_for(*spec_.find_filter(rule_id), *dataset_);
    return r;
}

CommitResult Session::sort(SortDirection direction, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    return commit(mvs::sort_bars(spec_, direction), Provenance::mvs, true);
}

CommitResult Session::remove_encoding(Channel channel, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    return commit(mvs::remove_encoding(spec_, channel), Provenance::mvs, true);
}

CommitResult Session::remove_filter(std::string_view rule_id, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    return commit(mvs::remove_filter(spec_, rule_id), Provenance::mvs, true);
}

CommitResult Session::undo(Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    SpecChange inverse = log_.undo_target().inverse;
    inverse.base_revision = spec_.revision;
    CommitResult r = commit(inverse, Provenance::mvs, false);
    log_.step_back();
    return r;
}

CommitResult Session::redo(Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    SpecChange change = log_.redo_target().change;
    change.base_revision = spec_.revision;
    CommitResult r = commit(change, Provenance::mvs, false);
    log_.step_forward();
    return r;
}

RecommendationSet Session::demonstrate(const Demonstration& demo) {
    std::unique_lock lock(mu_);
    auto candidates = infer_candidates(*dataset_, spec_, demo, weights_);
    RecommendationSet set = book_.publish(std::move(candidates), spec_.revision);
    events_.publish({Event::Type::recommendations_changed, spec_.revision});
    return set;
}

ViewModel Session::preview(std::string_view rec_id) const {
    std::shared_lock lock(mu_);
    const Recommendation& rec = book_.require_pending(rec_id, spec_.revision);
    return render(apply_change(spec_, rec.candidate.change, *dataset_), *dataset_);
}

CommitResult Session::accept(std::string_view rec_id, Expected expected) {
    std::unique_lock lock(mu_);
    check_expected(expected);
    const Recommendation& rec = book_.require_pending(rec_id, spec_.revision);
    const SpecChange change = rec.candidate.change;
    // Validate before touching lifecycle state so a failed accept changes nothing.
    apply_change(spec_, change, *dataset_);
    book_.mark_accepted(rec_id);
    if (const auto* set = std::get_if<change::SetBinding>(&change.action)) {
        if (set->binding.palette) palettes_.remember(set->binding.attribute, *set->binding.palette);
    }
    CommitResult r = commit(change, Provenance::vbd, true);
    events_.publish({Event::Type::recommendations_changed, spec_.revision});
    return r;
}

void Session::reject(std::string_view rec_id) {
    std::unique_lock lock(mu_);
    book_.reject(rec_id);
    events_.publish({Event::Type::recommendations_changed, spec_.revision});
}

std::size_t Session::reject_all() {
    std::unique_lock lock(mu_);
    const std::size_t n = book_.reject_all();
    if (n > 0) events_.publish({Event::Type::recommendations_changed, spec_.revision});
    return n;
}

SessionSnapshot Session::snapshot() const {
    std::shared_lock lock(mu_);
    SessionSnapshot s;
    s.session_id = id_;
    s.dataset_id = dataset_->id();
    s.dataset_path = dataset_path_;
    s.initial = log_.initial();
    s.entries = log_.entries();
    s.cursor = log_.cursor();
    s.revision = spec_.revision;
    s.palettes = palettes_;
    return s;
}

std::unique_ptr<Session> Session::from_snapshot(const SessionSnapshot& snap,
                                                std::shared_ptr<const Dataset> dataset) {
    if (dataset->id() != snap.dataset_id) {
        throw Error(ErrorCode::invalid_request, "snapshot was taken on dataset '" +
                                                    snap.dataset_id + "', got '" + dataset->id() +
                                                    "'");
    }
    auto s = std::make_unique<Session>(snap.session_id, std::move(dataset), snap.initial);
    s->log_.restore(snap.initial, snap.entries, snap.cursor);
    VisSpec spec = s->log_.replay(*s->dataset_);
    if (snap.revision < spec.revision) {
        throw Error(ErrorCode::invalid_request, "snapshot revision is behind its own log");
    }
    spec.revision = snap.revision;
    s->spec_ = std::move(spec);
    s->palettes_ = snap.palettes;
    s->dataset_path_ = snap.dataset_path;
    return s;
}

std::string session_of_recommendation(std::string_view rec_id) {
    const auto dot = rec_id.rfind(".r");
    if (dot == std::string_view::npos || dot == 0) {
        throw Error(ErrorCode::unknown_recommendation,
                    "unknown recommendation " + std::string(rec_id));
    }
    return std::string(rec_id.substr(0, dot));
}

std::shared_ptr<Session> SessionRegistry::create(std::shared_ptr<const Dataset> dataset) {
    std::lock_guard lock(mu_);
    std::string id;
    do {
        id = "s" + std::to_string(next_++);
    } while (sessions_.count(id));
    auto s = std::make_shared<Session>(id, std::move(dataset));
    sessions_.emplace(id, s);
    return s;
}

std::shared_ptr<Session> SessionRegistry::adopt(std::unique_ptr<Session> session) {
    std::lock_guard lock(mu_);
    std::shared_ptr<Session> s(std::move(session));
    if (!sessions_.emplace(s->id(), s).second) {
        throw Error(ErrorCode::invalid_request, "session " + s->id() + " already exists");
    }
    return s;
}

std::string SessionRegistry::available_id(std::string_view preferred) {
    std::lock_guard lock(mu_);
    if (!preferred.empty() && !sessions_.count(preferred)) return std::string(preferred);
    std::string id;
    do {
        id = "s" + std::to_string(next_++);
    } while (sessions_.count(id));
    return id;
}

std::shared_ptr<Session> SessionRegistry::get(std::string_view id) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::unknown_session, "unknown session " + std::string(id));
    }
    return it->second;
}

bool SessionRegistry::erase(std::string_view id) {
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(mu_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        s = it->second;
        sessions_.erase(it);
    }
    s->close_streams();
    return true;
}

std::size_t SessionRegistry::size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

}  // namespace vizblend
