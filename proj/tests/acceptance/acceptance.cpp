// Prints one PASS/FAIL line per primary acceptance criterion; exits 1 on any FAIL.

#include "fixtures.hpp"
#include "gen.hpp"
#include "keys.hpp"
#include "oracle.hpp"

#include "vizblend/api.hpp"
#include "vizblend/json_io.hpp"
#include "vizblend/script.hpp"
#include "vizblend/service.hpp"
#include "vizblend/session.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace vizblend;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, const std::function<Outcome()>& run) {
    Outcome o;
    try {
        o = run();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << name << ": " << o.detail << std::endl;
}

// Spec JSON without revision/provenance (and optionally palettes).
Json strip(Json j, bool palettes) {
    if (j.is_object()) {
        j.erase("revision");
        j.erase("provenance");
        if (palettes) j.erase("palette");
        for (auto& [k, v] : j.items()) v = strip(v, palettes);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip(v, palettes);
    }
    return j;
}

std::string modulo(const VisSpec& s, bool palettes = false) { return strip(to_json(s), palettes).dump(); }

// ---------------------------------------------------------------- worlds

struct World {
    std::string text;
    std::shared_ptr<const Dataset> data;
    std::vector<std::string> quantitative;
    std::vector<std::string> categorical_like;
};

World make_world(std::string text) {
    World w;
    w.data = std::make_shared<const Dataset>(load_csv_text(text));
    w.text = std::move(text);
    for (const auto& a : w.data->attributes()) {
        if (a.is_quantitative()) w.quantitative.push_back(a.name);
        if (a.is_categorical_like()) w.categorical_like.push_back(a.name);
    }
    return w;
}

World random_world(std::mt19937& rng) {
    if (rng() % 10 < 3) return make_world(fixtures::mini8_text());
    gen::TableShape shape;
    shape.rows = 8 + rng() % 23;
    shape.categorical = 1 + rng() % 2;
    shape.discrete = rng() % 2;
    shape.continuous = 2 + rng() % 2;
    shape.missing = rng() % 3 == 0 ? 0.05 : 0.0;
    return make_world(gen::csv(shape, rng));
}

template <class Range>
const auto& pick(const Range& v, std::mt19937& rng) {
    return v[rng() % v.size()];
}

Json op(const std::string& name, Json params = Json::object()) {
    params["do"] = name;
    return params;
}

// Setup ops: a scatterplot or bar chart, sometimes narrowed by an MVS filter.
Json random_setup(const World& w, std::mt19937& rng, bool bars) {
    Json ops = Json::array();
    if (bars) {
        ops.push_back(op("switch", {{"vis_type", "BarChart"}}));
        ops.push_back(op("set_axis", {{"channel", "X"}, {"attribute", pick(w.categorical_like, rng)}}));
    } else {
        ops.push_back(op("set_axis", {{"channel", "X"}, {"attribute", pick(w.quantitative, rng)}}));
    }
    ops.push_back(op("set_axis", {{"channel", "Y"}, {"attribute", pick(w.quantitative, rng)}}));
    if (rng() % 3 == 0) {
        const std::string attr = pick(w.categorical_like, rng);
        const Attribute& a = w.data->attribute(attr);
        Json checked = Json::array();
        for (const auto& c : a.categories) {
            if (rng() % 4 != 0) checked.push_back(c);
        }
        if (checked.empty()) checked.push_back(a.categories.front());
        ops.push_back(op("filter", {{"attribute", attr}}));
        ops.push_back(op("update_filter", {{"rule_id", "f1"}, {"checked", checked}}));
    }
    return ops;
}

std::unique_ptr<Session> session_with(const World& w, const Json& setup) {
    auto s = std::make_unique<Session>("s1", w.data);
    for (const auto& o : setup) run_op(*s, o.at("do").get<std::string>(), o);
    return s;
}

std::vector<RowId> point_rows(const Session& s) {
    std::vector<RowId> out;
    for (const auto& m : s.view().marks) {
        if (m.row) out.push_back(*m.row);
    }
    return out;
}

std::vector<RowId> sample(std::vector<RowId> pool, std::size_t n, std::mt19937& rng) {
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(n, pool.size()));
    std::sort(pool.begin(), pool.end());
    return pool;
}

Selection sel(std::vector<RowId> rows) { return {std::move(rows), SelectionOrigin::lasso}; }

// A demonstration that fits the session's current chart, or nullopt.
std::optional<Demonstration> random_demo(const Session& s, std::mt19937& rng) {
    const VisSpec spec = s.spec();
    if (!spec.binding(Channel::x) || !spec.binding(Channel::y)) return std::nullopt;
    if (!validate(spec, s.dataset()).empty()) return std::nullopt;
    const ViewModel v = s.view();
    if (v.marks.empty()) return std::nullopt;
    if (is_bar_type(spec.vis_type) && rng() % 2 == 0) {
        return DragBarDemo{pick(v.bar_order, rng), rng() % 2 ? BarExtreme::extreme_right : BarExtreme::extreme_left};
    }
    std::vector<RowId> rows;
    if (spec.vis_type == VisType::scatterplot) {
        rows = point_rows(s);
    } else {
        const auto mask = visible_mask(spec, s.dataset());
        const auto xa = s.dataset().attribute_index(spec.binding(Channel::x)->attribute);
        const auto ya = s.dataset().attribute_index(spec.binding(Channel::y)->attribute);
        for (RowId r = 0; r < mask.size(); ++r) {
            if (mask[r] && !s.dataset().is_missing(xa, r) && !s.dataset().is_missing(ya, r)) rows.push_back(r);
        }
    }
    if (rows.size() < 2) return std::nullopt;
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 0 || spec.vis_type != VisType::scatterplot) {
        if (spec.vis_type == VisType::bar_chart) {
            // Groups must cover different bars.
            const auto xa = s.dataset().attribute_index(spec.binding(Channel::x)->attribute);
            std::map<std::int32_t, std::vector<RowId>> by_bar;
            for (RowId r : rows) by_bar[s.dataset().category_code(xa, r)].push_back(r);
            if (by_bar.size() < 2) return std::nullopt;
            std::vector<std::vector<RowId>> bars;
            for (auto& [code, rs] : by_bar) bars.push_back(rs);
            std::shuffle(bars.begin(), bars.end(), rng);
            return RecolorDemo{{{"#e41a1c", sel(sample(bars[0], 1 + rng() % 2, rng))},
                                {"#377eb8", sel(sample(bars[1], 1 + rng() % 2, rng))}}};
        }
        const auto picked = sample(rows, 2 + rng() % 4, rng);
        const std::size_t cut = 1 + rng() % (picked.size() - 1);
        return RecolorDemo{{{"#e41a1c", sel({picked.begin(), picked.begin() + cut})},
                            {"#377eb8", sel({picked.begin() + cut, picked.end()})}}};
    }
    if (kind == 1) {
        ResizeDemo d;
        const auto picked = sample(rows, 2 + rng() % 3, rng);
        for (std::size_t i = 0; i < picked.size(); ++i) {
            d.points.push_back({picked[i], i == 0 ? 0.2 : (rng() % 2 ? 0.5 : 0.9)});
        }
        return d;
    }
    return DragOutDemo{sel(sample(rows, 1 + rng() % 4, rng))};
}

// ------------------------------------------------------------ criterion 1

Outcome walkthrough() {
    const auto t0 = Clock::now();
    Engine engine(EngineOptions{std::filesystem::path(fixtures::source_path("data"))});
    InProcessClient client(engine);
    const Json script = parse_script(fixtures::read_text(fixtures::source_path("scripts/walkthrough.json")));
    const ScriptResult r = run_script(client, script, {{"dataset", "cars"}});
    const Json golden =
        parse_json(fixtures::read_text(fixtures::source_path("tests/golden/walkthrough.assert.json")));
    const auto diffs = check_assertions(r, golden);
    const double secs = seconds_since(t0);
    std::size_t passed = 0;
    std::string first_failure;
    for (const auto& st : r.steps) {
        if (st.ok) ++passed;
        else if (first_failure.empty()) first_failure = st.action + ": " + st.message;
    }
    std::ostringstream d;
    d << passed << "/" << r.steps.size() << " steps, golden " << (diffs.empty() ? "match" : "MISMATCH")
      << ", " << secs << " s";
    if (!first_failure.empty()) d << "; " << first_failure;
    return {r.ok && diffs.empty() && secs < 5.0, d.str()};
}

// ------------------------------------------------------------ criterion 2

struct Tally {
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::string first;
    void check(bool ok, const std::string& what) {
        ++cases;
        if (!ok) {
            ++mismatches;
            if (first.empty()) first = what;
        }
    }
};

std::vector<std::size_t> bits(unsigned mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 8; ++i) {
        if (mask & (1u << i)) out.push_back(i);
    }
    return out;
}

std::string describe(const std::set<std::string>& s) {
    std::string out = "{";
    for (const auto& v : s) out += v + " ";
    return out + "}";
}

Outcome oracle_sweep() {
    const auto t0 = Clock::now();
    const auto& d = *fixtures::mini8();
    const auto t = oracle::parse(fixtures::mini8_text());
    using fixtures::chart;
    std::map<std::string, Tally> tallies;

    // Recolor: every pair of disjoint non-empty groups with at most four points.
    const VisSpec stacked = fixtures::bind(chart(VisType::stacked_bar_chart, "Cylinders", "MPG", d),
                                           Channel::color, "Origin", d);
    const std::vector<VisSpec> recolor_specs{chart(VisType::scatterplot, "Horsepower", "MPG", d),
                                             chart(VisType::scatterplot, "Displacement", "Cylinders", d),
                                             chart(VisType::bar_chart, "Cylinders", "MPG", d),
                                             chart(VisType::bar_chart, "Origin", "Horsepower", d), stacked};
    for (const auto& spec : recolor_specs) {
        const bool on_bars = spec.vis_type == VisType::bar_chart;
        const std::size_t xcol = t.col(spec.binding(Channel::x)->attribute);
        for (unsigned a = 1; a < 256; ++a) {
            for (unsigned b = 1; b < 256; ++b) {
                if ((a & b) || std::popcount(a) + std::popcount(b) > 4) continue;
                if (std::countr_zero(a) > std::countr_zero(b)) continue;
                const auto ga = bits(a), gb = bits(b);
                const RecolorDemo demo{{{"#e41a1c", sel({ga.begin(), ga.end()})},
                                        {"#377eb8", sel({gb.begin(), gb.end()})}}};
                const auto want = oracle::color_attributes(t, spec, {ga, gb});
                bool shared_bar = false;
                if (on_bars) {
                    std::set<std::string> cats;
                    for (auto r : ga) cats.insert(oracle::label(t, r, xcol));
                    for (auto r : gb) shared_bar |= cats.count(oracle::label(t, r, xcol)) > 0;
                }
                std::ostringstream what;
                what << "recolor " << a << "/" << b << " on " << to_string(spec.vis_type);
                if (shared_bar) {
                    // Groups on one bar are contradictory: the engine refuses, the oracle finds nothing.
                    bool refused = false;
                    try {
                        infer_color_candidates(d, spec, demo);
                    } catch (const Error& e) {
                        refused = e.code() == ErrorCode::invalid_demonstration;
                    }
                    tallies["recolor"].check(refused && want.empty(), what.str());
                    continue;
                }
                const auto got = keys::attributes(infer_color_candidates(d, spec, demo));
                tallies["recolor"].check(got == want, what.str() + " got " + describe(got) + " want " + describe(want));
            }
        }
    }

    // Resize: all ordered pairs and all triples over three size levels.
    const std::vector<VisSpec> size_specs{chart(VisType::scatterplot, "Horsepower", "MPG", d),
                                          chart(VisType::scatterplot, "Displacement", "Cylinders", d)};
    const double levels[] = {0.2, 0.5, 0.9};
    for (const auto& spec : size_specs) {
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = 0; j < 8; ++j) {
                if (i == j) continue;
                const std::vector<std::pair<std::size_t, double>> sized{{i, 0.3}, {j, 0.9}};
                const auto got = keys::attributes(infer_size_candidates(d, spec, {{{i, 0.3}, {j, 0.9}}}));
                tallies["resize"].check(got == oracle::size_attributes(t, sized),
                                        "resize " + std::to_string(i) + "<" + std::to_string(j));
            }
        }
        for (unsigned m = 0; m < 256; ++m) {
            if (std::popcount(m) != 3) continue;
            const auto rows = bits(m);
            for (int code = 0; code < 27; ++code) {
                const double s[] = {levels[code % 3], levels[code / 3 % 3], levels[code / 9]};
                if (s[0] == s[1] && s[1] == s[2]) continue;
                ResizeDemo demo;
                std::vector<std::pair<std::size_t, double>> sized;
                for (int k = 0; k < 3; ++k) {
                    demo.points.push_back({rows[k], s[k]});
                    sized.emplace_back(rows[k], s[k]);
                }
                const auto got = keys::attributes(infer_size_candidates(d, spec, demo));
                tallies["resize"].check(got == oracle::size_attributes(t, sized),
                                        "resize triple " + std::to_string(m) + "/" + std::to_string(code));
            }
        }
    }

    // Drag-out: every selection of one to four visible points.
    std::vector<VisSpec> filter_specs{chart(VisType::scatterplot, "Horsepower", "MPG", d),
                                      chart(VisType::scatterplot, "Displacement", "Cylinders", d),
                                      chart(VisType::scatterplot, "MPG", "Horsepower", d)};
    filter_specs[2] = fixtures::with(
        filter_specs[2], change::AddFilter{{"f1", ValueSetFilter{"Origin", {"J", "U"}}, Provenance::mvs}, std::nullopt}, d);
    filter_specs.push_back(fixtures::with(chart(VisType::scatterplot, "Horsepower", "Displacement", d),
                                          change::AddFilter{{"f1", PointSetFilter{{3}}, Provenance::mvs}, std::nullopt},
                                          d));
    filter_specs.push_back(fixtures::with(chart(VisType::scatterplot, "Cylinders", "MPG", d),
                                          change::AddFilter{{"f1", RangeFilter{"MPG", 14, 20, true}, Provenance::mvs},
                                                            std::nullopt},
                                          d));
    for (const auto& spec : filter_specs) {
        const auto vis = oracle::visible(t, spec);
        for (unsigned m = 1; m < 256; ++m) {
            if (std::popcount(m) > 4) continue;
            const auto rows = bits(m);
            if (std::any_of(rows.begin(), rows.end(), [&](std::size_t r) { return !vis[r]; })) continue;
            const auto got = keys::filters(infer_filter_candidates(d, spec, {sel({rows.begin(), rows.end()})}));
            const auto want = oracle::filter_keys(t, spec, rows);
            tallies["drag-out"].check(got == want, "drag-out " + std::to_string(m) + " got " + describe(got) +
                                                       " want " + describe(want));
        }
    }

    // Bar drags: every category to both extremes.
    std::vector<VisSpec> bar_specs{chart(VisType::bar_chart, "Cylinders", "MPG", d),
                                   chart(VisType::bar_chart, "Origin", "MPG", d),
                                   chart(VisType::bar_chart, "Cylinders", "Horsepower", d),
                                   chart(VisType::bar_chart, "Origin", "Displacement", d), stacked};
    bar_specs.push_back(fixtures::with(bar_specs[1], change::SetSort{{"Horsepower", SortDirection::descending}}, d));
    for (const auto& spec : bar_specs) {
        for (const auto& b : oracle::bars(t, spec)) {
            for (bool right : {true, false}) {
                const auto got = keys::sorts(infer_sort_candidates(
                    d, spec, {b.category, right ? BarExtreme::extreme_right : BarExtreme::extreme_left}));
                tallies["bar drag"].check(got == oracle::sort_keys(t, spec, b.category, right),
                                          "drag " + b.category + (right ? " right" : " left"));
            }
        }
    }

    const double secs = seconds_since(t0);
    std::ostringstream out;
    std::size_t total = 0, bad = 0;
    std::string first;
    for (const auto& [name, tally] : tallies) {
        out << name << " " << tally.cases - tally.mismatches << "/" << tally.cases << ", ";
        total += tally.cases;
        bad += tally.mismatches;
        if (first.empty()) first = tally.first;
    }
    out << secs << " s";
    if (!first.empty()) out << "; first mismatch: " << first;
    return {bad == 0 && total > 0 && secs < 60.0, out.str()};
}

// ------------------------------------------------------------ criterion 3

Outcome paradigm_equivalence() {
    std::mt19937 rng(20240601);
    std::map<std::string, std::size_t> counts;
    std::size_t cases = 0, mismatches = 0, attempts = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        ++mismatches;
        if (first.empty()) first = what;
    };
    while (cases < 1000 && attempts < 200000) {
        ++attempts;
        const World w = random_world(rng);
        const int kind = static_cast<int>(cases % 3);
        if (w.quantitative.empty() || w.categorical_like.empty()) continue;
        const Json setup = random_setup(w, rng, kind == 2);
        std::unique_ptr<Session> a, b;
        try {
            a = session_with(w, setup);
            b = session_with(w, setup);
        } catch (const Error&) {
            continue;  // e.g. a filter leaving nothing to demonstrate on
        }
        const auto rows = kind == 2 ? std::vector<RowId>{} : point_rows(*a);
        Demonstration demo;
        if (kind == 0) {
            if (rows.size() < 2) continue;
            if (rng() % 2) {
                const auto picked = sample(rows, 2 + rng() % 4, rng);
                const std::size_t cut = 1 + rng() % (picked.size() - 1);
                demo = RecolorDemo{{{"#e41a1c", sel({picked.begin(), picked.begin() + cut})},
                                    {"#377eb8", sel({picked.begin() + cut, picked.end()})}}};
            } else {
                ResizeDemo r;
                const auto picked = sample(rows, 2 + rng() % 3, rng);
                for (std::size_t i = 0; i < picked.size(); ++i) r.points.push_back({picked[i], i == 0 ? 0.2 : 0.8});
                demo = r;
            }
        } else if (kind == 1) {
            if (rows.empty()) continue;
            demo = DragOutDemo{sel(sample(rows, 1 + rng() % 4, rng))};
        } else {
            const auto order = a->view().bar_order;
            if (order.empty()) continue;
            demo = DragBarDemo{pick(order, rng), rng() % 2 ? BarExtreme::extreme_right : BarExtreme::extreme_left};
        }

        // Recommendations with an MVS counterpart.
        const VisSpec before = a->spec();
        std::vector<Recommendation> usable;
        for (const auto& r : a->demonstrate(demo).recommendations) {
            const auto& act = r.candidate.change.action;
            if (const auto* add = std::get_if<change::AddFilter>(&act)) {
                const std::string attr = add->rule.attribute();
                if (attr.empty() || mvs::attribute_rule(before, attr)) continue;
                // The manual widget must take the same rule form (a discrete attribute gets
                // checkboxes, so a VbD range on it has no MVS counterpart).
                const FilterRule initial = mvs::initial_attribute_rule(a->dataset(), attr, "probe");
                if (initial.form.index() != add->rule.form.index()) continue;
            } else if (const auto* s = std::get_if<change::SetSort>(&act)) {
                if (s->sort.by_attribute != before.binding(Channel::y)->attribute) continue;
            }
            usable.push_back(r);
        }
        if (usable.empty()) continue;
        const Recommendation rec = pick(usable, rng);
        a->accept(rec.rec_id);

        const auto& act = rec.candidate.change.action;
        std::string label;
        bool palettes = false;
        if (const auto* set = std::get_if<change::SetBinding>(&act)) {
            label = set->binding.channel == Channel::color ? "O_mark color" : "O_mark size";
            b->set_mark(set->binding.channel, set->binding.attribute);
            if (set->binding.channel == Channel::color) {
                // A fresh session has no remembered palette; compare the binding itself, then check
                // the accepting session hands the palette to the manual path.
                palettes = true;
                Session& s = *a;
                const std::string accepted = modulo(s.spec());
                s.remove_encoding(Channel::color);
                s.set_mark(Channel::color, set->binding.attribute);
                if (modulo(s.spec()) != accepted) fail("palette transfer for " + set->binding.attribute);
                s.undo();
                s.undo();
            }
        } else if (const auto* add = std::get_if<change::AddFilter>(&act)) {
            label = "O_filter";
            const auto widget = b->add_filter(add->rule.attribute()).widget;
            if (const auto* range = std::get_if<RangeFilter>(&add->rule.form)) {
                b->update_filter(widget->rule_id, RangeSelection{range->lo, range->hi, range->exclude});
            } else {
                b->update_filter(widget->rule_id,
                                 CheckboxSelection{std::get<ValueSetFilter>(add->rule.form).included});
            }
        } else {
            label = "O_sort";
            b->sort(std::get<change::SetSort>(act).sort.direction);
        }
        ++counts[label];
        ++cases;
        if (modulo(a->spec(), palettes) != modulo(b->spec(), palettes)) {
            fail(label + ": " + modulo(a->spec()) + " vs " + modulo(b->spec()));
        }
    }
    std::ostringstream out;
    out << cases << " cases (";
    for (const auto& [k, v] : counts) out << (k == counts.begin()->first ? "" : ", ") << k << " " << v;
    out << "), " << mismatches << " mismatches";
    if (!first.empty()) out << "; first: " << first;
    return {cases == 1000 && mismatches == 0, out.str()};
}

// ------------------------------------------------------------ criterion 4

std::string recommendation_list(const RecommendationSet& set) {
    Json out = Json::array();
    for (const auto& r : set.recommendations) {
        Json j = to_json(r);
        j.erase("rec_id");
        out.push_back(j);
    }
    return out.dump();
}

Outcome purity_and_determinism() {
    std::mt19937 rng(99);
    std::size_t previews = 0, generates = 0, violations = 0, attempts = 0;
    std::string first;
    auto violation = [&](const std::string& what) {
        ++violations;
        if (first.empty()) first = what;
    };
    while ((previews < 1000 || generates < 1000) && attempts < 100000) {
        ++attempts;
        const World w = random_world(rng);
        if (w.quantitative.empty() || w.categorical_like.empty()) continue;
        const Json setup = random_setup(w, rng, rng() % 3 == 0);
        std::unique_ptr<Session> s, twin;
        try {
            s = session_with(w, setup);
            twin = session_with(w, setup);
        } catch (const Error&) {
            continue;
        }
        const auto demo = random_demo(*s, rng);
        if (!demo) continue;
        RecommendationSet first_set;
        try {
            first_set = s->demonstrate(*demo);
        } catch (const Error&) {
            continue;
        }
        const std::string again = recommendation_list(s->demonstrate(*demo));
        const std::string other = recommendation_list(twin->demonstrate(*demo));
        ++generates;
        if (recommendation_list(first_set) != again || again != other) violation("generate differs");
        const auto current = s->recommendations();
        if (current.recommendations.empty()) continue;
        const std::string spec_before = canonical_spec(s->spec());
        const std::string view_before = canonical_view(s->view());
        for (int k = 0; k < 3 && previews < 1000; ++k) {
            const auto& rec = pick(current.recommendations, rng);
            const ViewModel p1 = s->preview(rec.rec_id);
            const ViewModel p2 = s->preview(rec.rec_id);
            ++previews;
            if (!(p1 == p2)) violation("preview not repeatable");
            if (canonical_spec(s->spec()) != spec_before) violation("preview changed the spec");
            if (canonical_view(s->view()) != view_before) violation("preview changed the view");
        }
    }
    std::ostringstream out;
    out << previews << " previews, " << generates << " repeated generates, " << violations << " violations";
    if (!first.empty()) out << "; first: " << first;
    return {previews >= 1000 && generates >= 1000 && violations == 0, out.str()};
}

// ------------------------------------------------------------ criterion 5

// One random committed command; false when the draw was not applicable.
bool random_command(Session& s, const World& w, std::mt19937& rng, bool& vbd) {
    const VisSpec spec = s.spec();
    vbd = false;
    try {
        switch (rng() % 10) {
            case 0:
            case 1: {
                const auto demo = random_demo(s, rng);
                if (!demo) return false;
                const auto set = s.demonstrate(*demo);
                if (set.recommendations.empty()) return false;
                s.accept(pick(set.recommendations, rng).rec_id);
                vbd = true;
                return true;
            }
            case 2: {
                const Channel c = rng() % 2 ? Channel::x : Channel::y;
                const auto& pool = (c == Channel::x && is_bar_type(spec.vis_type)) ? w.categorical_like : w.quantitative;
                s.set_axis(c, pick(pool, rng));
                return true;
            }
            case 3: {
                const auto& attrs = w.data->attributes();
                s.set_mark(rng() % 2 ? Channel::color : Channel::size, pick(attrs, rng).name);
                return true;
            }
            case 4: {
                static const VisType types[] = {VisType::scatterplot, VisType::bar_chart, VisType::stacked_bar_chart};
                s.switch_vis_type(types[rng() % 3]);
                return true;
            }
            case 5: {
                const auto r = s.add_filter(pick(w.data->attributes(), rng).name);
                return r.committed;
            }
            case 6: {
                const auto widgets = s.filters();
                if (widgets.empty()) return false;
                const auto& wm = pick(widgets, rng);
                if (const auto* slider = std::get_if<RangeSliderWidget>(&wm.widget)) {
                    std::uniform_real_distribution<double> u(slider->domain.min, slider->domain.max);
                    double lo = u(rng), hi = u(rng);
                    if (lo > hi) std::swap(lo, hi);
                    s.update_filter(wm.rule_id, RangeSelection{lo, hi, rng() % 2 == 0});
                } else if (const auto* boxes = std::get_if<CheckboxSetWidget>(&wm.widget)) {
                    CheckboxSelection c;
                    for (const auto& v : boxes->values) {
                        if (rng() % 3) c.checked.push_back(v);
                    }
                    s.update_filter(wm.rule_id, c);
                } else {
                    return false;
                }
                return true;
            }
            case 7:
                s.sort(static_cast<SortDirection>(rng() % 3));
                return true;
            case 8: {
                static const Channel channels[] = {Channel::color, Channel::size};
                s.remove_encoding(channels[rng() % 2]);
                return true;
            }
            default: {
                const auto widgets = s.filters();
                if (widgets.empty()) return false;
                s.remove_filter(pick(widgets, rng).rule_id);
                return true;
            }
        }
    } catch (const Error&) {
        return false;
    }
}

Outcome undo_replay() {
    std::mt19937 rng(5150);
    std::size_t sequences = 0, violations = 0, vbd_steps = 0, mvs_steps = 0, undo_checks = 0;
    std::string first;
    auto violation = [&](const std::string& what) {
        ++violations;
        if (first.empty()) first = what;
    };
    while (sequences < 500) {
        const World w = random_world(rng);
        if (w.quantitative.empty() || w.categorical_like.empty()) continue;
        Session s("s1", w.data);
        // Independent model: spec (modulo revision) at each cursor position.
        std::vector<std::string> at_cursor{modulo(s.spec())};
        s.set_axis(Channel::x, pick(w.quantitative, rng));
        at_cursor.push_back(modulo(s.spec()));
        s.set_axis(Channel::y, pick(w.quantitative, rng));
        at_cursor.push_back(modulo(s.spec()));
        std::size_t cursor = 2;
        const auto step_ok = [&] {
            if (modulo(s.log().replay(s.dataset())) != modulo(s.spec())) violation("replay differs from live spec");
            if (s.log().cursor() != cursor) violation("cursor drift");
        };
        int steps = 0;
        int guard = 0;
        while (steps < 20 && guard++ < 2000) {
            // Occasional mid-sequence undo/redo so the redo tail gets truncated too.
            if (rng() % 8 == 0 && cursor > 0) {
                s.undo();
                --cursor;
                if (modulo(s.spec()) != at_cursor[cursor]) violation("mid undo");
                continue;
            }
            if (rng() % 10 == 0 && cursor + 1 < at_cursor.size()) {
                s.redo();
                ++cursor;
                if (modulo(s.spec()) != at_cursor[cursor]) violation("mid redo");
                continue;
            }
            bool vbd = false;
            if (!random_command(s, w, rng, vbd)) continue;
            ++steps;
            ++(vbd ? vbd_steps : mvs_steps);
            at_cursor.resize(cursor + 1);
            at_cursor.push_back(modulo(s.spec()));
            ++cursor;
            step_ok();
        }
        const std::string final_spec = modulo(s.spec());
        const std::size_t k = 1 + rng() % cursor;
        for (std::size_t i = 0; i < k; ++i) {
            s.undo();
            --cursor;
            ++undo_checks;
            if (modulo(s.spec()) != at_cursor[cursor]) violation("undo does not reach the prefix spec");
            step_ok();
        }
        for (std::size_t i = 0; i < k; ++i) {
            s.redo();
            ++cursor;
            step_ok();
        }
        if (modulo(s.spec()) != final_spec) violation("undo^k redo^k is not the identity");
        ++sequences;
    }
    std::ostringstream out;
    out << sequences << " sequences (" << mvs_steps << " MVS + " << vbd_steps << " VbD steps, " << undo_checks
        << " undo checks), " << violations << " violations";
    if (!first.empty()) out << "; first: " << first;
    return {violations == 0, out.str()};
}

// ------------------------------------------------------------ criterion 6

Outcome http_equivalence() {
    const std::filesystem::path data_dir = fixtures::source_path("data");
    Engine served(EngineOptions{data_dir});
    Service service(served);
    const int port = service.start();
    auto remote = make_http_client("http://127.0.0.1:" + std::to_string(port));
    Engine local(EngineOptions{data_dir});
    InProcessClient in_process(local);

    struct Case {
        std::string script;
        Json body;
    };
    const std::vector<Case> cases{
        {"scripts/walkthrough.json", {{"dataset", "cars"}}},
        {"scripts/mini8_tour.json", session_body_for_file(fixtures::source_path("tests/data/mini8.csv"))},
    };
    std::size_t equal = 0;
    std::string first;
    for (const auto& c : cases) {
        const Json script = parse_script(fixtures::read_text(fixtures::source_path(c.script)));
        const ScriptResult a = run_script(*remote, script, c.body);
        const ScriptResult b = run_script(in_process, script, c.body);
        const bool same = a.ok && b.ok && a.spec.dump() == b.spec.dump() && a.view.dump() == b.view.dump() &&
                          a.recommendations.dump() == b.recommendations.dump();
        if (same) ++equal;
        else if (first.empty()) first = c.script;
    }
    service.stop();
    std::ostringstream out;
    out << equal << "/" << cases.size() << " scripts byte-identical (spec, view, recommendations)";
    if (!first.empty()) out << "; differs: " << first;
    return {equal == cases.size(), out.str()};
}

// ------------------------------------------------------------ criterion 7

// First `n` rows whose `attr` has category code `code`.
std::vector<RowId> rows_of(const Dataset& d, const std::string& attr, std::int32_t code, std::size_t n) {
    std::vector<RowId> out;
    const auto a = d.attribute_index(attr);
    for (RowId r = 0; r < d.row_count() && out.size() < n; ++r) {
        if (d.category_code(a, r) == code) out.push_back(r);
    }
    return out;
}

Outcome responsiveness() {
    std::mt19937 rng(42);
    gen::TableShape shape;
    shape.rows = 10000;
    shape.categorical = 3;
    shape.discrete = 2;
    shape.continuous = 7;
    const World w = make_world(gen::csv(shape, rng));
    Session scatter("s1", w.data);
    scatter.set_axis(Channel::x, "num0");
    scatter.set_axis(Channel::y, "num1");
    Session bars("s2", w.data);
    bars.switch_vis_type(VisType::bar_chart);
    bars.set_axis(Channel::x, "cat0");
    bars.set_axis(Channel::y, "num2");

    std::vector<RowId> all(w.data->row_count());
    for (RowId r = 0; r < all.size(); ++r) all[r] = r;
    struct Probe {
        std::string name;
        Session* session;
        Demonstration demo;
    };
    const auto picked = sample(all, 60, rng);
    // Rows ordered by num3 so the recolor and resize demos have at least one consistent reading.
    const auto n3 = w.data->attribute_index("num3");
    std::vector<RowId> by_num3;
    for (RowId r : all) {
        if (!w.data->is_missing(n3, r)) by_num3.push_back(r);
    }
    std::sort(by_num3.begin(), by_num3.end(),
              [&](RowId l, RowId r) { return w.data->number(n3, l) < w.data->number(n3, r); });
    const std::vector<RowId> low(by_num3.begin(), by_num3.begin() + 20);
    const std::vector<RowId> high(by_num3.end() - 20, by_num3.end());
    ResizeDemo resize;
    for (std::size_t i = 0; i < 12; ++i) resize.points.push_back({by_num3[i * 800], 0.1 + 0.07 * static_cast<double>(i)});
    const std::vector<Probe> probes{
        {"recolor", &scatter, RecolorDemo{{{"#e41a1c", sel(low)}, {"#377eb8", sel(high)}}}},
        {"resize", &scatter, resize},
        {"drag-out", &scatter, DragOutDemo{sel({picked.begin(), picked.begin() + 50})}},
        {"bar drag", &bars, DragBarDemo{bars.view().bar_order.front(), BarExtreme::extreme_right}},
        {"bar recolor", &bars,
         RecolorDemo{{{"#e41a1c", sel(rows_of(*w.data, "cat0", 0, 10))},
                      {"#377eb8", sel(rows_of(*w.data, "cat0", 1, 10))}}}},
    };
    std::ostringstream out;
    bool ok = true;
    double worst = 0;
    for (const auto& p : probes) {
        std::vector<double> ms;
        const std::size_t produced = p.session->demonstrate(p.demo).recommendations.size();  // warm-up
        for (int i = 0; i < 9; ++i) {
            const auto t0 = Clock::now();
            p.session->demonstrate(p.demo);
            ms.push_back(seconds_since(t0) * 1000.0);
        }
        std::sort(ms.begin(), ms.end());
        const double median = ms[ms.size() / 2];
        worst = std::max(worst, median);
        ok &= median < 200.0;
        ok &= produced > 0;
        out << p.name << " " << median << " ms (" << produced << " candidates), ";
    }
    out << "10000 rows x 12 attributes, worst median " << worst << " ms";
    return {ok, out.str()};
}

}  // namespace

int main() {
    report(1, "walkthrough replay", walkthrough);
    report(2, "intent-oracle equivalence", oracle_sweep);
    report(3, "paradigm equivalence", paradigm_equivalence);
    report(4, "feedforward purity and determinism", purity_and_determinism);
    report(5, "undo/replay", undo_replay);
    report(6, "engine/API equivalence", http_equivalence);
    report(7, "desk-scale responsiveness", responsiveness);
    return failures == 0 ? 0 : 1;
}
