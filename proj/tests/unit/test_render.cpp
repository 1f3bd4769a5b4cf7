#include "fixtures.hpp"
#include "oracle.hpp"

#include "vizblend/render.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace vizblend;
using fixtures::error_of;

TEST_CASE("mini8 bar chart means") {
    const auto& d = *fixtures::mini8();
    const auto t = oracle::parse(fixtures::mini8_text());
    const VisSpec s = fixtures::chart(VisType::bar_chart, "Cylinders", "MPG", d);
    const ViewModel v = render(s, d);
    REQUIRE(v.marks.size() == 3);
    std::map<std::string, double> want;
    for (const auto& b : oracle::bars(t, s)) want[b.category] = oracle::mean(t, t.col("MPG"), b.rows);
    CHECK(want == std::map<std::string, double>{{"4", 30}, {"6", 21}, {"8", 15}});
    for (const auto& m : v.marks) {
        CHECK(m.value == doctest::Approx(want[m.category]));
        CHECK(m.y0 == 0.0);
        // Heights are proportional to the means with a zero baseline.
        CHECK(m.y == doctest::Approx(want[m.category] / 30.0));
    }
    CHECK(v.bar_order == std::vector<std::string>{"4", "6", "8"});
    CHECK(v.marks[0].mark_id == "b:4");
    CHECK(v.marks[0].x == 0.0);
    CHECK(v.marks[2].x == 1.0);
}

TEST_CASE("sorting permutes bar order") {
    const auto& d = *fixtures::mini8();
    VisSpec s = fixtures::chart(VisType::bar_chart, "Cylinders", "MPG", d);
    s = fixtures::with(s, change::SetSort{{"MPG", SortDirection::ascending}}, d);
    CHECK(render(s, d).bar_order == std::vector<std::string>{"8", "6", "4"});
    s = fixtures::with(s, change::SetSort{{"MPG", SortDirection::descending}}, d);
    CHECK(render(s, d).bar_order == std::vector<std::string>{"4", "6", "8"});
    s = fixtures::with(s, change::SetSort{{"MPG", SortDirection::none}}, d);
    CHECK(render(s, d).bar_order == std::vector<std::string>{"4", "6", "8"});
}

TEST_CASE("sorted bar means are monotone") {
    const auto& cars = *fixtures::cars();
    const auto t = oracle::parse(fixtures::read_text(fixtures::source_path("data/cars.csv")));
    for (const char* x : {"Cylinders", "Origin", "Year"}) {
        for (const char* by : {"MPG", "Horsepower", "Weight", "Acceleration", "Displacement"}) {
            for (auto dir : {SortDirection::ascending, SortDirection::descending}) {
                VisSpec s = fixtures::chart(VisType::bar_chart, x, "MPG", cars);
                s = fixtures::with(s, change::SetSort{{by, dir}}, cars);
                const ViewModel v = render(s, cars);
                std::map<std::string, double> means;
                for (const auto& b : oracle::bars(t, s)) means[b.category] = oracle::mean(t, t.col(by), b.rows);
                for (std::size_t i = 1; i < v.bar_order.size(); ++i) {
                    const double a = means[v.bar_order[i - 1]], b = means[v.bar_order[i]];
                    if (dir == SortDirection::ascending) CHECK(a <= b);
                    else CHECK(a >= b);
                }
                CHECK(v.bar_order == oracle::sorted_bars(t, s, by, dir == SortDirection::ascending));
            }
        }
    }
}

TEST_CASE("scatter with a range filter") {
    const auto& d = *fixtures::mini8();
    VisSpec s = fixtures::chart(VisType::scatterplot, "Horsepower", "MPG", d);
    s = fixtures::with(s, change::AddFilter{{"f1", RangeFilter{"Horsepower", 100, 160, false}, Provenance::mvs}, std::nullopt}, d);
    const ViewModel v = render(s, d);
    REQUIRE(v.marks.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(v.marks[i].mark_id == "r" + std::to_string(i + 3));
    CHECK(v.visible_rows == 5);
    for (const auto& m : v.marks) {
        CHECK(m.x >= 0.0);
        CHECK(m.x <= 1.0);
        CHECK(m.size == kUniformMarkSize);
        CHECK(m.color == std::string(kDefaultMarkColor));
    }
    // Normalization uses the attribute extent: HP 160 maps to 1, MPG 14 to 0.
    CHECK(v.marks[3].x == doctest::Approx(1.0));
    CHECK(v.marks[3].y == doctest::Approx(0.0));
}

TEST_CASE("filter excluding everything keeps axes") {
    const auto& d = *fixtures::mini8();
    for (VisType type : {VisType::scatterplot, VisType::bar_chart}) {
        VisSpec s = fixtures::chart(type, type == VisType::scatterplot ? "Horsepower" : "Cylinders", "MPG", d);
        s = fixtures::with(s, change::AddFilter{{"f1", PointSetFilter{{0, 1, 2, 3, 4, 5, 6, 7}}, Provenance::mvs}, std::nullopt}, d);
        const ViewModel v = render(s, d);
        CHECK(v.marks.empty());
        CHECK(v.axes.size() == 2);
    }
}

TEST_CASE("render errors") {
    const auto& d = *fixtures::mini8();
    VisSpec s;
    CHECK(error_of([&] { render(s, d); }) == ErrorCode::missing_axes);
    s = fixtures::bind(s, Channel::x, "Horsepower", d);
    CHECK(error_of([&] { render(s, d); }) == ErrorCode::missing_axes);
    VisSpec stacked = fixtures::chart(VisType::stacked_bar_chart, "Cylinders", "MPG", d);
    CHECK(error_of([&] { render(stacked, d); }) == ErrorCode::invalid_spec);
}

TEST_CASE("size and color encodings") {
    const auto& d = *fixtures::mini8();
    VisSpec s = fixtures::chart(VisType::scatterplot, "Horsepower", "MPG", d);
    s = fixtures::bind(s, Channel::size, "Displacement", d);
    s = fixtures::with(s, change::SetBinding{{Channel::color, "Origin", default_palette(d.attribute("Origin")), Provenance::mvs}}, d);
    const ViewModel v = render(s, d);
    CHECK(v.marks[0].size == doctest::Approx(kMinMarkSize));
    CHECK(v.marks[6].size == doctest::Approx(1.0));
    for (const auto& m : v.marks) {
        CHECK(m.size > 0.0);
        CHECK(m.size <= 1.0);
    }
    CHECK(v.marks[0].color == v.marks[1].color);
    CHECK(v.marks[0].color != v.marks[2].color);
    CHECK(v.marks[3].color == v.marks[4].color);

    const auto one = load_csv_text("a,b,c\n1,2,5\n3,4,5\n");
    VisSpec cs = fixtures::chart(VisType::scatterplot, "a", "b", one);
    cs = fixtures::bind(cs, Channel::size, "c", one);
    const auto cv = render(cs, one);
    CHECK(cv.marks[0].size == cv.marks[1].size);
}

TEST_CASE("stacked segments add up to the bar mean") {
    const auto& d = *fixtures::mini8();
    VisSpec s = fixtures::chart(VisType::stacked_bar_chart, "Cylinders", "MPG", d);
    s = fixtures::bind(s, Channel::color, "Origin", d);
    const ViewModel v = render(s, d);
    std::map<std::string, double> total;
    for (const auto& m : v.marks) {
        CHECK(m.mark_id == "s:" + m.category + "|" + m.series);
        total[m.category] += m.value;
    }
    CHECK(total["4"] == doctest::Approx(30));
    CHECK(total["6"] == doctest::Approx(21));
    CHECK(total["8"] == doctest::Approx(15));
    // Segments stack: each starts where the previous ended.
    CHECK(v.marks[0].category == "4");
    CHECK(v.marks[1].y0 == doctest::Approx(v.marks[0].y));
}

TEST_CASE("render is deterministic") {
    const auto& cars = *fixtures::cars();
    VisSpec s = fixtures::chart(VisType::scatterplot, "Horsepower", "Acceleration", cars);
    s = fixtures::bind(s, Channel::color, "Cylinders", cars);
    CHECK(render(s, cars) == render(s, cars));
}
