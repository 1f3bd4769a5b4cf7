#pragma once

#include "vizblend/data.hpp"
#include "vizblend/error.hpp"
#include "vizblend/spec.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#ifndef VIZBLEND_SOURCE_DIR
#error "VIZBLEND_SOURCE_DIR must be defined"
#endif

namespace fixtures {

inline std::string source_path(const std::string& rel) {
    return std::string(VIZBLEND_SOURCE_DIR) + "/" + rel;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string mini8_text() { return read_text(source_path("tests/data/mini8.csv")); }

inline std::shared_ptr<const vizblend::Dataset> mini8() {
    static const auto d = std::make_shared<const vizblend::Dataset>(
        vizblend::load_csv_file(source_path("tests/data/mini8.csv")));
    return d;
}

inline std::shared_ptr<const vizblend::Dataset> cars() {
    static const auto d = std::make_shared<const vizblend::Dataset>(
        vizblend::load_csv_file(source_path("data/cars.csv")));
    return d;
}

// Applies a change built against `spec` and returns the result.
inline vizblend::VisSpec with(const vizblend::VisSpec& spec, vizblend::SpecAction action,
                              const vizblend::Dataset& d) {
    return vizblend::apply_change(spec, {std::move(action), spec.revision}, d);
}

inline vizblend::VisSpec bind(const vizblend::VisSpec& spec, vizblend::Channel c,
                              const std::string& attr, const vizblend::Dataset& d) {
    return with(spec, vizblend::change::SetBinding{{c, attr, std::nullopt, vizblend::Provenance::mvs}}, d);
}

inline vizblend::VisSpec chart(vizblend::VisType type, const std::string& x, const std::string& y,
                               const vizblend::Dataset& d) {
    vizblend::VisSpec s;
    s = with(s, vizblend::change::SetVisType{type, std::nullopt}, d);
    s = bind(s, vizblend::Channel::x, x, d);
    return bind(s, vizblend::Channel::y, y, d);
}

template <class F>
vizblend::ErrorCode error_of(F&& f) {
    try {
        f();
    } catch (const vizblend::Error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a vizblend::Error");
}

}  // namespace fixtures
