#include "vizblend/api.hpp"
#include "vizblend/error.hpp"
#include "vizblend/script.hpp"
#include "vizblend/service.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using vizblend::Json;

namespace {

// JSON crosses the boundary as text; the Python package wraps it in dicts.
Json parse(const std::string& text) { return vizblend::parse_json(text); }

template <class F>
std::string call(F&& f) {
    py::gil_scoped_release release;
    return f().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "vizblend engine bindings (JSON in, JSON out)";
    m.attr("__version__") = "0.1.0";

    static py::handle error_type = py::exception<vizblend::Error>(m, "EngineError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const vizblend::Error& e) {
            const auto args = py::make_tuple(std::string(vizblend::to_string(e.code())), std::string(e.what()));
            PyErr_SetObject(error_type.ptr(), args.ptr());
        }
    });

    py::class_<vizblend::Engine>(m, "Engine")
        .def(py::init([](std::optional<std::filesystem::path> data_dir) {
                 return std::make_unique<vizblend::Engine>(vizblend::EngineOptions{std::move(data_dir)});
             }),
             py::arg("data_dir") = py::none())
        .def("create_session",
             [](vizblend::Engine& e, const std::string& body) { return call([&] { return e.create_session(parse(body)); }); })
        .def("restore_session",
             [](vizblend::Engine& e, const std::string& snap) { return call([&] { return e.restore_session(parse(snap)); }); })
        .def("delete_session", &vizblend::Engine::delete_session, py::call_guard<py::gil_scoped_release>())
        .def("get",
             [](const vizblend::Engine& e, const std::string& sid, const std::string& resource, bool all) {
                 return call([&] { return e.get(sid, resource, all); });
             },
             py::arg("session_id"), py::arg("resource"), py::arg("all") = false)
        .def("op",
             [](vizblend::Engine& e, const std::string& sid, const std::string& name, const std::string& params,
                std::optional<std::int64_t> expected) {
                 return call([&] { return e.op(sid, name, parse(params), expected); });
             },
             py::arg("session_id"), py::arg("name"), py::arg("params"), py::arg("expected_revision") = py::none())
        .def("demonstrate",
             [](vizblend::Engine& e, const std::string& sid, const std::string& demo) {
                 return call([&] { return e.demonstrate(sid, parse(demo)); });
             })
        .def("recommendation",
             [](vizblend::Engine& e, const std::string& rid, const std::string& action,
                std::optional<std::int64_t> expected) {
                 return call([&] { return e.recommendation(rid, action, expected); });
             },
             py::arg("rec_id"), py::arg("action"), py::arg("expected_revision") = py::none())
        .def("reject_all",
             [](vizblend::Engine& e, const std::string& sid) { return call([&] { return e.reject_all(sid); }); });

    py::class_<vizblend::Service>(m, "Service")
        .def(py::init<vizblend::Engine&>(), py::keep_alive<1, 2>())
        .def("start", &vizblend::Service::start, py::arg("host") = "127.0.0.1", py::arg("port") = 0,
             py::call_guard<py::gil_scoped_release>())
        .def("stop", &vizblend::Service::stop, py::call_guard<py::gil_scoped_release>())
        .def_property_readonly("port", &vizblend::Service::port);

    m.def(
        "run_script",
        [](vizblend::Engine& engine, const std::string& script, const std::string& session_body) {
            return call([&] {
                vizblend::InProcessClient client(engine);
                const auto r = vizblend::run_script(client, vizblend::parse_script(script), parse(session_body));
                Json steps = Json::array();
                for (const auto& s : r.steps) {
                    steps.push_back({{"index", s.index}, {"action", s.action}, {"ok", s.ok}, {"message", s.message}});
                }
                return Json{{"ok", r.ok},
                            {"session_id", r.session_id},
                            {"spec", r.spec},
                            {"view", r.view},
                            {"recommendations", r.recommendations},
                            {"steps", steps}};
            });
        },
        py::arg("engine"), py::arg("script"), py::arg("session_body"));
}
