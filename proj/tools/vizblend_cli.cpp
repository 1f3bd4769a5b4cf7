#include "vizblend/api.hpp"
#include "vizblend/error.hpp"
#include "vizblend/script.hpp"
#include "vizblend/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vizblend::Error(vizblend::ErrorCode::invalid_request, "cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const std::string& path, const vizblend::Json& value) {
    if (path.empty()) return;
    const std::string text = value.dump(2) + "\n";
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vizblend::Error(vizblend::ErrorCode::invalid_request, "cannot write " + path);
    out << text;
}

vizblend::Service* g_service = nullptr;

void on_signal(int) {
    if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vizblend: replay visualization scripts or serve the engine over HTTP"};
    std::string data, script_path, emit_spec, emit_view, emit_recs, assert_path, remote, data_dir;
    std::string host = "127.0.0.1";
    bool serve = false;
    int port = 8080;
    app.add_option("--data", data, "CSV dataset file")->check(CLI::ExistingFile);
    app.add_option("--script", script_path, "demonstration script (JSON)")->check(CLI::ExistingFile);
    app.add_option("--emit-spec", emit_spec, "write the final spec here ('-' for stdout)");
    app.add_option("--emit-view", emit_view, "write the final view model here");
    app.add_option("--emit-recs", emit_recs, "write the last recommendation set here");
    app.add_option("--assert", assert_path, "expected outputs to compare against")->check(CLI::ExistingFile);
    app.add_option("--remote", remote, "run the script against a service, e.g. http://127.0.0.1:8080");
    app.add_flag("--serve", serve, "serve the HTTP API");
    app.add_option("--port", port, "port for --serve (0 picks one)");
    app.add_option("--host", host, "address for --serve");
    app.add_option("--data-dir", data_dir, "dataset directory (default $LIGER_DATA_DIR)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        vizblend::EngineOptions options;
        if (!data_dir.empty()) options.data_dir = data_dir;
        vizblend::Engine engine(options);

        if (serve) {
            vizblend::Service service(engine);
            const int bound = service.bind(host, port);
            std::cerr << "listening on http://" << host << ":" << bound << std::endl;
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            service.listen();
            g_service = nullptr;
            return 0;
        }

        vizblend::Json script = {{"steps", vizblend::Json::array()}};
        if (!script_path.empty()) script = vizblend::parse_script(read_file(script_path));

        vizblend::Json body;
        if (!data.empty()) {
            body = vizblend::session_body_for_file(data);
        } else if (script.contains("dataset")) {
            body = {{"dataset", script.at("dataset")}};
        } else {
            std::cerr << "error: no dataset; pass --data or set \"dataset\" in the script\n";
            return 3;
        }

        std::unique_ptr<vizblend::EngineClient> client;
        if (remote.empty()) {
            client = std::make_unique<vizblend::InProcessClient>(engine);
        } else {
            client = vizblend::make_http_client(remote);
        }
        const auto result = vizblend::run_script(*client, script, body);

        for (const auto& s : result.steps) {
            if (!s.ok) std::cerr << "step " << s.index << " (" << s.action << ") failed: " << s.message << "\n";
        }
        emit(emit_spec, result.spec);
        emit(emit_view, result.view);
        emit(emit_recs, result.recommendations);
        if (!result.ok) return 1;

        if (!assert_path.empty()) {
            const auto mismatches =
                vizblend::check_assertions(result, vizblend::parse_json(read_file(assert_path)));
            for (const auto& m : mismatches) std::cerr << "assert: " << m << "\n";
            if (!mismatches.empty()) return 2;
        }
        return 0;
    } catch (const vizblend::Error& e) {
        std::cerr << "error: " << vizblend::to_string(e.code()) << ": " << e.what() << "\n";
        return 3;
    }
}
