#include "vizblend/service.hpp"

#include "vizblend/error.hpp"

#include <httplib.h>

#include <chrono>

namespace vizblend {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

std::optional<std::int64_t> revision_header(const httplib::Request& req) {
    if (!req.has_header("X-Revision")) return std::nullopt;
    const std::string v = req.get_header_value("X-Revision");
    try {
        std::size_t used = 0;
        const long long r = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_request, "X-Revision must be an integer, got '" + v + "'");
    }
}

Json body_json(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    return parse_json(req.body);
}

template <class F>
httplib::Server::Handler handle(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send(res, error_json(std::string(to_string(e.code())), e.what()), http_status(e.code()));
        } catch (const std::exception& e) {
            send(res, error_json("Internal", e.what()), 500);
        }
    };
}

}  // namespace

Service::Service(Engine& engine) : engine_(engine), server_(std::make_unique<httplib::Server>()) {
    routes();
}

Service::~Service() { stop(); }

void Service::routes() {
    auto& s = *server_;
    Engine& engine = engine_;

    s.Post("/sessions", handle([&](const httplib::Request& req, httplib::Response& res) {
               send(res, engine.create_session(body_json(req)), 201);
           }));
    s.Post("/sessions/restore", handle([&](const httplib::Request& req, httplib::Response& res) {
               send(res, engine.restore_session(body_json(req)), 201);
           }));
    s.Delete(R"(/sessions/([^/]+))", handle([&](const httplib::Request& req, httplib::Response& res) {
                 if (!engine.delete_session(req.matches[1].str())) {
                     throw Error(ErrorCode::unknown_session, "unknown session " + req.matches[1].str());
                 }
                 send(res, {{"deleted", req.matches[1].str()}});
             }));

    s.Get(R"(/sessions/([^/]+)/events)", [&](const httplib::Request& req, httplib::Response& res) {
        std::shared_ptr<Session> session;
        try {
            session = engine.session(req.matches[1].str());
        } catch (const Error& e) {
            send(res, error_json(std::string(to_string(e.code())), e.what()), http_status(e.code()));
            return;
        }
        auto queue = session->subscribe();
        const std::int64_t start = session->revision();
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream",
            [this, queue, start, sent_hello = false](std::size_t, httplib::DataSink& sink) mutable {
                if (!sent_hello) {
                    // Tells the client which revision the stream starts after.
                    const std::string hello = "event: hello\ndata: " +
                                              Json{{"revision", start}}.dump() + "\n\n";
                    sent_hello = true;
                    return sink.write(hello.data(), hello.size());
                }
                if (stopping_) {
                    sink.done();
                    return true;
                }
                if (auto e = queue->pop(std::chrono::milliseconds(250))) {
                    const std::string msg = "event: " + std::string(to_string(e->type)) +
                                            "\ndata: " + to_json(*e).dump() + "\n\n";
                    return sink.write(msg.data(), msg.size());
                }
                if (queue->closed()) {
                    sink.done();
                    return true;
                }
                const std::string ping = ": ping\n\n";
                return sink.write(ping.data(), ping.size());
            });
    });

    s.Get(R"(/sessions/([^/]+)/([a-z_]+))", handle([&](const httplib::Request& req, httplib::Response& res) {
              const bool all = req.has_param("all") && req.get_param_value("all") == "true";
              send(res, engine.get(req.matches[1].str(), req.matches[2].str(), all));
          }));
    s.Post(R"(/sessions/([^/]+)/ops/([a-z_]+))",
           handle([&](const httplib::Request& req, httplib::Response& res) {
               send(res, engine.op(req.matches[1].str(), req.matches[2].str(), body_json(req),
                                   revision_header(req)));
           }));
    s.Post(R"(/sessions/([^/]+)/demonstrations)",
           handle([&](const httplib::Request& req, httplib::Response& res) {
               send(res, engine.demonstrate(req.matches[1].str(), body_json(req)));
           }));
    s.Post(R"(/sessions/([^/]+)/recommendations/reject_all)",
           handle([&](const httplib::Request& req, httplib::Response& res) {
               send(res, engine.reject_all(req.matches[1].str()));
           }));
    s.Post(R"(/recommendations/([^/]+)/(preview|accept|reject))",
           handle([&](const httplib::Request& req, httplib::Response& res) {
               send(res, engine.recommendation(req.matches[1].str(), req.matches[2].str(),
                                               revision_header(req)));
           }));
}

int Service::bind(const std::string& host, int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
    } else {
        port_ = server_->bind_to_port(host, port) ? port : -1;
    }
    if (port_ <= 0) {
        throw Error(ErrorCode::invalid_request, "cannot bind " + host + ":" + std::to_string(port));
    }
    return port_;
}

void Service::listen() { server_->listen_after_bind(); }

int Service::start(const std::string& host, int port) {
    const int bound = bind(host, port);
    thread_ = std::thread([this] { listen(); });
    server_->wait_until_ready();
    return bound;
}

void Service::stop() {
    stopping_ = true;
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace vizblend
