#pragma once

#include "vizblend/api.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace vizblend {

// HTTP + server-sent-events transport over an Engine. Adds no behavior.
class Service {
public:
    explicit Service(Engine& engine);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // port 0 binds an ephemeral port. Returns the bound port.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    // bind + listen on a background thread.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    int port() const { return port_; }

private:
    void routes();

    Engine& engine_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::atomic<bool> stopping_{false};
    int port_ = 0;
};

}  // namespace vizblend
