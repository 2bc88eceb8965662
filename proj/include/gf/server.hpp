#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "gf/config.hpp"
#include "gf/session.hpp"

namespace gf {

struct ServerOptions {
    std::string address = "127.0.0.1";
    std::uint16_t port = 7777;  // 0 picks a free port
    GameConfig defaults;
    double time_scale = 1.0;  // simulated seconds per wall second
    double time_cap = 1800.0;
    // Called on the service thread whenever a session ends.
    std::function<void(const SessionLog&)> on_session_end;
};

// WebSocket service, one session per connection, driven by a single I/O thread.
class Server {
public:
    virtual ~Server() = default;
    virtual std::uint16_t port() const noexcept = 0;
    virtual void stop() = 0;  // idempotent; closes connections and joins the service thread
    virtual void wait() = 0;  // blocks until stop()
};

// Throws gf::Error("bind-failure").
std::unique_ptr<Server> serve(ServerOptions options);

} // namespace gf
