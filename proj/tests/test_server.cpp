#include <doctest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <future>

#include "gf/error.hpp"
#include "gf/server.hpp"
#include "gf/session.hpp"
#include "gf/live_session.hpp"

using namespace gf;

namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
using tcp = asio::ip::tcp;

class Client {
public:
    explicit Client(std::uint16_t port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/");
        ws_.text(true);
    }
    void send(const ProtocolMessage& m) { send_raw(encode(m)); }
    void send_raw(const std::string& s) { ws_.write(asio::buffer(s)); }
    ProtocolMessage recv() {
        beast::flat_buffer buf;
        ws_.read(buf);
        return decode(beast::buffers_to_string(buf.data()));
    }
    template <class T>
    T recv_until(int limit = 100000) {
        for (int i = 0; i < limit; ++i) {
            auto m = recv();
            if (auto* t = std::get_if<T>(&m)) return *t;
        }
        throw std::runtime_error("message not received");
    }

private:
    asio::io_context ioc_;
    beast::websocket::stream<tcp::socket> ws_;
};

} // namespace

TEST_SUITE("server") {
    TEST_CASE("handshake, snapshots, and errors over a websocket") {
        ServerOptions o;
        o.port = 0;
        o.time_scale = 20.0;
        auto server = serve(o);
        REQUIRE(server->port() != 0);

        Client c(server->port());
        c.send(msg::Hello{"test"});
        auto w = std::get<msg::Welcome>(c.recv());
        CHECK(w.schema_version == "gf/1");

        c.send(msg::Start{Condition::Certain, false, 7});
        CHECK(std::get<msg::Welcome>(c.recv()).config.condition == Condition::Certain);
        CHECK(std::get<msg::Snapshot>(c.recv()).time_ms == 0);

        std::int64_t last = 0;
        for (int i = 0; i < 5; ++i) {
            const auto s = c.recv_until<msg::Snapshot>();
            CHECK(s.time_ms == last + kSnapshotPeriodMs);
            last = s.time_ms;
        }

        c.send_raw("garbage");
        const auto err = c.recv_until<msg::ProtocolError>();
        CHECK(err.code == "bad-message");
        c.send(msg::Gesture{Gesture::Kick, Direction::Neutral});
        bool saw_kick = false;
        for (int i = 0; i < 200 && !saw_kick; ++i) {
            const auto e = c.recv_until<msg::Event>();
            if (const auto* g = e.event.as<ev::GestureSubmitted>()) saw_kick = g->gesture == Gesture::Kick;
        }
        CHECK(saw_kick);
        server->stop();
        server->stop();
    }

    TEST_CASE("a second server on the same port fails to bind") {
        ServerOptions o;
        o.port = 0;
        auto a = serve(o);
        o.port = a->port();
        try {
            serve(o);
            FAIL("expected bind-failure");
        } catch (const Error& e) {
            CHECK(e.code() == "bind-failure");
        }
        o.address = "not an address";
        CHECK_THROWS_AS(serve(o), Error);
    }

    TEST_CASE("finished sessions reach the callback and end with metrics") {
        std::promise<SessionLog> done;
        ServerOptions o;
        o.port = 0;
        o.time_scale = 50.0;
        o.time_cap = 3.0;
        o.on_session_end = [&](const SessionLog& log) { done.set_value(log); };
        auto server = serve(o);
        Client c(server->port());
        c.send(msg::Start{Condition::Uncertain, false, 11});
        const auto ended = c.recv_until<msg::Ended>();
        CHECK_FALSE(ended.winner.has_value());
        auto fut = done.get_future();
        REQUIRE(fut.wait_for(std::chrono::seconds(10)) == std::future_status::ready);
        const auto log = fut.get();
        CHECK(log.time_cap_exceeded);
        CHECK(log.header.seed == 11);
        CHECK(replay_session(log).events == log.events);
        CHECK(ended.metrics.session_duration <= 3.0);
    }
}
