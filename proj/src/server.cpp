#include "gf/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <list>
#include <mutex>
#include <thread>

#include "gf/error.hpp"
#include "gf/live_session.hpp"

namespace gf {

namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, const ServerOptions& opts)
        : ws_(std::move(socket)),
          timer_(ws_.get_executor()),
          opts_(opts),
          session_(opts.defaults, opts.time_cap),
          period_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double, std::milli>(static_cast<double>(session_.tick_ms()) / opts.time_scale))) {}

    void start() {
        ws_.text(true);
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->read();
            self->next_tick_ = std::chrono::steady_clock::now() + self->period_;
            self->arm_timer();
        });
    }

    void close() {
        closed_ = true;
        timer_.cancel();
        beast::error_code ec;
        beast::get_lowest_layer(ws_).close(ec);
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            const std::string frame = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            if (self->ws_.got_text()) {
                self->send_all(self->session_.handle_frame(frame));
            } else {
                self->send_all({msg::ProtocolError{"bad-message", "binary frames are not accepted"}});
            }
            self->read();
        });
    }

    void arm_timer() {
        timer_.expires_at(next_tick_);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (ec || self->closed_) return;
            self->next_tick_ += self->period_;
            const bool was_running = self->session_.running();
            self->send_all(self->session_.tick());
            if (was_running && !self->session_.running() && self->opts_.on_session_end) {
                self->opts_.on_session_end(self->session_.log());
            }
            self->arm_timer();
        });
    }

    void send_all(const std::vector<ProtocolMessage>& msgs) {
        for (const auto& m : msgs) outbox_.push_back(encode(m));
        if (!writing_) write_next();
    }

    void write_next() {
        if (outbox_.empty() || closed_) {
            writing_ = false;
            return;
        }
        writing_ = true;
        ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            self->outbox_.pop_front();
            self->write_next();
        });
    }

    websocket::stream<tcp::socket> ws_;
    asio::steady_timer timer_;
    const ServerOptions& opts_;
    LiveSession session_;
    std::chrono::steady_clock::duration period_;
    std::chrono::steady_clock::time_point next_tick_;
    beast::flat_buffer buffer_;
    std::deque<std::string> outbox_;
    bool writing_ = false;
    bool closed_ = false;
};

class BeastServer final : public Server {
public:
    explicit BeastServer(ServerOptions opts) : opts_(std::move(opts)), acceptor_(ioc_) {
        if (!(opts_.time_scale > 0.0)) throw Error("invalid-argument", "time_scale must be positive");
        validate(opts_.defaults);
        beast::error_code ec;
        const auto addr = asio::ip::make_address(opts_.address, ec);
        if (ec) throw Error("bind-failure", "bad address '" + opts_.address + "': " + ec.message());
        const tcp::endpoint ep(addr, opts_.port);
        acceptor_.open(ep.protocol(), ec);
        if (!ec) acceptor_.set_option(asio::socket_base::reuse_address(true), ec);
        if (!ec) acceptor_.bind(ep, ec);
        if (!ec) acceptor_.listen(asio::socket_base::max_listen_connections, ec);
        if (ec) {
            throw Error("bind-failure", "cannot listen on " + opts_.address + ":" + std::to_string(opts_.port) + ": " + ec.message());
        }
        port_ = acceptor_.local_endpoint().port();
        accept();
        thread_ = std::thread([this] { ioc_.run(); });
    }

    ~BeastServer() override { stop(); }

    std::uint16_t port() const noexcept override { return port_; }

    void stop() override {
        std::call_once(stop_once_, [this] {
            asio::post(ioc_, [this] {
                beast::error_code ec;
                acceptor_.close(ec);
                for (auto& w : connections_) {
                    if (auto c = w.lock()) c->close();
                }
                ioc_.stop();
            });
            if (thread_.joinable()) thread_.join();
            std::lock_guard lock(mu_);
            stopped_ = true;
            cv_.notify_all();
        });
    }

    void wait() override {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [this] { return stopped_; });
    }

private:
    void accept() {
        acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            auto c = std::make_shared<Connection>(std::move(socket), opts_);
            connections_.remove_if([](const auto& w) { return w.expired(); });
            connections_.push_back(c);
            c->start();
            accept();
        });
    }

    ServerOptions opts_;
    asio::io_context ioc_{1};
    tcp::acceptor acceptor_;
    std::uint16_t port_ = 0;
    std::list<std::weak_ptr<Connection>> connections_;
    std::thread thread_;
    std::once_flag stop_once_;
    std::mutex mu_;
    std::condition_variable cv_;
    bool stopped_ = false;
};

} // namespace

std::unique_ptr<Server> serve(ServerOptions options) { return std::make_unique<BeastServer>(std::move(options)); }

} // namespace gf
