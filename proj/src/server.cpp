#include "wecs/server.hpp"

#include <array>
#include <deque>
#include <string_view>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "wecs/error.hpp"

namespace wecs {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kMaxOutbox = 4096;

bool is_telemetry(const std::string& message) {
    return message.find("\"type\":\"telemetry\"") != std::string::npos;
}

/// Outbound queue plus the protocol session; Derived supplies do_write/do_close.
template <class Derived>
class SessionBase : public std::enable_shared_from_this<Derived> {
public:
    SessionBase(net::io_context& ioc, BenchService& service) : ioc_(ioc), service_(service) {}

protected:
    void open_protocol() {
        std::weak_ptr<Derived> weak = this->shared_from_this();
        net::io_context& ioc = ioc_;
        auto send = [weak, &ioc](const std::string& message) {
            net::post(ioc, [weak, message] {
                if (auto self = weak.lock()) self->deliver(message);
            });
        };
        auto close = [weak, &ioc] {
            net::post(ioc, [weak] {
                if (auto self = weak.lock()) self->request_close();
            });
        };
        protocol_ = std::make_unique<ClientSession>(service_, send, close);
    }

    void handle_text(std::string_view text) {
        while (!text.empty()) {
            const auto eol = text.find('\n');
            std::string line(text.substr(0, eol));
            text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && protocol_) protocol_->on_message(line);
        }
    }

    void shutdown_protocol() { protocol_.reset(); }

    void write_done(beast::error_code ec) {
        if (ec) {
            shutdown_protocol();
            return;
        }
        outbox_.pop_front();
        if (!outbox_.empty()) {
            static_cast<Derived*>(this)->do_write(outbox_.front());
        } else if (closing_) {
            static_cast<Derived*>(this)->do_close();
        }
    }

public:
    void deliver(const std::string& message) {
        if (closing_) return;
        if (outbox_.size() >= kMaxOutbox && is_telemetry(message)) return;
        outbox_.push_back(message + "\n");
        if (outbox_.size() == 1) static_cast<Derived*>(this)->do_write(outbox_.front());
    }

    void request_close() {
        closing_ = true;
        if (outbox_.empty()) static_cast<Derived*>(this)->do_close();
    }

protected:
    net::io_context& ioc_;
    BenchService& service_;
    std::unique_ptr<ClientSession> protocol_;
    std::deque<std::string> outbox_;
    bool closing_ = false;
};

class LineSession : public SessionBase<LineSession> {
public:
    LineSession(tcp::socket socket, std::string initial, net::io_context& ioc, BenchService& service)
        : SessionBase(ioc, service), socket_(std::move(socket)), buffer_(std::move(initial)) {}

    void begin() {
        open_protocol();
        read_lines();
    }

    void do_write(const std::string& message) {
        net::async_write(socket_, net::buffer(message),
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->write_done(ec); });
    }

    void do_close() {
        beast::error_code ec;
        socket_.shutdown(tcp::socket::shutdown_both, ec);
        socket_.close(ec);
        shutdown_protocol();
    }

private:
    void read_lines() {
        net::async_read_until(socket_, net::dynamic_buffer(buffer_), '\n',
                              [self = shared_from_this()](beast::error_code ec, std::size_t n) {
                                  if (ec) {
                                      self->shutdown_protocol();
                                      return;
                                  }
                                  const std::string chunk = self->buffer_.substr(0, n);
                                  self->buffer_.erase(0, n);
                                  self->handle_text(chunk);
                                  self->read_lines();
                              });
    }

    tcp::socket socket_;
    std::string buffer_;
};

class WsSession : public SessionBase<WsSession> {
public:
    WsSession(tcp::socket socket, net::io_context& ioc, BenchService& service)
        : SessionBase(ioc, service), ws_(std::move(socket)) {}

    void begin(http::request<http::string_body> request) {
        ws_.text(true);
        ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->open_protocol();
            self->read_frame();
        });
    }

    void do_write(const std::string& message) {
        ws_.async_write(net::buffer(message),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) { self->write_done(ec); });
    }

    void do_close() {
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) { self->shutdown_protocol(); });
    }

private:
    void read_frame() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->shutdown_protocol();
                return;
            }
            const std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->handle_text(text);
            self->read_frame();
        });
    }

    websocket::stream<tcp::socket> ws_;
    beast::flat_buffer buffer_;
};

/// Peeks at the first bytes to pick the transport.
class Detector : public std::enable_shared_from_this<Detector> {
public:
    Detector(tcp::socket socket, net::io_context& ioc, BenchService& service)
        : socket_(std::move(socket)), ioc_(ioc), service_(service) {}

    void begin() {
        socket_.async_read_some(net::buffer(scratch_), [self = shared_from_this()](beast::error_code ec, std::size_t n) {
            if (ec) return;
            self->initial_.append(self->scratch_.data(), n);
            self->classify();
        });
    }

private:
    void classify() {
        const auto first = initial_.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            begin();
            return;
        }
        if (initial_[first] == '{') {
            std::make_shared<LineSession>(std::move(socket_), std::move(initial_), ioc_, service_)->begin();
            return;
        }
        buffer_.commit(net::buffer_copy(buffer_.prepare(initial_.size()), net::buffer(initial_)));
        http::async_read(socket_, buffer_, request_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return;
            self->route();
        });
    }

    void route() {
        if (websocket::is_upgrade(request_)) {
            std::make_shared<WsSession>(std::move(socket_), ioc_, service_)->begin(std::move(request_));
            return;
        }
        auto response = std::make_shared<http::response<http::string_body>>(http::status::upgrade_required,
                                                                            request_.version());
        response->set(http::field::content_type, "text/plain");
        response->body() = std::string("wecs bench: connect with a WebSocket or send newline-delimited JSON (") +
                           kProtocolId + ")\n";
        response->prepare_payload();
        http::async_write(socket_, *response, [self = shared_from_this(), response](beast::error_code, std::size_t) {
            beast::error_code ignored;
            self->socket_.shutdown(tcp::socket::shutdown_both, ignored);
        });
    }

    tcp::socket socket_;
    net::io_context& ioc_;
    BenchService& service_;
    std::array<char, 512> scratch_{};
    std::string initial_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
};

}  // namespace

struct TelemetryServer::Impl {
    Impl(BenchService& svc, const std::string& address, unsigned short port)
        : service(svc), acceptor(ioc, tcp::endpoint(net::ip::make_address(address), port)) {}

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            std::make_shared<Detector>(std::move(socket), ioc, service)->begin();
            accept();
        });
    }

    BenchService& service;
    net::io_context ioc;
    tcp::acceptor acceptor;
    bool accepting = false;
};

TelemetryServer::TelemetryServer(BenchService& service, const std::string& address, unsigned short port)
    : impl_(std::make_unique<Impl>(service, address, port)) {}

TelemetryServer::~TelemetryServer() { stop(); }

unsigned short TelemetryServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void TelemetryServer::run() {
    if (!impl_->accepting) {
        impl_->accepting = true;
        impl_->accept();
    }
    impl_->ioc.run();
}

void TelemetryServer::start() {
    if (thread_.joinable()) return;
    if (!impl_->accepting) {
        impl_->accepting = true;
        impl_->accept();
    }
    thread_ = std::thread([this] { impl_->ioc.run(); });
}

void TelemetryServer::stop() {
    impl_->ioc.stop();
    if (thread_.joinable()) thread_.join();
}

std::pair<std::string, unsigned short> parse_listen_address(const std::string& text) {
    const auto colon = text.rfind(':');
    std::string host = colon == std::string::npos ? "0.0.0.0" : text.substr(0, colon);
    const std::string port_text = colon == std::string::npos ? text : text.substr(colon + 1);
    if (host.empty()) host = "0.0.0.0";
    if (host == "localhost") host = "127.0.0.1";
    try {
        std::size_t used = 0;
        const unsigned long port = std::stoul(port_text, &used);
        if (used != port_text.size() || port > 65535) throw ConfigError("");
        return {host, static_cast<unsigned short>(port)};
    } catch (const std::exception&) {
        throw ConfigError("invalid listen address '" + text + "', expected host:port");
    }
}

}  // namespace wecs
