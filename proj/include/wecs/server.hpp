#pragma once

#include <memory>
#include <string>
#include <thread>

#include "wecs/service.hpp"

namespace wecs {

/// Listens on one TCP port and speaks the bench protocol two ways: WebSocket (one
/// message per text frame, for browsers) and raw newline-delimited JSON (for scripts).
/// The transport is chosen from the first byte a client sends: '{' means raw lines,
/// anything else is parsed as an HTTP request and must be a WebSocket upgrade.
class TelemetryServer {
public:
    /// Binds immediately; port 0 picks an ephemeral port. Throws std::system_error on bind failure.
    TelemetryServer(BenchService& service, const std::string& address, unsigned short port);
    ~TelemetryServer();
    TelemetryServer(const TelemetryServer&) = delete;
    TelemetryServer& operator=(const TelemetryServer&) = delete;

    [[nodiscard]] unsigned short port() const;

    /// Serves on the calling thread until stop().
    void run();
    /// Serves on a background thread.
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
};

/// Splits "host:port"; a bare port binds 0.0.0.0. Throws ConfigError.
[[nodiscard]] std::pair<std::string, unsigned short> parse_listen_address(const std::string& text);

}  // namespace wecs
