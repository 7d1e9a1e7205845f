#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"
#include "wecs/config.hpp"
#include "wecs/simulation.hpp"

namespace wecs {

inline constexpr const char* kProtocolId = "wecs-bench/1";

/// Writes CSV rows on a worker thread fed through a queue.
class CsvLogWriter {
public:
    explicit CsvLogWriter(const std::filesystem::path& path);
    ~CsvLogWriter();
    CsvLogWriter(const CsvLogWriter&) = delete;
    CsvLogWriter& operator=(const CsvLogWriter&) = delete;

    void push(const TelemetrySample& sample);
    /// Blocks until every queued row is on disk.
    void flush();

private:
    void run();

    std::ofstream out_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::condition_variable drained_;
    std::deque<TelemetrySample> queue_;
    bool writing_ = false;
    bool stop_ = false;
    std::thread worker_;
};

struct ServiceOptions {
    /// Simulated seconds per wall-clock second; 0 runs as fast as possible.
    double pace = 1.0;
    /// Broadcast every n-th step; 0 derives it from runtime.telemetry_rate_hz.
    long long decimation = 0;
    std::optional<std::filesystem::path> log_path;
};

/// Single owner of the simulation. Commands are queued and applied strictly between
/// steps on the loop thread; telemetry and events go to subscribers as serialized
/// newline-free JSON messages.
class BenchService {
public:
    using Reply = std::function<void(const nlohmann::json&)>;
    using Listener = std::function<void(const std::string&)>;

    BenchService(BenchConfig config, const std::string& scenario, ServiceOptions options = {});
    ~BenchService();
    BenchService(const BenchService&) = delete;
    BenchService& operator=(const BenchService&) = delete;

    /// Starts the loop thread. The bench starts paused.
    void start();
    void stop();

    /// Queues a command message; `reply` is called from the loop thread.
    void submit(nlohmann::json message, Reply reply);

    /// Applies a command immediately on the caller's thread. Only valid when the loop is not running.
    nlohmann::json execute(const nlohmann::json& message);

    /// Hello reply for a client that announced `protocol`; nullopt on mismatch.
    [[nodiscard]] std::optional<nlohmann::json> hello(const std::string& protocol);

    int subscribe(Listener listener);
    void unsubscribe(int id);

    [[nodiscard]] long long decimation() const noexcept { return decimation_; }

private:
    struct Pending {
        nlohmann::json message;
        Reply reply;
    };

    void loop();
    nlohmann::json dispatch(const nlohmann::json& message);
    void advance_one();
    void broadcast(const nlohmann::json& message);
    void reset_pacing();
    [[nodiscard]] nlohmann::json status_json() const;

    BenchConfig config_;
    ServiceOptions options_;
    long long decimation_ = 1;
    std::unique_ptr<Bench> bench_;
    bool running_ = false;
    std::vector<ViolationKind> last_violations_;

    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::deque<Pending> queue_;
    bool stop_ = false;
    std::thread thread_;

    std::mutex listeners_mutex_;
    std::map<int, Listener> listeners_;
    int next_listener_ = 1;

    mutable std::mutex status_mutex_;  // guards bench_ reads from hello()

    std::unique_ptr<CsvLogWriter> log_;
    std::chrono::steady_clock::time_point pace_wall_start_;
    double pace_sim_start_ = 0.0;
};

/// Transport-independent handling of one client connection: the hello handshake,
/// command forwarding and telemetry subscription.
class ClientSession {
public:
    using Send = std::function<void(const std::string&)>;
    using Close = std::function<void()>;

    ClientSession(BenchService& service, Send send, Close close);
    ~ClientSession();
    ClientSession(const ClientSession&) = delete;
    ClientSession& operator=(const ClientSession&) = delete;

    /// One complete message (a line without its newline, or a WebSocket text frame).
    void on_message(const std::string& text);

private:
    BenchService& service_;
    Send send_;
    Close close_;
    bool greeted_ = false;
    int subscription_ = 0;
};

}  // namespace wecs
