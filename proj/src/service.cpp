#include "wecs/service.hpp"

#include <algorithm>
#include <cmath>

#include "wecs/error.hpp"

namespace wecs {

using nlohmann::json;

// ---------------------------------------------------------------------------
// CsvLogWriter

CsvLogWriter::CsvLogWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw ConfigError("cannot open log file '" + path.string() + "'");
    out_ << telemetry_csv_header() << '\n';
    worker_ = std::thread([this] { run(); });
}

CsvLogWriter::~CsvLogWriter() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    cv_.notify_all();
    worker_.join();
}

void CsvLogWriter::push(const TelemetrySample& sample) {
    {
        std::lock_guard lock(mutex_);
        queue_.push_back(sample);
    }
    cv_.notify_one();
}

void CsvLogWriter::flush() {
    std::unique_lock lock(mutex_);
    drained_.wait(lock, [this] { return queue_.empty() && !writing_; });
    out_.flush();
}

void CsvLogWriter::run() {
    std::unique_lock lock(mutex_);
    while (true) {
        cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
        if (queue_.empty() && stop_) break;
        std::deque<TelemetrySample> batch;
        batch.swap(queue_);
        writing_ = true;
        lock.unlock();
        for (const auto& s : batch) out_ << telemetry_csv_row(s) << '\n';
        lock.lock();
        writing_ = false;
        drained_.notify_all();
    }
    out_.flush();
}

// ---------------------------------------------------------------------------
// BenchService

namespace {

json error_reply(const json& id, const std::string& code, const std::string& message) {
    return {{"type", "command-reply"}, {"id", id}, {"ok", false}, {"error", {{"code", code}, {"message", message}}}};
}

json ok_reply(const json& id, json result) {
    return {{"type", "command-reply"}, {"id", id}, {"ok", true}, {"result", std::move(result)}};
}

double number_arg(const json& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end() || !it->is_number()) throw ConfigError(std::string("argument '") + key + "' must be a number");
    return it->get<double>();
}

// Empty when the key is missing or not a string.
std::string string_field(const json& message, const char* key) {
    if (!message.is_object()) return {};
    auto it = message.find(key);
    return it != message.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

json event(const char* kind, const TelemetrySample& s, json detail = json::object()) {
    return {{"type", "event"}, {"kind", kind}, {"step", s.step}, {"t", s.t}, {"detail", std::move(detail)}};
}

}  // namespace

BenchService::BenchService(BenchConfig config, const std::string& scenario, ServiceOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
    config_.validate();
    bench_ = std::make_unique<Bench>(config_, config_.scenario(scenario));
    const double dt = bench_->scenario().dt;
    decimation_ = options_.decimation > 0
                      ? options_.decimation
                      : std::max(1LL, std::llround(1.0 / (config_.runtime.telemetry_rate_hz * dt)));
    if (options_.log_path) {
        log_ = std::make_unique<CsvLogWriter>(*options_.log_path);
        log_->push(bench_->last_sample());
    }
}

BenchService::~BenchService() { stop(); }

void BenchService::start() {
    if (thread_.joinable()) return;
    {
        std::lock_guard lock(queue_mutex_);
        stop_ = false;
    }
    thread_ = std::thread([this] { loop(); });
}

void BenchService::stop() {
    {
        std::lock_guard lock(queue_mutex_);
        stop_ = true;
    }
    queue_cv_.notify_all();
    if (thread_.joinable()) thread_.join();
    if (log_) log_->flush();
}

void BenchService::submit(json message, Reply reply) {
    {
        std::lock_guard lock(queue_mutex_);
        queue_.push_back({std::move(message), std::move(reply)});
    }
    queue_cv_.notify_all();
}

json BenchService::execute(const json& message) {
    std::lock_guard lock(status_mutex_);
    return dispatch(message);
}

std::optional<json> BenchService::hello(const std::string& protocol) {
    if (protocol != kProtocolId) return std::nullopt;
    std::lock_guard lock(status_mutex_);
    json names = json::array();
    for (const auto& [name, s] : config_.scenarios) names.push_back(name);
    return json{{"type", "hello"},
                {"protocol", kProtocolId},
                {"telemetry_decimation", decimation_},
                {"scenarios", names},
                {"status", status_json()}};
}

int BenchService::subscribe(Listener listener) {
    std::lock_guard lock(listeners_mutex_);
    const int id = next_listener_++;
    listeners_.emplace(id, std::move(listener));
    return id;
}

void BenchService::unsubscribe(int id) {
    std::lock_guard lock(listeners_mutex_);
    listeners_.erase(id);
}

void BenchService::broadcast(const json& message) {
    const std::string text = message.dump();
    std::lock_guard lock(listeners_mutex_);
    for (auto& [id, listener] : listeners_) listener(text);
}

void BenchService::reset_pacing() {
    pace_wall_start_ = std::chrono::steady_clock::now();
    pace_sim_start_ = bench_->state().t;
}

json BenchService::status_json() const {
    const Scenario& sc = bench_->scenario();
    return {{"running", running_},
            {"scenario", sc.name},
            {"mode", std::string(to_string(sc.mode))},
            {"setpoint", sc.setpoint ? json(*sc.setpoint) : json(nullptr)},
            {"dt", sc.dt},
            {"sample", to_json(bench_->last_sample())}};
}

void BenchService::advance_one() {
    const bool was_tripped = bench_->state().converter.trip_latched;
    const TelemetrySample* sample = nullptr;
    try {
        sample = &bench_->step();
    } catch (const SimulationError& e) {
        running_ = false;
        broadcast(event("error", bench_->last_sample(), {{"message", e.what()}}));
        return;
    }
    if (log_) log_->push(*sample);
    if (sample->trip_latched && !was_tripped) {
        json violations = json::array();
        for (auto v : sample->violations) violations.push_back(std::string(to_string(v)));
        broadcast(event("trip", *sample, {{"u_star", sample->u_star}, {"violations", violations}}));
    }
    if (!sample->violations.empty() && sample->violations != last_violations_) {
        json violations = json::array();
        for (auto v : sample->violations) violations.push_back(std::string(to_string(v)));
        broadcast(event("violation", *sample, {{"violations", violations}}));
    }
    last_violations_ = sample->violations;
    if (sample->step % decimation_ == 0) broadcast({{"type", "telemetry"}, {"sample", to_json(*sample)}});
}

json BenchService::dispatch(const json& message) {
    const json id = message.is_object() && message.contains("id") ? message.at("id") : json(nullptr);
    if (!message.is_object() || string_field(message, "type") != "command")
        return error_reply(id, "malformed", "expected a command message");
    if (!(id.is_string() || id.is_number_integer()))
        return error_reply(id, "malformed", "command id must be a string or integer");
    const auto name_it = message.find("name");
    if (name_it == message.end() || !name_it->is_string())
        return error_reply(id, "malformed", "command name must be a string");
    const std::string name = name_it->get<std::string>();
    const json args = message.contains("args") ? message.at("args") : json::object();
    if (!args.is_object()) return error_reply(id, "malformed", "args must be an object");

    try {
        if (name == "status") return ok_reply(id, status_json());
        if (name == "list_scenarios") {
            json names = json::array();
            for (const auto& [n, s] : config_.scenarios) names.push_back(n);
            return ok_reply(id, names);
        }
        if (name == "load_scenario") {
            auto it = args.find("name");
            if (it == args.end() || !it->is_string()) throw ConfigError("argument 'name' must be a string");
            auto next = std::make_unique<Bench>(config_, config_.scenario(it->get<std::string>()));
            bench_ = std::move(next);
            running_ = false;
            last_violations_.clear();
            if (log_) log_->push(bench_->last_sample());
            broadcast(event("scenario_loaded", bench_->last_sample(), {{"scenario", bench_->scenario().name}}));
            return ok_reply(id, status_json());
        }
        if (name == "start") {
            running_ = true;
            reset_pacing();
            return ok_reply(id, status_json());
        }
        if (name == "pause") {
            running_ = false;
            return ok_reply(id, status_json());
        }
        if (name == "step") {
            if (running_) return error_reply(id, "invalid_state", "step is only allowed while paused");
            double count = 1;
            if (args.contains("count")) count = number_arg(args, "count");
            if (!(count >= 1 && count <= 1e7) || count != std::floor(count))
                throw ConfigError("argument 'count' must be an integer in [1, 1e7]");
            for (long long k = 0; k < static_cast<long long>(count); ++k) advance_one();
            return ok_reply(id, status_json());
        }
        if (name == "set_wind") {
            bench_->set_wind(number_arg(args, "v"));
            return ok_reply(id, status_json());
        }
        if (name == "inject_gust") {
            bench_->inject_gust(number_arg(args, "amplitude"), number_arg(args, "duration"));
            return ok_reply(id, status_json());
        }
        if (name == "set_mode") {
            auto it = args.find("mode");
            if (it == args.end() || !it->is_string()) throw ConfigError("argument 'mode' must be a string");
            std::optional<double> setpoint;
            if (args.contains("setpoint") && !args.at("setpoint").is_null()) setpoint = number_arg(args, "setpoint");
            bench_->set_mode(parse_operating_mode(it->get<std::string>()), setpoint);
            return ok_reply(id, status_json());
        }
        if (name == "set_setpoint") {
            bench_->set_setpoint(number_arg(args, "value"));
            return ok_reply(id, status_json());
        }
        if (name == "trip") {
            const bool was = bench_->state().converter.trip_latched;
            bench_->trip();
            if (!was) broadcast(event("trip", bench_->last_sample(), {{"reason", "operator"}}));
            return ok_reply(id, status_json());
        }
        if (name == "trip_reset") {
            if (!bench_->reset_trip()) return error_reply(id, "not_tripped", "no trip is latched");
            broadcast(event("reset", bench_->last_sample()));
            return ok_reply(id, status_json());
        }
        return error_reply(id, "unknown_command", "unknown command '" + name + "'");
    } catch (const Error& e) {
        return error_reply(id, "invalid_argument", e.what());
    }
}

void BenchService::loop() {
    while (true) {
        std::deque<Pending> batch;
        {
            std::unique_lock lock(queue_mutex_);
            bool running = false;
            {
                std::lock_guard status(status_mutex_);
                running = running_;
            }
            if (!running) queue_cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
            if (stop_) break;
            batch.swap(queue_);
        }
        {
            std::lock_guard status(status_mutex_);
            for (auto& p : batch) {
                const json reply = dispatch(p.message);
                if (p.reply) p.reply(reply);
            }
            if (!running_) continue;
            advance_one();
        }
        if (options_.pace > 0.0) {
            const double sim_elapsed = bench_->state().t - pace_sim_start_;
            const auto target = pace_wall_start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                       std::chrono::duration<double>(sim_elapsed / options_.pace));
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait_until(lock, target, [this] { return stop_ || !queue_.empty(); });
        }
    }
}

// ---------------------------------------------------------------------------
// ClientSession

ClientSession::ClientSession(BenchService& service, Send send, Close close)
    : service_(service), send_(std::move(send)), close_(std::move(close)) {}

ClientSession::~ClientSession() {
    if (subscription_ != 0) service_.unsubscribe(subscription_);
}

void ClientSession::on_message(const std::string& text) {
    json message;
    try {
        message = json::parse(text);
    } catch (const json::parse_error&) {
        send_(error_reply(nullptr, "malformed", "message is not valid JSON").dump());
        return;
    }
    const std::string type = string_field(message, "type");
    if (type == "hello") {
        const std::string protocol = string_field(message, "protocol");
        auto reply = service_.hello(protocol);
        if (!reply) {
            send_(json{{"type", "hello"},
                       {"ok", false},
                       {"error",
                        {{"code", "protocol_mismatch"},
                         {"message", "server speaks " + std::string(kProtocolId) + ", client sent '" + protocol + "'"}}}}
                      .dump());
            if (close_) close_();
            return;
        }
        (*reply)["ok"] = true;
        send_(reply->dump());
        if (!greeted_) {
            greeted_ = true;
            subscription_ = service_.subscribe(send_);
        }
        return;
    }
    const json id = message.is_object() && message.contains("id") ? message.at("id") : json(nullptr);
    if (!greeted_) {
        send_(error_reply(id, "not_greeted", "send hello first").dump());
        return;
    }
    if (type != "command") {
        send_(error_reply(id, "malformed", "unknown message type '" + type + "'").dump());
        return;
    }
    Send send = send_;
    service_.submit(std::move(message), [send](const json& reply) { send(reply.dump()); });
}

}  // namespace wecs
