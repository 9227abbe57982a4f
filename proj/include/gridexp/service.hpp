#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "gridexp/trace.hpp"

namespace httplib {
class Server;
}

namespace gridexp {

/// An error carrying the HTTP status the service answers with.
class HttpError : public Error {
public:
    HttpError(int status, const std::string& msg) : Error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

/// Engine state as the adversary console sees it.
Json state_json(const Engine& engine, const EngineState& s);

/// In-memory sessions, one engine each. Thread safe; actions on one session
/// are serialized.
class SessionStore {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionStore(std::chrono::seconds idle = std::chrono::hours(1),
                          std::function<Clock::time_point()> now = Clock::now);

    /// Body: {grid, k, protocol, model?, mode?, initial?, seed?}.
    /// Returns {id, state}. 422 for unsupported or malformed instances.
    Json create(const Json& body);
    Json get(const std::string& id);
    /// Body: {action}. 409 when the engine rejects the action.
    Json act(const std::string& id, const Json& body);
    Json undo(const std::string& id);
    void remove(const std::string& id);
    /// NDJSON trace of the session so far.
    std::string trace(const std::string& id);
    static Json protocols();

    std::size_t size();
    /// Drops sessions idle for longer than the limit; returns how many.
    std::size_t expire();

private:
    struct Session {
        std::mutex mu;
        Engine engine;
        TraceHeader header;
        EngineState initial;
        EngineState state;
        std::vector<EngineState> history;
        std::vector<TraceEvent> events;
        Clock::time_point last_used;

        Session(Engine e, TraceHeader h, EngineState s0)
            : engine(std::move(e)), header(std::move(h)), initial(s0), state(std::move(s0)) {}
    };

    std::shared_ptr<Session> find(const std::string& id);
    std::string fresh_id();

    std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::chrono::seconds idle_;
    std::function<Clock::time_point()> now_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_;
};

/// Registers the session API on a server.
void install_routes(httplib::Server& server, SessionStore& store, const std::string& static_dir = "");

/// Blocks serving the API; returns a process exit code.
int serve(const std::string& host, int port, const std::string& static_dir, std::ostream& out);

}  // namespace gridexp
