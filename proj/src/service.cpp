#include "gridexp/service.hpp"

#include <ostream>
#include <random>
#include <sstream>

#include "gridexp/cli.hpp"
#include "gridexp/protocols.hpp"
#include "httplib.h"

namespace gridexp {

Json state_json(const Engine& engine, const EngineState& s) {
    const auto& g = s.grid();
    Json pending = Json::array();
    for (int r = 0; r < s.robot_count(); ++r) {
        const auto& slot = s.robots[static_cast<std::size_t>(r)];
        auto at = g.coord(slot.node);
        Json p{{"robot", r}, {"node", {at.x, at.y}}};
        if (slot.pending.computed()) {
            p["status"] = "computed";
            p["targets"] = mask_to_json(g, slot.pending.decision.targets);
            p["snapshot_step"] = slot.pending.snapshot_step;
            p["age"] = s.step - slot.pending.snapshot_step;
        } else {
            p["status"] = "idle";
        }
        pending.push_back(std::move(p));
    }
    Json actions = Json::array();
    for (const auto& a : engine.enabled_actions(s)) {
        Json j = to_json(a);
        if (a.kind == SchedulerAction::Kind::Activate) j["choices"] = a.choices;
        if (a.kind == SchedulerAction::Kind::Move) {
            const auto& d = s.robots[static_cast<std::size_t>(a.robot)].pending.decision;
            auto targets = ordered_targets(d);
            auto to = g.coord(targets[static_cast<std::size_t>(a.tie_break)]);
            j["to"] = {to.x, to.y};
        }
        actions.push_back(std::move(j));
    }
    return {{"grid", std::to_string(g.i) + "x" + std::to_string(g.j)},
            {"model", to_string(s.model)},
            {"mode", to_string(s.mode)},
            {"config", config_to_json(s.config)},
            {"pending", pending},
            {"visited", mask_to_json(g, s.visited)},
            {"explored", s.explored()},
            {"enabled_actions", actions},
            {"quiescent", engine.is_quiescent(s)},
            {"step", s.step}};
}

SessionStore::SessionStore(std::chrono::seconds idle, std::function<Clock::time_point()> now)
    : idle_(idle), now_(std::move(now)), salt_(std::random_device{}()) {
    salt_ = (salt_ << 32) ^ std::random_device{}();
}

std::string SessionStore::fresh_id() {
    std::mt19937_64 mix(salt_ ^ (++counter_ * 0x9e3779b97f4a7c15ULL));
    std::ostringstream out;
    out << std::hex << mix() << counter_;
    return out.str();
}

Json SessionStore::create(const Json& body) {
    TraceHeader h;
    try {
        h.grid = parse_grid(body.at("grid").get<std::string>());
        h.k = body.at("k").get<int>();
        h.protocol = body.at("protocol").get<std::string>();
        h.model = parse_model(body.value("model", std::string("atom")));
        h.mode = parse_multiplicity(body.value("mode", std::string("weak")));
        h.seed = body.value("seed", std::uint64_t{0});
        const auto& info = find_protocol(h.protocol);
        check_instance(info.name, h.grid, h.k);
        if (body.contains("initial") && !body.at("initial").is_null()) {
            h.initial = parse_configuration(h.grid, body.at("initial").get<std::string>());
        } else {
            h.initial = sample_initial(h.grid, h.k, *h.seed);
        }
        if (h.initial.robot_count() != h.k) throw InvalidInitial("initial configuration does not hold k robots");
        Engine engine(info.fn);
        auto s0 = engine.init(h.initial, h.model, h.mode);
        auto session = std::make_shared<Session>(std::move(engine), h, std::move(s0));
        session->last_used = now_();
        Json state = state_json(session->engine, session->state);
        std::lock_guard lock(mu_);
        auto id = fresh_id();
        sessions_.emplace(id, std::move(session));
        return {{"id", id}, {"state", state}};
    } catch (const Json::exception& e) {
        throw HttpError(422, std::string("malformed session request: ") + e.what());
    } catch (const HttpError&) {
        throw;
    } catch (const Error& e) {
        throw HttpError(422, e.what());
    }
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
    expire();
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw HttpError(404, "no session " + id);
    it->second->last_used = now_();
    return it->second;
}

Json SessionStore::get(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    return state_json(s->engine, s->state);
}

Json SessionStore::act(const std::string& id, const Json& body) {
    auto s = find(id);
    SchedulerAction action;
    try {
        action = action_from_json(body.contains("action") ? body.at("action") : body);
    } catch (const ParseError& e) {
        throw HttpError(422, e.what());
    }
    std::lock_guard lock(s->mu);
    try {
        auto [next, event] = s->engine.step(s->state, action);
        s->history.push_back(std::move(s->state));
        s->state = std::move(next);
        s->events.push_back(std::move(event));
    } catch (const SchedulerContract& e) {
        throw HttpError(409, e.what());
    }
    return state_json(s->engine, s->state);
}

Json SessionStore::undo(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    if (s->history.empty()) throw HttpError(409, "nothing to undo");
    s->state = std::move(s->history.back());
    s->history.pop_back();
    s->events.pop_back();
    return state_json(s->engine, s->state);
}

void SessionStore::remove(const std::string& id) {
    std::lock_guard lock(mu_);
    if (sessions_.erase(id) == 0) throw HttpError(404, "no session " + id);
}

std::string SessionStore::trace(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    std::ostringstream out;
    write_trace(out, Trace{s->header, s->events});
    return out.str();
}

Json SessionStore::protocols() {
    Json out = Json::array();
    for (const auto& p : protocol_registry()) {
        if (p.test_only) continue;
        out.push_back({{"name", p.name}, {"summary", p.summary}});
    }
    return out;
}

std::size_t SessionStore::size() {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

std::size_t SessionStore::expire() {
    std::lock_guard lock(mu_);
    auto now = now_();
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (now - it->second->last_used > idle_) {
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const HttpError& e) {
        reply(res, e.status(), {{"error", e.what()}});
    } catch (const Json::exception& e) {
        reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

}  // namespace

void install_routes(httplib::Server& server, SessionStore& store, const std::string& static_dir) {
    server.Get("/meta/protocols", [](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, SessionStore::protocols());
    });
    server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 201, store.create(Json::parse(req.body))); });
    });
    server.Get(R"(/sessions/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, store.get(req.matches[1])); });
    });
    server.Get(R"(/sessions/([^/]+)/trace)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            res.status = 200;
            res.set_content(store.trace(req.matches[1]), "application/x-ndjson");
        });
    });
    server.Post(R"(/sessions/([^/]+)/actions)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, store.act(req.matches[1], Json::parse(req.body))); });
    });
    server.Post(R"(/sessions/([^/]+)/undo)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, store.undo(req.matches[1])); });
    });
    server.Delete(R"(/sessions/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            store.remove(req.matches[1]);
            res.status = 204;
        });
    });
    if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

int serve(const std::string& host, int port, const std::string& static_dir, std::ostream& out) {
    SessionStore store;
    httplib::Server server;
    install_routes(server, store, static_dir);
    out << "serving on http://" << host << ":" << port << std::endl;
    return server.listen(host, port) ? 0 : 1;
}

}  // namespace gridexp
