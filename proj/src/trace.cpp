#include "gridexp/trace.hpp"

#include <istream>
#include <ostream>

namespace gridexp {

Json to_json(const SchedulerAction& a) {
    switch (a.kind) {
        case SchedulerAction::Kind::Activate:
            return {{"type", "activate"}, {"robots", a.robots}, {"tie_breaks", a.tie_breaks}};
        case SchedulerAction::Kind::Look: return {{"type", "look"}, {"robot", a.robot}};
        case SchedulerAction::Kind::Move: return {{"type", "move"}, {"robot", a.robot}, {"tie_break", a.tie_break}};
    }
    return {};
}

SchedulerAction action_from_json(const Json& j) {
    try {
        auto type = j.at("type").get<std::string>();
        if (type == "activate") {
            auto robots = j.at("robots").get<std::vector<int>>();
            std::vector<int> tbs(robots.size(), 0);
            if (j.contains("tie_breaks")) tbs = j.at("tie_breaks").get<std::vector<int>>();
            return SchedulerAction::activate(std::move(robots), std::move(tbs));
        }
        if (type == "look") return SchedulerAction::look(j.at("robot").get<int>());
        if (type == "move") return SchedulerAction::move(j.at("robot").get<int>(), j.value("tie_break", 0));
        throw ParseError("unknown action type '" + type + "'");
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed action: ") + e.what());
    }
}

Json config_to_json(const Configuration& c) {
    Json out = Json::array();
    const auto& g = c.grid();
    for (int idx = 0; idx < g.node_count(); ++idx) {
        if (c.at(idx) == 0) continue;
        auto v = g.coord(idx);
        out.push_back({v.x, v.y, c.at(idx)});
    }
    return out;
}

Json mask_to_json(const GridDims& g, NodeMask m) {
    Json out = Json::array();
    for_each_node(m, [&](int idx) {
        auto v = g.coord(idx);
        out.push_back({v.x, v.y});
    });
    return out;
}

Json to_json(const TraceHeader& h) {
    Json j{{"grid", std::to_string(h.grid.i) + "x" + std::to_string(h.grid.j)},
           {"k", h.k},
           {"protocol", h.protocol},
           {"model", to_string(h.model)},
           {"mode", to_string(h.mode)},
           {"initial", format_configuration(h.initial)}};
    j["seed"] = h.seed ? Json(*h.seed) : Json(nullptr);
    return j;
}

TraceHeader header_from_json(const Json& j) {
    try {
        TraceHeader h;
        h.grid = parse_grid(j.at("grid").get<std::string>());
        h.k = j.at("k").get<int>();
        h.protocol = j.at("protocol").get<std::string>();
        h.model = parse_model(j.at("model").get<std::string>());
        h.mode = parse_multiplicity(j.at("mode").get<std::string>());
        h.initial = parse_configuration(h.grid, j.at("initial").get<std::string>());
        if (j.contains("seed") && !j.at("seed").is_null()) h.seed = j.at("seed").get<std::uint64_t>();
        return h;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed trace header: ") + e.what());
    }
}

Json to_json(const TraceEvent& e) {
    return {{"step", e.step},
            {"action", to_json(e.action)},
            {"config", config_to_json(e.config)},
            {"visited", mask_to_json(e.config.grid(), e.visited)},
            {"quiescent", e.quiescent}};
}

void write_trace(std::ostream& out, const Trace& t) {
    out << to_json(t.header).dump() << '\n';
    for (const auto& e : t.events) out << to_json(e).dump() << '\n';
}

namespace {

Configuration config_from_json(const GridDims& g, const Json& j) {
    Configuration c(g);
    for (const auto& atom : j) c.set({atom.at(0).get<int>(), atom.at(1).get<int>()}, atom.at(2).get<int>());
    return c;
}

NodeMask mask_from_json(const GridDims& g, const Json& j) {
    NodeMask m = 0;
    for (const auto& atom : j) m |= bit(g.index({atom.at(0).get<int>(), atom.at(1).get<int>()}));
    return m;
}

}  // namespace

Trace read_trace(std::istream& in) {
    Trace t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw ParseError(std::string("malformed trace line: ") + e.what());
        }
        if (!have_header) {
            t.header = header_from_json(j);
            have_header = true;
            continue;
        }
        try {
            TraceEvent e;
            e.step = j.at("step").get<int>();
            e.action = action_from_json(j.at("action"));
            e.config = config_from_json(t.header.grid, j.at("config"));
            e.visited = mask_from_json(t.header.grid, j.at("visited"));
            e.quiescent = j.at("quiescent").get<bool>();
            t.events.push_back(std::move(e));
        } catch (const Json::exception& e) {
            throw ParseError(std::string("malformed trace event: ") + e.what());
        }
    }
    if (!have_header) throw ParseError("empty trace");
    return t;
}

std::vector<SchedulerAction> read_script(std::istream& in) {
    std::vector<SchedulerAction> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw ParseError(std::string("malformed script line: ") + e.what());
        }
        if (j.contains("grid") && j.contains("initial")) continue;
        out.push_back(action_from_json(j.contains("action") ? j.at("action") : j));
    }
    return out;
}

std::vector<TraceEvent> replay(const Engine& engine, const TraceHeader& h, const std::vector<SchedulerAction>& actions) {
    auto s = engine.init(h.initial, h.model, h.mode);
    std::vector<TraceEvent> out;
    for (const auto& a : actions) {
        auto [next, ev] = engine.step(s, a);
        s = std::move(next);
        out.push_back(std::move(ev));
    }
    return out;
}

bool replay_matches(const Engine& engine, const Trace& t) {
    std::vector<SchedulerAction> actions;
    for (const auto& e : t.events) actions.push_back(e.action);
    auto again = replay(engine, t.header, actions);
    if (again.size() != t.events.size()) return false;
    for (std::size_t n = 0; n < again.size(); ++n) {
        const auto& a = again[n];
        const auto& b = t.events[n];
        if (a.step != b.step || !(a.config == b.config) || a.visited != b.visited || a.quiescent != b.quiescent ||
            !(a.action == b.action))
            return false;
    }
    return true;
}

}  // namespace gridexp
