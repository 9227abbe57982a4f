#include "gridexp/engine.hpp"

#include <algorithm>
#include <sstream>

namespace gridexp {

std::string to_string(Model m) { return m == Model::Atom ? "atom" : "corda"; }

Model parse_model(std::string_view s) {
    if (s == "atom" || s == "ATOM") return Model::Atom;
    if (s == "corda" || s == "CORDA") return Model::Corda;
    throw ParseError("unknown model '" + std::string(s) + "'");
}

SchedulerAction SchedulerAction::activate(std::vector<int> ids, std::vector<int> tie_breaks) {
    SchedulerAction a;
    a.kind = Kind::Activate;
    a.robots = std::move(ids);
    a.tie_breaks = std::move(tie_breaks);
    return a;
}

SchedulerAction SchedulerAction::look(int id) {
    SchedulerAction a;
    a.kind = Kind::Look;
    a.robot = id;
    return a;
}

SchedulerAction SchedulerAction::move(int id, int tie_break) {
    SchedulerAction a;
    a.kind = Kind::Move;
    a.robot = id;
    a.tie_break = tie_break;
    return a;
}

std::string to_string(const SchedulerAction& a) {
    std::ostringstream out;
    switch (a.kind) {
        case SchedulerAction::Kind::Activate:
            out << "Activate{";
            for (std::size_t n = 0; n < a.robots.size(); ++n) {
                if (n) out << ',';
                out << a.robots[n];
                if (n < a.tie_breaks.size()) out << '/' << a.tie_breaks[n];
            }
            out << '}';
            break;
        case SchedulerAction::Kind::Look: out << "Look(" << a.robot << ')'; break;
        case SchedulerAction::Kind::Move: out << "Move(" << a.robot << ',' << a.tie_break << ')'; break;
    }
    return out.str();
}

Engine::Engine(ProtocolFn protocol) : protocol_(std::move(protocol)) {}

EngineState Engine::init(const Configuration& initial, Model model, Multiplicity mode) const {
    const auto& g = initial.grid();
    int k = initial.robot_count();
    if (k < 1) throw InvalidInitial("initial configuration has no robot");
    if (k > g.node_count()) throw InvalidInitial("more robots than nodes");
    if (!initial.towerless()) throw InvalidInitial("initial configuration contains a tower");
    EngineState s;
    s.model = model;
    s.mode = mode;
    s.config = initial;
    for (int idx = 0; idx < g.node_count(); ++idx) {
        if (initial.at(idx) > 0) {
            s.robots.push_back(RobotSlot{idx, {}});
            s.visited |= bit(idx);
        }
    }
    return s;
}

Decision Engine::decide_at(const Configuration& c, int node, Multiplicity mode) const {
    View v = view_of(c, c.grid().coord(node), mode);
    return decision_orbit(v, protocol_(v));
}

Decision Engine::decide(const EngineState& s, int id) const {
    return decide_at(s.config, s.robots[static_cast<std::size_t>(id)].node, s.mode);
}

std::vector<SchedulerAction> Engine::enabled_actions(const EngineState& s) const {
    std::vector<SchedulerAction> out;
    const int k = s.robot_count();
    if (s.model == Model::Atom) {
        std::vector<int> counts(static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r) counts[static_cast<std::size_t>(r)] = popcount(decide(s, r).targets);
        for (std::uint32_t subset = 1; subset < (1U << k); ++subset) {
            SchedulerAction a;
            a.kind = SchedulerAction::Kind::Activate;
            for (int r = 0; r < k; ++r) {
                if (subset & (1U << r)) {
                    a.robots.push_back(r);
                    a.choices.push_back(counts[static_cast<std::size_t>(r)]);
                }
            }
            out.push_back(std::move(a));
        }
        return out;
    }
    for (int r = 0; r < k; ++r) {
        if (!s.robots[static_cast<std::size_t>(r)].pending.computed()) out.push_back(SchedulerAction::look(r));
    }
    for (int r = 0; r < k; ++r) {
        const auto& p = s.robots[static_cast<std::size_t>(r)].pending;
        if (!p.computed()) continue;
        int m = popcount(p.decision.targets);
        for (int t = 0; t < m; ++t) out.push_back(SchedulerAction::move(r, t));
    }
    return out;
}

std::vector<SchedulerAction> expand_activation(const SchedulerAction& listed) {
    std::vector<SchedulerAction> out;
    std::vector<int> tb(listed.robots.size(), 0);
    while (true) {
        out.push_back(SchedulerAction::activate(listed.robots, tb));
        std::size_t pos = 0;
        for (; pos < tb.size(); ++pos) {
            int limit = std::max(1, listed.choices[pos]);
            if (++tb[pos] < limit) break;
            tb[pos] = 0;
        }
        if (pos == tb.size()) break;
    }
    return out;
}

namespace {

int resolve_target(const Decision& d, int tie_break, const std::string& who) {
    auto targets = ordered_targets(d);
    if (tie_break < 0 || tie_break >= static_cast<int>(targets.size())) {
        throw SchedulerContract("tie-break " + std::to_string(tie_break) + " out of range for " + who);
    }
    return targets[static_cast<std::size_t>(tie_break)];
}

void relocate(EngineState& s, int id, int to) {
    auto& slot = s.robots[static_cast<std::size_t>(id)];
    s.config.add(slot.node, -1);
    s.config.add(to, +1);
    slot.node = to;
    s.visited |= bit(to);
}

void check_id(const EngineState& s, int id) {
    if (id < 0 || id >= s.robot_count()) {
        throw SchedulerContract("unknown robot id " + std::to_string(id));
    }
}

}  // namespace

std::pair<EngineState, TraceEvent> Engine::step(const EngineState& s, const SchedulerAction& a) const {
    EngineState next = s;
    switch (a.kind) {
        case SchedulerAction::Kind::Activate: {
            if (s.model != Model::Atom) throw SchedulerContract("Activate is an ATOM action");
            if (a.robots.empty()) throw SchedulerContract("Activate needs at least one robot");
            if (a.tie_breaks.size() != a.robots.size()) {
                throw SchedulerContract("Activate needs one tie-break per robot");
            }
            std::vector<bool> seen(static_cast<std::size_t>(s.robot_count()), false);
            std::vector<std::pair<int, int>> moves;
            for (std::size_t n = 0; n < a.robots.size(); ++n) {
                int id = a.robots[n];
                check_id(s, id);
                if (seen[static_cast<std::size_t>(id)]) throw SchedulerContract("robot activated twice");
                seen[static_cast<std::size_t>(id)] = true;
                Decision d = decide(s, id);  // every activated robot sees the same snapshot
                if (d.is_stay()) {
                    if (a.tie_breaks[n] != 0) throw SchedulerContract("tie-break given for a Stay decision");
                    continue;
                }
                moves.emplace_back(id, resolve_target(d, a.tie_breaks[n], "robot " + std::to_string(id)));
            }
            for (auto [id, to] : moves) relocate(next, id, to);
            break;
        }
        case SchedulerAction::Kind::Look: {
            if (s.model != Model::Corda) throw SchedulerContract("Look is a CORDA action");
            check_id(s, a.robot);
            auto& slot = next.robots[static_cast<std::size_t>(a.robot)];
            if (slot.pending.computed()) {
                throw SchedulerContract("robot " + std::to_string(a.robot) + " has a pending Move");
            }
            Decision d = decide(s, a.robot);
            if (!d.is_stay()) slot.pending = Pending{d, s.step};
            break;
        }
        case SchedulerAction::Kind::Move: {
            if (s.model != Model::Corda) throw SchedulerContract("Move is a CORDA action");
            check_id(s, a.robot);
            const auto& slot = s.robots[static_cast<std::size_t>(a.robot)];
            if (!slot.pending.computed()) {
                throw SchedulerContract("robot " + std::to_string(a.robot) + " has no pending Move");
            }
            int to = resolve_target(slot.pending.decision, a.tie_break, "robot " + std::to_string(a.robot));
            relocate(next, a.robot, to);
            next.robots[static_cast<std::size_t>(a.robot)].pending = {};
            break;
        }
    }
    next.step = s.step + 1;
    TraceEvent ev{next.step, a, next.config, next.visited, is_quiescent(next)};
    return {std::move(next), std::move(ev)};
}

bool Engine::is_quiescent(const EngineState& s) const {
    for (const auto& r : s.robots) {
        if (r.pending.computed()) return false;
    }
    NodeMask checked = 0;
    for (const auto& r : s.robots) {
        if (has(checked, r.node)) continue;
        checked |= bit(r.node);
        if (!decide_at(s.config, r.node, s.mode).is_stay()) return false;
    }
    return true;
}

std::optional<SchedulerAction> RandomAdversary::next(const Engine& engine, const EngineState& s) {
    const int k = s.robot_count();
    if (s.model == Model::Atom) {
        std::uniform_int_distribution<std::uint32_t> pick_subset(1, (1U << k) - 1);
        std::uint32_t subset = pick_subset(rng_);
        std::vector<int> ids, tbs;
        for (int r = 0; r < k; ++r) {
            if (!(subset & (1U << r))) continue;
            ids.push_back(r);
            int m = popcount(engine.decide(s, r).targets);
            tbs.push_back(m == 0 ? 0 : std::uniform_int_distribution<int>(0, m - 1)(rng_));
        }
        return SchedulerAction::activate(std::move(ids), std::move(tbs));
    }
    auto actions = engine.enabled_actions(s);
    std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
    return actions[pick(rng_)];
}

std::optional<SchedulerAction> SequentialAdversary::next(const Engine&, const EngineState& s) {
    const int k = s.robot_count();
    if (s.model == Model::Atom) {
        int id = cursor_++ % k;
        return SchedulerAction::activate({id}, {0});
    }
    // A Look that produced a Move is completed before anyone else acts.
    for (int r = 0; r < k; ++r) {
        if (s.robots[static_cast<std::size_t>(r)].pending.computed()) return SchedulerAction::move(r, 0);
    }
    return SchedulerAction::look(cursor_++ % k);
}

std::optional<SchedulerAction> SynchronousAdversary::next(const Engine&, const EngineState& s) {
    const int k = s.robot_count();
    if (s.model == Model::Atom) {
        std::vector<int> ids(static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r) ids[static_cast<std::size_t>(r)] = r;
        return SchedulerAction::activate(std::move(ids), std::vector<int>(static_cast<std::size_t>(k), 0));
    }
    if (looked_.size() != static_cast<std::size_t>(k)) looked_.assign(static_cast<std::size_t>(k), false);
    for (int r = 0; r < k; ++r) {
        if (!looked_[static_cast<std::size_t>(r)] && !s.robots[static_cast<std::size_t>(r)].pending.computed()) {
            looked_[static_cast<std::size_t>(r)] = true;
            return SchedulerAction::look(r);
        }
    }
    for (int r = 0; r < k; ++r) {
        if (s.robots[static_cast<std::size_t>(r)].pending.computed()) return SchedulerAction::move(r, 0);
    }
    // Round over: start the next one.
    looked_.assign(static_cast<std::size_t>(k), false);
    looked_[0] = true;
    return SchedulerAction::look(0);
}

std::optional<SchedulerAction> ScriptedAdversary::next(const Engine&, const EngineState&) {
    if (pos_ >= script_.size()) return std::nullopt;
    return script_[pos_++];
}

RunResult run(const Engine& engine, EngineState s, Adversary& adversary, RunLimits limits) {
    RunResult result;
    int taken = 0;
    while (true) {
        if (engine.is_quiescent(s)) {
            result.quiescent = true;
            break;
        }
        if (taken >= limits.max_steps) {
            result.timed_out = true;
            break;
        }
        auto action = adversary.next(engine, s);
        if (!action) break;
        auto [next, ev] = engine.step(s, *action);
        s = std::move(next);
        result.events.push_back(std::move(ev));
        ++taken;
    }
    result.explored = s.explored();
    result.final_state = std::move(s);
    return result;
}

}  // namespace gridexp
