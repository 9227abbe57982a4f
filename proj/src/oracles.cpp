#include "gridexp/oracles.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gridexp/verifier.hpp"

namespace gridexp {

namespace {

const GridDims kSquare3{3, 3};

Json coord_json(NodeCoord c) { return Json::array({c.x, c.y}); }

Json coords_json(const std::vector<NodeCoord>& v) {
    Json out = Json::array();
    for (auto c : v) out.push_back(coord_json(c));
    return out;
}

std::vector<std::uint8_t> class_of(NodeCoord tower, NodeCoord robot) {
    Configuration c(kSquare3);
    c.set(tower, 2);
    c.set(robot, 1);
    return canonical_form(c).representative.counts();
}

struct WalkSearch {
    const WalkFilter& allowed;
    WalkBoundResult& best;
    NodeCoord tower{};
    std::vector<NodeCoord> walk;
    std::set<std::vector<std::uint8_t>> seen;

    int new_count(NodeCoord extra, bool with_extra) const {
        NodeMask m = 0;
        for (std::size_t n = 1; n < walk.size(); ++n) m |= bit(kSquare3.index(walk[n]));
        if (with_extra) m |= bit(kSquare3.index(extra));
        m &= ~bit(kSquare3.index(walk.front()));
        m &= ~bit(kSquare3.index(tower));
        return popcount(m);
    }

    void dfs() {
        ++best.walks;
        int now = new_count({}, false);
        if (now > best.max_new_visited) {
            best.max_new_visited = now;
            best.tower = tower;
            best.witness_walk = walk;
        }
        if (now > best.post_repetition_max) {
            best.post_repetition_max = now;
            best.post_repetition_witness = walk;
        }
        auto here = walk.back();
        for (auto next : neighbors(kSquare3, here)) {
            if (next == tower) continue;
            if (allowed && !allowed(tower, here, next)) continue;
            auto cls = class_of(tower, next);
            if (seen.count(cls)) {
                int stuck = new_count(next, true);
                if (stuck > best.post_repetition_max) {
                    best.post_repetition_max = stuck;
                    best.post_repetition_witness = walk;
                    best.post_repetition_witness.push_back(next);
                }
                continue;
            }
            seen.insert(cls);
            walk.push_back(next);
            dfs();
            walk.pop_back();
            seen.erase(cls);
        }
    }
};

}  // namespace

WalkBoundResult tower_walk_bound(const WalkFilter& allowed) {
    WalkBoundResult r;
    std::set<std::vector<std::uint8_t>> classes;
    for (int t = 0; t < kSquare3.node_count(); ++t) {
        for (int p = 0; p < kSquare3.node_count(); ++p) {
            if (p == t) continue;
            auto tower = kSquare3.coord(t), start = kSquare3.coord(p);
            classes.insert(class_of(tower, start));
            WalkSearch s{allowed, r, tower, {start}, {class_of(tower, start)}};
            s.dfs();
        }
    }
    r.class_count = static_cast<int>(classes.size());
    if (r.witness_walk.empty()) r.witness_walk = {};
    return r;
}

Json to_json(const WalkBoundResult& r) {
    return {{"grid", "3x3"},
            {"max_new_visited", r.max_new_visited},
            {"tower", coord_json(r.tower)},
            {"witness_walk", coords_json(r.witness_walk)},
            {"class_count", r.class_count},
            {"walks_enumerated", r.walks},
            {"post_repetition_max", r.post_repetition_max},
            {"post_repetition_witness", coords_json(r.post_repetition_witness)}};
}

Json tower_walk_certificate() {
    auto r = tower_walk_bound();
    return {{"certificate", "tower-walk"},
            {"command", "gridexp oracle tower-walk"},
            {"claim", "a single robot walking beside an immobile 2-tower on the (3,3) grid visits at most 4 new "
                      "nodes before repeating a configuration class"},
            {"bound", 4},
            {"holds", r.max_new_visited <= 4},
            {"result", to_json(r)}};
}

// ---------------------------------------------------------------------------
// k-tower game

namespace {

struct TowerGame {
    SymmetryTable sym{kSquare3};
    // Placement class of a tower node: 0 center, 1 border-middle, 2 corner.
    static int placement(NodeCoord t) {
        int d = degree(kSquare3, t);
        return d == 4 ? 0 : (d == 3 ? 1 : 2);
    }
    static NodeCoord representative(int cls) {
        return cls == 0 ? NodeCoord{1, 1} : (cls == 1 ? NodeCoord{1, 0} : NodeCoord{0, 0});
    }

    // Destination orbits of the representative tower of each class.
    std::vector<std::vector<NodeMask>> orbits = std::vector<std::vector<NodeMask>>(3);

    explicit TowerGame(int k) {
        for (int cls = 0; cls < 3; ++cls) {
            auto t = representative(cls);
            View v = view_of([&] {
                Configuration c(kSquare3);
                c.set(t, k);
                return c;
            }(), t, Multiplicity::Strong);
            auto stab = stabilizer(v);
            NodeMask done = 0;
            for (auto n : neighbors(kSquare3, t)) {
                int idx = kSquare3.index(n);
                if (has(done, idx)) continue;
                NodeMask orbit = 0;
                for (const auto& f : stab) orbit |= bit(kSquare3.index(f.apply(kSquare3, n)));
                done |= orbit;
                orbits[static_cast<std::size_t>(cls)].push_back(orbit);
            }
        }
    }

    // Destinations of a tower at t when its class plays option `opt`
    // (0 = Stay, otherwise orbit opt-1 of the representative, transported).
    NodeMask destinations(int t_index, const std::vector<int>& choice) const {
        auto t = kSquare3.coord(t_index);
        int cls = placement(t);
        int opt = choice[static_cast<std::size_t>(cls)];
        if (opt == 0) return 0;
        auto rep = kSquare3.index(representative(cls));
        for (std::size_t e = 0; e < sym.size(); ++e) {
            if (sym.map(e, rep) != t_index) continue;
            return sym.map_mask(e, orbits[static_cast<std::size_t>(cls)][static_cast<std::size_t>(opt - 1)]);
        }
        return 0;
    }

    // Fewest new nodes the adversary can concede from (t, visited) when the
    // tower moves as one unit forever (or stays).
    int value(int t, NodeMask visited, const std::vector<int>& choice, std::map<std::pair<int, NodeMask>, int>& memo) const {
        // States sharing `visited` form a zero-cost graph; solve it as a whole.
        auto key = std::pair{t, visited};
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<int> nodes;
        for_each_node(visited, [&](int v) { nodes.push_back(v); });
        std::map<int, int> val;
        std::map<int, std::vector<int>> zero;
        for (int v : nodes) {
            NodeMask d = destinations(v, choice);
            int best = d == 0 ? 0 : 1 << 20;
            for_each_node(d, [&](int u) {
                if (has(visited, u)) {
                    zero[v].push_back(u);
                } else {
                    best = std::min(best, 1 + value(u, visited | bit(u), choice, memo));
                }
            });
            val[v] = best;
        }
        // A zero-cost cycle lets the adversary loop forever for free.
        std::map<int, std::set<int>> reach;
        for (int v : nodes) {
            std::vector<int> stack = zero[v];
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                if (!reach[v].insert(u).second) continue;
                for (int w : zero[u]) stack.push_back(w);
            }
        }
        for (int v : nodes) {
            bool loops = reach[v].count(v) > 0;
            for (int u : reach[v]) loops = loops || reach[u].count(u) > 0;
            if (loops) val[v] = 0;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v : nodes)
                for (int u : zero[v])
                    if (val[u] < val[v]) {
                        val[v] = val[u];
                        changed = true;
                    }
        }
        for (int v : nodes) memo[{v, visited}] = val[v];
        return memo.at(key);
    }
};

}  // namespace

FullTowerReport full_tower_analysis(int k) {
    if (k < 2) throw PreconditionFailed("a tower needs k >= 2 robots");
    TowerGame game(k);
    FullTowerReport r;
    r.k = k;
    const char* names[] = {"center", "border-middle", "corner"};
    std::vector<std::vector<int>> protocols;
    for (int a = 0; a <= static_cast<int>(game.orbits[0].size()); ++a)
        for (int b = 0; b <= static_cast<int>(game.orbits[1].size()); ++b)
            for (int c = 0; c <= static_cast<int>(game.orbits[2].size()); ++c) protocols.push_back({a, b, c});
    for (int cls = 0; cls < 3; ++cls) {
        TowerPlacement p;
        p.name = names[cls];
        p.tower = TowerGame::representative(cls);
        int t = kSquare3.index(p.tower);
        NodeMask preds = neighbor_mask(kSquare3, t);
        for (std::size_t o = 0; o < game.orbits[static_cast<std::size_t>(cls)].size(); ++o) {
            TowerOrbit orbit;
            NodeMask m = game.orbits[static_cast<std::size_t>(cls)][o];
            for_each_node(m, [&](int v) { orbit.destinations.push_back(kSquare3.coord(v)); });
            // The tower arrived from some neighbor; that node is visited.
            orbit.adversary_undoes = true;
            for_each_node(preds, [&](int u) {
                if (!has(m, u)) orbit.adversary_undoes = false;
            });
            // Moving into an orbit that contains every possible predecessor
            // lets the adversary replay the previous configuration forever,
            // so a terminating protocol cannot take it.
            NodeMask starts = orbit.adversary_undoes ? 0 : preds;
            for_each_node(starts, [&](int u) {
                for (const auto& proto : protocols) {
                    if (proto[static_cast<std::size_t>(cls)] != static_cast<int>(o) + 1) continue;
                    std::map<std::pair<int, NodeMask>, int> memo;
                    orbit.new_nodes = std::max(orbit.new_nodes, game.value(t, bit(t) | bit(u), proto, memo));
                }
            });
            p.new_nodes = std::max(p.new_nodes, orbit.new_nodes);
            p.orbits.push_back(std::move(orbit));
        }
        r.bound = std::max(r.bound, p.new_nodes);
        r.placements.push_back(std::move(p));
    }
    return r;
}

Json to_json(const FullTowerReport& r) {
    Json placements = Json::array();
    for (const auto& p : r.placements) {
        Json orbits = Json::array();
        for (const auto& o : p.orbits)
            orbits.push_back({{"destinations", coords_json(o.destinations)},
                              {"adversary_undoes", o.adversary_undoes},
                              {"new_nodes", o.new_nodes}});
        placements.push_back({{"placement", p.name},
                              {"tower", coord_json(p.tower)},
                              {"orbits", orbits},
                              {"new_nodes", p.new_nodes},
                              {"exception", p.new_nodes > 0}});
    }
    return {{"certificate", "full-tower"},
            {"command", "gridexp oracle full-tower --k " + std::to_string(r.k)},
            {"grid", "3x3"},
            {"k", r.k},
            {"placements", placements},
            {"bound", r.bound}};
}

// ---------------------------------------------------------------------------
// Protocol-space search

namespace {

struct ClassKey {
    std::vector<std::uint8_t> labels;
    int self = 0;
    auto operator<=>(const ClassKey&) const = default;
};

struct Canon {
    ClassKey key;
    std::size_t elem = 0;  // key = elem(view)
};

Canon canon(const SymmetryTable& sym, const std::vector<std::uint8_t>& labels, int self) {
    Canon best;
    std::vector<std::uint8_t> cur(labels.size());
    for (std::size_t e = 0; e < sym.size(); ++e) {
        for (std::size_t v = 0; v < labels.size(); ++v)
            cur[static_cast<std::size_t>(sym.map(e, static_cast<int>(v)))] = labels[v];
        ClassKey k{cur, sym.map(e, self)};
        if (e == 0 || k < best.key) best = {k, e};
    }
    return best;
}

void multisets(int n, int k, std::vector<std::uint8_t>& cur, int from, std::vector<std::vector<std::uint8_t>>& out) {
    if (k == 0) {
        out.push_back(cur);
        return;
    }
    for (int v = from; v < n; ++v) {
        ++cur[static_cast<std::size_t>(v)];
        multisets(n, k - 1, cur, v, out);
        --cur[static_cast<std::size_t>(v)];
    }
}

}  // namespace

SearchReport search_protocol_space(const GridDims& g, int k, const SearchOptions& opt) {
    SearchReport r;
    r.grid = g;
    r.k = k;
    const int n = g.node_count();
    if (k < 1 || k > n) throw PreconditionFailed("k must be between 1 and the node count");
    SymmetryTable sym(g);

    std::map<ClassKey, std::size_t> index;
    std::vector<std::vector<NodeMask>> options;
    std::vector<std::vector<std::uint8_t>> configs;
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(n), 0);
    multisets(n, k, cur, 0, configs);
    for (const auto& labels : configs) {
        for (int self = 0; self < n; ++self) {
            if (labels[static_cast<std::size_t>(self)] == 0) continue;
            auto c = canon(sym, labels, self);
            if (index.count(c.key)) continue;
            index.emplace(c.key, options.size());
            View v{g, Multiplicity::Strong, c.key.labels, c.key.self};
            auto stab = stabilizer(v);
            std::vector<NodeMask> opts{0};
            NodeMask done = 0;
            for_each_node(neighbor_mask(g, c.key.self), [&](int u) {
                if (has(done, u)) return;
                NodeMask orbit = 0;
                for (const auto& f : stab) orbit |= bit(g.index(f.apply(g, g.coord(u))));
                done |= orbit;
                opts.push_back(orbit);
            });
            options.push_back(std::move(opts));
            if (options.size() > opt.cap) {
                r.within_cap = false;
                r.refusal = "the " + to_string(g) + " grid with k = " + std::to_string(k) + " has more than " +
                            std::to_string(opt.cap) + " view classes";
                return r;
            }
        }
    }
    r.classes.resize(options.size());
    for (const auto& [key, idx] : index) {
        Configuration c(g);
        for (int v = 0; v < n; ++v) c.add(v, key.labels[static_cast<std::size_t>(v)]);
        auto& info = r.classes[idx];
        info.configuration = format_configuration(c);
        info.self = g.coord(key.self);
        for (auto m : options[idx]) {
            std::vector<NodeCoord> dests;
            for_each_node(m, [&](int v) { dests.push_back(g.coord(v)); });
            info.options.push_back(std::move(dests));
        }
        if (options[idx].size() > opt.max_options) {
            r.within_cap = false;
            r.refusal = "a view class has more than " + std::to_string(opt.max_options) + " decision options";
            return r;
        }
    }

    std::vector<int> choice(options.size(), 0);
    auto protocol = [&](const View& v) {
        auto c = canon(sym, v.labels, v.self);
        auto idx = index.at(c.key);
        NodeMask m = options[idx][static_cast<std::size_t>(choice[idx])];
        return Decision::move(sym.map_mask(sym.inverse_of(c.elem), m));
    };
    VerifyOptions vo;
    vo.model = Model::Atom;
    vo.mode = Multiplicity::Strong;
    while (true) {
        ++r.protocols;
        auto report = verify_exhaustive(g, k, "table", protocol, vo);
        ProtocolWitness w;
        w.choice = choice;
        if (report.passed) {
            r.correct_exists = true;
            r.correct = w;
            return r;
        }
        const auto& cx = *report.counterexample;
        w.failure = to_string(cx.kind);
        w.initial = format_configuration(cx.trace.header.initial);
        w.trace_length = cx.trace.events.size();
        NodeMask visited = cx.trace.events.empty() ? cx.trace.header.initial.occupied() : cx.trace.events.back().visited;
        w.visited = popcount(visited);
        r.failures.push_back(std::move(w));
        std::size_t pos = 0;
        for (; pos < choice.size(); ++pos) {
            if (static_cast<std::size_t>(++choice[pos]) < options[pos].size()) break;
            choice[pos] = 0;
        }
        if (pos == choice.size()) break;
    }
    return r;
}

Json to_json(const SearchReport& r) {
    Json j{{"certificate", "impossibility"},
           {"command", "gridexp oracle impossibility --grid " + std::to_string(r.grid.i) + "x" +
                           std::to_string(r.grid.j) + " --k " + std::to_string(r.k)},
           {"grid", std::to_string(r.grid.i) + "x" + std::to_string(r.grid.j)},
           {"k", r.k},
           {"model", "atom"},
           {"mode", "strong"},
           {"within_cap", r.within_cap}};
    if (!r.within_cap) {
        j["refusal"] = r.refusal;
        return j;
    }
    Json classes = Json::array();
    for (const auto& c : r.classes) {
        Json opts = Json::array();
        for (const auto& o : c.options) opts.push_back(coords_json(o));
        classes.push_back({{"configuration", c.configuration}, {"self", coord_json(c.self)}, {"options", opts}});
    }
    Json failures = Json::array();
    for (const auto& w : r.failures)
        failures.push_back({{"choice", w.choice},
                            {"failure", w.failure},
                            {"initial", w.initial},
                            {"trace_length", w.trace_length},
                            {"visited", w.visited}});
    j["view_classes"] = classes;
    j["protocols_enumerated"] = r.protocols;
    j["verdict"] = r.correct_exists ? "a correct protocol exists" : "no protocol";
    j["correct_protocol"] = r.correct ? Json(r.correct->choice) : Json(nullptr);
    j["failures"] = failures;
    return j;
}

}  // namespace gridexp
