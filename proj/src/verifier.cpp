#include "gridexp/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <thread>
#include <unordered_map>

namespace gridexp {

std::string to_string(Counterexample::Kind k) {
    return k == Counterexample::Kind::UncoveredTerminal ? "uncovered-terminal" : "fair-lasso";
}

std::vector<Configuration> towerless_configurations(const GridDims& g, int k) {
    std::vector<Configuration> out;
    const int n = g.node_count();
    if (k < 0 || k > n) throw PreconditionFailed("cannot place " + std::to_string(k) + " robots");
    // Combinations in increasing bitmask order: Gosper's hack.
    if (k == 0) return {Configuration(g)};
    const NodeMask limit = g.all_nodes();
    for (NodeMask m = (NodeMask{1} << k) - 1; m && m <= limit;) {
        Configuration c(g);
        for_each_node(m, [&](int idx) { c.add(idx, 1); });
        out.push_back(std::move(c));
        NodeMask low = m & (~m + 1), ripple = m + low;
        if (ripple == 0) break;
        m = (((ripple ^ m) >> 2) / low) | ripple;
    }
    return out;
}

namespace {

using Word = std::uint64_t;
using Key = std::vector<Word>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto w : k) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Slot {
    int node = 0;
    NodeMask pending = 0;
};
using RState = std::vector<Slot>;  // index = robot id

Word pack(int node, NodeMask pending) { return (static_cast<Word>(node) << 56) | pending; }

struct Succ {
    SchedulerAction action;
    RState next;
    std::uint32_t completed = 0;  // robots whose cycle ends with this action
    bool noop = false;
};

// Iterative Tarjan. Returns component id per vertex (reverse topological).
std::vector<std::uint32_t> strongly_connected(const std::vector<std::vector<std::uint32_t>>& adj,
                                              std::uint32_t& count) {
    const auto n = static_cast<std::uint32_t>(adj.size());
    constexpr std::uint32_t unset = UINT32_MAX;
    std::vector<std::uint32_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<std::uint32_t> stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::uint32_t next_index = 0;
    count = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < adj[v].size()) {
                auto w = adj[v][pos++];
                if (index[w] == unset) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                while (true) {
                    auto w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                    if (w == v) break;
                }
                ++count;
            }
            auto finished = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
        }
    }
    return comp;
}

class Space {
public:
    Space(const GridDims& g, int k, const ProtocolFn& fn, const VerifyOptions& opt)
        : g_(g), k_(k), fn_(fn), opt_(opt), sym_(g) {
        group_size_ = opt.canonicalize ? sym_.size() : 1;
    }

    const GridDims& grid() const { return g_; }
    int k() const { return k_; }
    std::size_t decisions() const { return memo_.size(); }
    const SymmetryTable& sym() const { return sym_; }

    std::vector<std::uint8_t> labels_of(const RState& s) const {
        std::vector<std::uint8_t> labels(static_cast<std::size_t>(g_.node_count()), 0);
        for (const auto& r : s) ++labels[static_cast<std::size_t>(r.node)];
        if (opt_.mode == Multiplicity::Weak)
            for (auto& l : labels) l = threshold(l);
        return labels;
    }

    NodeMask decide(const std::vector<std::uint8_t>& labels, int node) {
        std::string key(labels.begin(), labels.end());
        key.push_back(static_cast<char>(node));
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        View v{g_, opt_.mode, labels, node};
        Decision d = decision_orbit(v, fn_(v));
        memo_.emplace(std::move(key), d.targets);
        return d.targets;
    }

    bool quiescent(const RState& s) {
        for (const auto& r : s)
            if (r.pending) return false;
        auto labels = labels_of(s);
        for (const auto& r : s)
            if (decide(labels, r.node)) return false;
        return true;
    }

    NodeMask occupied(const RState& s) const {
        NodeMask m = 0;
        for (const auto& r : s) m |= bit(r.node);
        return m;
    }

    void expand(const RState& s, std::vector<Succ>& out) {
        out.clear();
        auto labels = labels_of(s);
        if (opt_.model == Model::Atom) {
            std::vector<std::vector<int>> options(static_cast<std::size_t>(k_));
            for (int r = 0; r < k_; ++r) {
                NodeMask d = decide(labels, s[static_cast<std::size_t>(r)].node);
                for_each_node(d, [&](int t) { options[static_cast<std::size_t>(r)].push_back(t); });
            }
            for (std::uint32_t subset = 1; subset < (1U << k_); ++subset) {
                std::vector<int> ids, movers;
                for (int r = 0; r < k_; ++r) {
                    if (!(subset & (1U << r))) continue;
                    ids.push_back(r);
                    if (!options[static_cast<std::size_t>(r)].empty()) movers.push_back(r);
                }
                std::vector<int> choice(movers.size(), 0);
                while (true) {
                    Succ succ;
                    succ.next = s;
                    std::vector<int> tbs;
                    for (int r : ids) {
                        auto pos = std::find(movers.begin(), movers.end(), r);
                        if (pos == movers.end()) {
                            tbs.push_back(0);
                            continue;
                        }
                        int c = choice[static_cast<std::size_t>(pos - movers.begin())];
                        tbs.push_back(c);
                        succ.next[static_cast<std::size_t>(r)].node =
                            options[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                    }
                    succ.action = SchedulerAction::activate(ids, std::move(tbs));
                    succ.completed = subset;
                    succ.noop = movers.empty();
                    out.push_back(std::move(succ));
                    std::size_t pos = 0;
                    for (; pos < movers.size(); ++pos) {
                        auto limit = options[static_cast<std::size_t>(movers[pos])].size();
                        if (static_cast<std::size_t>(++choice[pos]) < limit) break;
                        choice[pos] = 0;
                    }
                    if (pos == movers.size()) break;
                }
            }
            return;
        }
        for (int r = 0; r < k_; ++r) {
            const auto& slot = s[static_cast<std::size_t>(r)];
            if (slot.pending) continue;
            NodeMask d = decide(labels, slot.node);
            Succ succ;
            succ.action = SchedulerAction::look(r);
            succ.next = s;
            if (d == 0) {
                succ.completed = 1U << r;
                succ.noop = true;
            } else {
                succ.next[static_cast<std::size_t>(r)].pending = d;
            }
            out.push_back(std::move(succ));
        }
        for (int r = 0; r < k_; ++r) {
            const auto& slot = s[static_cast<std::size_t>(r)];
            if (!slot.pending) continue;
            int t = 0;
            for_each_node(slot.pending, [&](int node) {
                Succ succ;
                succ.action = SchedulerAction::move(r, t++);
                succ.next = s;
                succ.next[static_cast<std::size_t>(r)] = Slot{node, 0};
                succ.completed = 1U << r;
                out.push_back(std::move(succ));
            });
        }
    }

    // Anonymous canonical key: sorted slots, minimized over the group.
    // elem receives the table index e with key = e(s).
    Key anon_key(const RState& s, std::size_t& elem) const {
        Key best, cur(s.size());
        for (std::size_t e = 0; e < group_size_; ++e) {
            for (std::size_t r = 0; r < s.size(); ++r)
                cur[r] = pack(sym_.map(e, s[r].node), sym_.map_mask(e, s[r].pending));
            std::sort(cur.begin(), cur.end());
            if (e == 0 || cur < best) {
                best = cur;
                elem = e;
            }
        }
        return best;
    }

    // Key keeping robot ids, minimized over the group only.
    Key lifted_key(const RState& s) const {
        Key best, cur(s.size());
        for (std::size_t e = 0; e < group_size_; ++e) {
            for (std::size_t r = 0; r < s.size(); ++r)
                cur[r] = pack(sym_.map(e, s[r].node), sym_.map_mask(e, s[r].pending));
            if (e == 0 || cur < best) best = cur;
        }
        return best;
    }

    static Key concrete_key(const RState& s) {
        Key k(s.size());
        for (std::size_t r = 0; r < s.size(); ++r) k[r] = pack(s[r].node, s[r].pending);
        return k;
    }

    static RState from_key(const Key& k) {
        RState s(k.size());
        for (std::size_t r = 0; r < k.size(); ++r) {
            s[r].node = static_cast<int>(k[r] >> 56);
            s[r].pending = k[r] & ((Word{1} << 56) - 1);
        }
        return s;
    }

    RState initial_state(const Configuration& c) const {
        RState s;
        for (int idx = 0; idx < g_.node_count(); ++idx)
            for (int n = 0; n < c.at(idx); ++n) s.push_back({idx, 0});
        return s;
    }

    Configuration config_of(const RState& s) const {
        Configuration c(g_);
        for (const auto& r : s) c.add(r.node, 1);
        return c;
    }

private:
    GridDims g_;
    int k_;
    const ProtocolFn& fn_;
    const VerifyOptions& opt_;
    SymmetryTable sym_;
    std::size_t group_size_ = 1;
    std::unordered_map<std::string, NodeMask> memo_;
};

struct Edge {
    std::uint32_t to;
    std::uint8_t inv;  // group element taking the target's key frame to this state's frame
};

class Worker {
public:
    Worker(const GridDims& g, int k, const std::string& name, const ProtocolFn& fn, const VerifyOptions& opt,
           std::vector<std::pair<std::size_t, Configuration>> initials)
        : space_(g, k, fn, opt), name_(name), fn_(fn), opt_(opt), initials_(std::move(initials)) {}

    VerificationReport run();

private:
    std::uint32_t intern(const Key& key, std::uint32_t depth, bool& fresh) {
        auto [it, inserted] = index_.emplace(key, static_cast<std::uint32_t>(keys_.size()));
        fresh = inserted;
        if (inserted) {
            keys_.push_back(key);
            depth_.push_back(depth);
            edges_.emplace_back();
        }
        return it->second;
    }

    std::uint32_t id_of(const RState& s) const {
        std::size_t e = 0;
        return index_.at(space_.anon_key(s, e));
    }

    bool explore();
    void coverage();
    void fairness();
    std::optional<std::vector<Succ>> search(const RState& start, const std::function<bool(const RState&)>& allowed,
                                            const std::function<bool(const Succ&)>& goal, std::size_t cap = 4'000'000);
    Counterexample uncovered(const Configuration& initial, NodeMask missed);
    Counterexample lasso(const Configuration& initial);
    Trace to_trace(const Configuration& initial, const std::vector<Succ>& path);

    struct Lift {
        std::vector<RState> states;
        std::unordered_map<Key, std::uint32_t, KeyHash> index;
        std::vector<std::uint32_t> comp;
        std::vector<bool> fair_comp;
    };
    Lift lift(const RState& start, std::uint32_t component);

    Space space_;
    std::string name_;
    const ProtocolFn& fn_;
    const VerifyOptions& opt_;
    std::vector<std::pair<std::size_t, Configuration>> initials_;

    std::vector<Key> keys_;
    std::unordered_map<Key, std::uint32_t, KeyHash> index_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::uint32_t> depth_;
    std::vector<bool> quiescent_;
    std::vector<NodeMask> avoid_;      // nodes some path to a terminal state never visits
    std::vector<std::uint32_t> comp_;  // SCC per state
    std::vector<bool> fair_;           // component is a fair cycle
    std::vector<bool> doomed_;         // state reaches a fair cycle
    std::size_t edge_count_ = 0;
    std::size_t fair_components_ = 0;
};

bool Worker::explore() {
    std::deque<std::uint32_t> queue;
    for (const auto& [pos, c] : initials_) {
        bool fresh = false;
        std::size_t e = 0;
        auto id = intern(space_.anon_key(space_.initial_state(c), e), 0, fresh);
        if (fresh) queue.push_back(id);
    }
    std::vector<Succ> succs;
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        RState s = Space::from_key(keys_[id]);
        bool q = space_.quiescent(s);
        if (quiescent_.size() <= id) quiescent_.resize(id + 1, false);
        quiescent_[id] = q;
        if (q) continue;
        space_.expand(s, succs);
        std::vector<Edge> out;
        for (const auto& succ : succs) {
            if (succ.noop) continue;
            std::size_t e = 0;
            auto key = space_.anon_key(succ.next, e);
            bool fresh = false;
            auto to = intern(key, depth_[id] + 1, fresh);
            if (fresh) {
                if (keys_.size() > opt_.budget) return false;
                queue.push_back(to);
            }
            auto inv = static_cast<std::uint8_t>(space_.sym().inverse_of(e));
            bool dup = false;
            for (const auto& x : out) dup = dup || (x.to == to && x.inv == inv);
            if (!dup) out.push_back({to, inv});
        }
        edge_count_ += out.size();
        edges_[id] = std::move(out);
    }
    quiescent_.resize(keys_.size(), false);
    return true;
}

void Worker::coverage() {
    const auto n = keys_.size();
    const NodeMask all = space_.grid().all_nodes();
    avoid_.assign(n, 0);
    std::vector<std::vector<std::uint32_t>> reverse(n);
    for (std::uint32_t u = 0; u < n; ++u)
        for (const auto& e : edges_[u]) reverse[e.to].push_back(u);
    std::deque<std::uint32_t> work;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!quiescent_[s]) continue;
        avoid_[s] = all & ~space_.occupied(Space::from_key(keys_[s]));
        if (avoid_[s]) work.push_back(s);
    }
    while (!work.empty()) {
        auto t = work.front();
        work.pop_front();
        for (auto u : reverse[t]) {
            NodeMask free_u = all & ~space_.occupied(Space::from_key(keys_[u]));
            NodeMask gained = 0;
            for (const auto& e : edges_[u]) {
                if (e.to != t) continue;
                gained |= space_.sym().map_mask(e.inv, avoid_[t]) & free_u;
            }
            if (gained & ~avoid_[u]) {
                avoid_[u] |= gained;
                work.push_back(u);
            }
        }
    }
}

Worker::Lift Worker::lift(const RState& start, std::uint32_t component) {
    Lift L;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;
    auto intern_lift = [&](const RState& s) {
        auto key = space_.lifted_key(s);
        auto [it, inserted] = L.index.emplace(std::move(key), static_cast<std::uint32_t>(L.states.size()));
        if (inserted) {
            L.states.push_back(s);
            edges.emplace_back();
        }
        return std::pair{it->second, inserted};
    };
    std::deque<std::uint32_t> queue{intern_lift(start).first};
    std::vector<Succ> succs;
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        RState s = L.states[id];
        space_.expand(s, succs);
        for (const auto& succ : succs) {
            auto anon = id_of(succ.next);
            if (comp_[anon] != component) continue;
            auto [to, fresh] = intern_lift(succ.next);
            if (fresh) queue.push_back(to);
            edges[id].emplace_back(to, succ.completed);
        }
    }
    std::vector<std::vector<std::uint32_t>> adj(L.states.size());
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (auto [to, done] : edges[u]) adj[u].push_back(to);
    std::uint32_t count = 0;
    L.comp = strongly_connected(adj, count);
    std::vector<std::uint32_t> done_mask(count, 0);
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (auto [to, done] : edges[u])
            if (L.comp[u] == L.comp[to]) done_mask[L.comp[u]] |= done;
    const std::uint32_t everyone = (1U << space_.k()) - 1;
    L.fair_comp.assign(count, false);
    for (std::uint32_t c = 0; c < count; ++c) L.fair_comp[c] = done_mask[c] == everyone;
    return L;
}

void Worker::fairness() {
    const auto n = keys_.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t u = 0; u < n; ++u)
        for (const auto& e : edges_[u]) adj[u].push_back(e.to);
    std::uint32_t count = 0;
    comp_ = strongly_connected(adj, count);
    std::vector<std::uint32_t> size(count, 0);
    std::vector<bool> cyclic(count, false);
    for (std::uint32_t u = 0; u < n; ++u) {
        ++size[comp_[u]];
        for (auto to : adj[u])
            if (to == u) cyclic[comp_[u]] = true;
    }
    std::vector<std::uint32_t> representative(count, UINT32_MAX);
    for (std::uint32_t u = 0; u < n; ++u) {
        if (size[comp_[u]] > 1) cyclic[comp_[u]] = true;
        if (representative[comp_[u]] == UINT32_MAX) representative[comp_[u]] = u;
    }
    fair_.assign(count, false);
    for (std::uint32_t c = 0; c < count; ++c) {
        if (!cyclic[c]) continue;
        auto L = lift(Space::from_key(keys_[representative[c]]), c);
        for (bool f : L.fair_comp) fair_[c] = fair_[c] || f;
        if (fair_[c]) ++fair_components_;
    }
    // Backward closure from fair components.
    doomed_.assign(n, false);
    std::vector<std::vector<std::uint32_t>> reverse(n);
    for (std::uint32_t u = 0; u < n; ++u)
        for (auto to : adj[u]) reverse[to].push_back(u);
    std::deque<std::uint32_t> work;
    for (std::uint32_t u = 0; u < n; ++u)
        if (fair_[comp_[u]]) {
            doomed_[u] = true;
            work.push_back(u);
        }
    while (!work.empty()) {
        auto t = work.front();
        work.pop_front();
        for (auto u : reverse[t])
            if (!doomed_[u]) {
                doomed_[u] = true;
                work.push_back(u);
            }
    }
}

std::optional<std::vector<Succ>> Worker::search(const RState& start,
                                                const std::function<bool(const RState&)>& allowed,
                                                const std::function<bool(const Succ&)>& goal, std::size_t cap) {
    std::vector<RState> states{start};
    std::vector<std::pair<std::uint32_t, Succ>> parent{{UINT32_MAX, {}}};
    std::unordered_map<Key, std::uint32_t, KeyHash> seen{{Space::concrete_key(start), 0}};
    std::deque<std::uint32_t> queue{0};
    std::vector<Succ> succs;
    while (!queue.empty() && states.size() < cap) {
        auto id = queue.front();
        queue.pop_front();
        RState s = states[id];
        space_.expand(s, succs);
        for (auto& succ : succs) {
            if (goal(succ)) {
                std::vector<Succ> path{succ};
                for (auto at = id; at != 0; at = parent[at].first) path.push_back(parent[at].second);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (succ.noop || !allowed(succ.next)) continue;
            auto [it, fresh] = seen.emplace(Space::concrete_key(succ.next), static_cast<std::uint32_t>(states.size()));
            if (!fresh) continue;
            states.push_back(succ.next);
            parent.emplace_back(id, succ);
            queue.push_back(it->second);
        }
    }
    return std::nullopt;
}

Trace Worker::to_trace(const Configuration& initial, const std::vector<Succ>& path) {
    Trace t;
    t.header = {space_.grid(), space_.k(), name_, opt_.model, opt_.mode, initial, std::nullopt};
    Engine engine(fn_);
    auto s = engine.init(initial, opt_.model, opt_.mode);
    for (const auto& succ : path) {
        auto [next, ev] = engine.step(s, succ.action);
        if (!(next.config == space_.config_of(succ.next))) {
            throw Error("verifier and engine disagree on " + to_string(succ.action));
        }
        s = std::move(next);
        t.events.push_back(std::move(ev));
    }
    return t;
}

Counterexample Worker::uncovered(const Configuration& initial, NodeMask missed) {
    RState s0 = space_.initial_state(initial);
    int v = std::countr_zero(missed);
    auto avoids = [&](const RState& s) { return !has(space_.occupied(s), v); };
    std::vector<Succ> path;
    if (!space_.quiescent(s0)) {
        auto found = search(s0, avoids, [&](const Succ& succ) {
            return !succ.noop && avoids(succ.next) && space_.quiescent(succ.next);
        });
        if (!found) throw Error("could not rebuild the uncovered-terminal witness");
        path = std::move(*found);
    }
    Counterexample cx;
    cx.kind = Counterexample::Kind::UncoveredTerminal;
    cx.trace = to_trace(initial, path);
    NodeMask visited = path.empty() ? initial.occupied() : cx.trace.events.back().visited;
    cx.missed = space_.grid().all_nodes() & ~visited;
    return cx;
}

Counterexample Worker::lasso(const Configuration& initial) {
    RState s0 = space_.initial_state(initial);
    auto in_fair = [&](const RState& s) { return fair_[comp_[id_of(s)]]; };
    std::vector<Succ> path;
    RState x = s0;
    if (!in_fair(s0)) {
        auto found = search(s0, [](const RState&) { return true; },
                            [&](const Succ& succ) { return !succ.noop && in_fair(succ.next); });
        if (!found) throw Error("could not rebuild the path to a fair cycle");
        path = std::move(*found);
        x = path.back().next;
    }
    auto component = comp_[id_of(x)];
    auto L = lift(x, component);
    auto in_fair_lift = [&](const RState& s) {
        if (comp_[id_of(s)] != component) return false;
        auto it = L.index.find(space_.lifted_key(s));
        return it != L.index.end() && L.fair_comp[L.comp[it->second]];
    };
    auto in_component = [&](const RState& s) { return comp_[id_of(s)] == component; };
    RState y = x;
    if (!in_fair_lift(x)) {
        auto found = search(x, in_component, [&](const Succ& succ) { return !succ.noop && in_fair_lift(succ.next); });
        if (!found) throw Error("could not reach a fair lifted component");
        path.insert(path.end(), found->begin(), found->end());
        y = path.back().next;
    }
    auto loop_comp = L.comp[L.index.at(space_.lifted_key(y))];
    auto in_loop = [&](const RState& s) {
        if (comp_[id_of(s)] != component) return false;
        auto it = L.index.find(space_.lifted_key(s));
        return it != L.index.end() && L.comp[it->second] == loop_comp;
    };
    int lasso_start = static_cast<int>(path.size());
    std::uint32_t done = 0;
    const std::uint32_t everyone = (1U << space_.k()) - 1;
    RState cur = y;
    for (int r = 0; r < space_.k() && done != everyone; ++r) {
        if (done & (1U << r)) continue;
        auto found = search(cur, in_loop, [&](const Succ& succ) {
            return (succ.completed & (1U << r)) && in_loop(succ.next);
        });
        if (!found) throw Error("fair component lost a completion edge");
        for (const auto& succ : *found) done |= succ.completed;
        path.insert(path.end(), found->begin(), found->end());
        cur = path.back().next;
    }
    auto home = space_.lifted_key(y);
    if (space_.lifted_key(cur) != home) {
        auto found = search(cur, in_loop, [&](const Succ& succ) { return space_.lifted_key(succ.next) == home; });
        if (!found) throw Error("fair component is not strongly connected");
        path.insert(path.end(), found->begin(), found->end());
    }
    Counterexample cx;
    cx.kind = Counterexample::Kind::FairLasso;
    cx.trace = to_trace(initial, path);
    cx.lasso_start = lasso_start;
    return cx;
}

VerificationReport Worker::run() {
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    r.grid = space_.grid();
    r.k = space_.k();
    r.protocol = name_;
    r.model = opt_.model;
    r.mode = opt_.mode;
    r.conclusive = explore();
    if (r.conclusive) {
        coverage();
        fairness();
        r.passed = true;
        for (const auto& [pos, c] : initials_) {
            auto id = id_of(space_.initial_state(c));
            InitialVerdict v{c, avoid_[id] == 0, !doomed_[id]};
            if (!v.explored || !v.terminates) {
                if (r.passed) {
                    if (!v.explored) {
                        std::size_t e = 0;
                        space_.anon_key(space_.initial_state(c), e);
                        NodeMask missed = space_.sym().map_mask(space_.sym().inverse_of(e), avoid_[id]);
                        r.counterexample = uncovered(c, missed);
                    } else {
                        r.counterexample = lasso(c);
                    }
                }
                r.passed = false;
            }
            r.verdicts.push_back(std::move(v));
        }
    }
    std::size_t max_depth = 0;
    for (auto d : depth_) max_depth = std::max<std::size_t>(max_depth, d);
    r.stats = {keys_.size(), edge_count_, max_depth, space_.decisions(), fair_components_,
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    return r;
}

}  // namespace

VerificationReport verify_exhaustive(const GridDims& g, int k, const std::string& protocol_name,
                                     const ProtocolFn& protocol, const VerifyOptions& options) {
    if (g.node_count() > 56) throw PreconditionFailed("the verifier handles grids of at most 56 nodes");
    if (k < 1 || k > 16) throw PreconditionFailed("the verifier handles 1 to 16 robots");
    auto t0 = std::chrono::steady_clock::now();
    auto initials = options.initials ? *options.initials : towerless_configurations(g, k);
    for (const auto& c : initials) {
        if (!(c.grid() == g) || c.robot_count() != k || !c.towerless())
            throw InvalidInitial("initial " + format_configuration(c) + " is not a towerless placement of k robots");
    }
    int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(initials.size())));
    std::vector<std::vector<std::pair<std::size_t, Configuration>>> parts(static_cast<std::size_t>(jobs));
    for (std::size_t n = 0; n < initials.size(); ++n) parts[n % static_cast<std::size_t>(jobs)].emplace_back(n, initials[n]);

    std::vector<VerificationReport> partial(static_cast<std::size_t>(jobs));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    auto work = [&](std::size_t w) {
        try {
            Worker worker(g, k, protocol_name, protocol, options, parts[w]);
            partial[w] = worker.run();
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < partial.size(); ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    VerificationReport merged;
    merged.grid = g;
    merged.k = k;
    merged.protocol = protocol_name;
    merged.model = options.model;
    merged.mode = options.mode;
    merged.passed = true;
    std::vector<std::pair<std::size_t, InitialVerdict>> verdicts;
    std::size_t first_failure = SIZE_MAX;
    for (std::size_t w = 0; w < partial.size(); ++w) {
        auto& p = partial[w];
        merged.conclusive = merged.conclusive && p.conclusive;
        merged.passed = merged.passed && p.passed;
        merged.stats.states += p.stats.states;
        merged.stats.edges += p.stats.edges;
        merged.stats.decisions += p.stats.decisions;
        merged.stats.fair_components += p.stats.fair_components;
        merged.stats.max_depth = std::max(merged.stats.max_depth, p.stats.max_depth);
        for (std::size_t n = 0; n < p.verdicts.size(); ++n) {
            auto pos = parts[w][n].first;
            const auto& v = p.verdicts[n];
            if ((!v.explored || !v.terminates) && pos < first_failure && p.counterexample &&
                p.counterexample->trace.header.initial == v.initial) {
                first_failure = pos;
                merged.counterexample = p.counterexample;
            }
            verdicts.emplace_back(pos, v);
        }
    }
    std::sort(verdicts.begin(), verdicts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [pos, v] : verdicts) merged.verdicts.push_back(std::move(v));
    if (!merged.conclusive) merged.passed = false;
    merged.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return merged;
}

Json to_json(const VerificationReport& r) {
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts)
        verdicts.push_back({{"initial", format_configuration(v.initial)},
                            {"explored", v.explored},
                            {"terminates_under_fairness", v.terminates}});
    Json j{{"grid", std::to_string(r.grid.i) + "x" + std::to_string(r.grid.j)},
           {"k", r.k},
           {"protocol", r.protocol},
           {"model", to_string(r.model)},
           {"mode", to_string(r.mode)},
           {"verdict", !r.conclusive ? "inconclusive" : (r.passed ? "pass" : "counterexample")},
           {"initials", r.verdicts.size()},
           {"verdicts", verdicts},
           {"stats",
            {{"states", r.stats.states},
             {"edges", r.stats.edges},
             {"max_depth", r.stats.max_depth},
             {"decisions", r.stats.decisions},
             {"fair_components", r.stats.fair_components},
             {"wall_time", r.stats.wall_seconds}}}};
    if (r.counterexample) {
        const auto& cx = *r.counterexample;
        Json events = Json::array();
        for (const auto& e : cx.trace.events) events.push_back(to_json(e));
        j["counterexample"] = {{"kind", to_string(cx.kind)},
                               {"header", to_json(cx.trace.header)},
                               {"events", events},
                               {"lasso_start", cx.lasso_start},
                               {"missed", mask_to_json(r.grid, cx.missed)}};
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

}  // namespace gridexp
