#include <algorithm>
#include <climits>

#include "gridexp/protocols.hpp"

namespace gridexp {

std::string to_string(SetupCase c) {
    switch (c) {
        case SetupCase::StrictLeader: return "StrictLeader";
        case SetupCase::HalfLeader1: return "HalfLeader1";
        case SetupCase::HalfLeader2: return "HalfLeader2";
        case SetupCase::FullyLeader1: return "FullyLeader1";
        case SetupCase::FullyLeader2: return "FullyLeader2";
        case SetupCase::SemiLeader1: return "SemiLeader1";
        case SetupCase::SemiLeader2a: return "SemiLeader2a";
        case SetupCase::SemiLeader2b: return "SemiLeader2b";
        case SetupCase::Choice1: return "Choice1";
        case SetupCase::Choice2: return "Choice2";
        case SetupCase::Undefined1: return "Undefined1";
        case SetupCase::Undefined2: return "Undefined2";
        case SetupCase::Undefined3: return "Undefined3";
        case SetupCase::Undefined4_1: return "Undefined4_1";
        case SetupCase::Undefined4_2: return "Undefined4_2";
        case SetupCase::Undefined4_3i: return "Undefined4_3i";
        case SetupCase::Undefined4_3ii: return "Undefined4_3ii";
        case SetupCase::Undefined4_4i: return "Undefined4_4i";
        case SetupCase::Undefined4_4ii: return "Undefined4_4ii";
        case SetupCase::Undefined4_4iii: return "Undefined4_4iii";
        case SetupCase::SetUpDone: return "SetUpDone";
        case SetupCase::Oriented: return "Oriented";
        case SetupCase::Exploring: return "Exploring";
        case SetupCase::Terminal: return "Terminal";
    }
    return "?";
}

std::vector<NodeCoord> snake_order(const GridDims& g) {
    std::vector<NodeCoord> out;
    for (int y = 0; y < g.i; ++y)
        for (int n = 0; n < g.j; ++n) out.push_back({y % 2 == 0 ? n : g.j - 1 - n, y});
    return out;
}

int snake_index(const GridDims& g, NodeCoord f) {
    return f.y * g.j + (f.y % 2 == 0 ? f.x : g.j - 1 - f.x);
}

NodeCoord OrientedFrame::to_frame(NodeCoord p) const {
    int dx = p.x - origin.x, dy = p.y - origin.y;
    return {dx * x_axis.x + dy * x_axis.y, dx * y_axis.x + dy * y_axis.y};
}

NodeCoord OrientedFrame::from_frame(NodeCoord f) const {
    return {origin.x + f.x * x_axis.x + f.y * y_axis.x, origin.y + f.x * x_axis.y + f.y * y_axis.y};
}

std::optional<OrientedFrame> oriented_frame(const Configuration& c) {
    const auto& g = c.grid();
    NodeMask towers = c.towers();
    if (popcount(towers) != 1) return std::nullopt;
    NodeCoord t = g.coord(std::countr_zero(towers));
    std::vector<NodeCoord> near;
    for (auto corner : corners(g))
        if (dist(corner, t) == 1) near.push_back(corner);
    if (near.size() != 1) return std::nullopt;
    OrientedFrame f;
    f.origin = near[0];
    f.x_axis = {t.x - f.origin.x, t.y - f.origin.y};
    f.y_axis = {0, 0};
    for (auto n : neighbors(g, f.origin))
        if (n != t) f.y_axis = {n.x - f.origin.x, n.y - f.origin.y};
    // The X axis must run along a longest side.
    int x_len = f.x_axis.x != 0 ? g.j : g.i;
    if (x_len != g.j) return std::nullopt;
    return f;
}

NodeMask SetupPlan::movers() const {
    NodeMask m = 0;
    for (std::size_t idx = 0; idx < moves.size(); ++idx)
        if (moves[idx]) m |= bit(static_cast<int>(idx));
    return m;
}

namespace {

// Geometry of one configuration, shared by the case predicates.
struct Scene {
    const Configuration& c;
    GridDims g;
    std::vector<NodeCoord> robots;  // towerless: the three occupied nodes
    std::vector<Borderline> lines;
    std::vector<NodeCoord> corner_list;

    explicit Scene(const Configuration& conf) : c(conf), g(conf.grid()) {
        for (int idx = 0; idx < g.node_count(); ++idx)
            if (c.at(idx) > 0) robots.push_back(g.coord(idx));
        lines = borderlines(g);
        corner_list = corners(g);
    }

    bool free(NodeCoord p) const { return c.at(p) == 0; }
    bool is_corner(NodeCoord p) const {
        return std::find(corner_list.begin(), corner_list.end(), p) != corner_list.end();
    }
    bool on(std::size_t line, NodeCoord p) const {
        return std::find(lines[line].begin(), lines[line].end(), p) != lines[line].end();
    }
    bool longest(std::size_t line) const { return static_cast<int>(lines[line].size()) == g.j; }
    bool on_border(NodeCoord p) const {
        for (std::size_t l = 0; l < lines.size(); ++l)
            if (on(l, p)) return true;
        return false;
    }
    std::vector<std::size_t> lines_of(NodeCoord p) const {
        std::vector<std::size_t> out;
        for (std::size_t l = 0; l < lines.size(); ++l)
            if (on(l, p)) out.push_back(l);
        return out;
    }
    // Some borderline holding every listed node.
    std::optional<std::size_t> common_line(std::initializer_list<NodeCoord> ps) const {
        for (std::size_t l = 0; l < lines.size(); ++l) {
            bool all = true;
            for (auto p : ps) all = all && on(l, p);
            if (all) return l;
        }
        return std::nullopt;
    }
    int corner_dist(NodeCoord p) const {
        int best = INT_MAX;
        for (auto k : corner_list) best = std::min(best, dist(p, k));
        return best;
    }
    std::vector<NodeCoord> closest_corners(NodeCoord p) const {
        std::vector<NodeCoord> out;
        int d = corner_dist(p);
        for (auto k : corner_list)
            if (dist(p, k) == d) out.push_back(k);
        return out;
    }
    NodeMask free_neighbors(NodeCoord p) const {
        NodeMask m = 0;
        for (auto n : neighbors(g, p))
            if (free(n)) m |= bit(g.index(n));
        return m;
    }
    // Free neighbors of p on a shortest path to some node of `targets`.
    NodeMask steps_toward(NodeCoord p, const std::vector<NodeCoord>& targets) const {
        NodeMask m = 0;
        for (auto n : neighbors(g, p)) {
            if (!free(n)) continue;
            for (auto t : targets)
                if (dist(n, t) == dist(p, t) - 1) m |= bit(g.index(n));
        }
        return m;
    }
    // Free nodes of the given lines closest to p.
    std::vector<NodeCoord> closest_free_on(NodeCoord p, const std::vector<std::size_t>& ls) const {
        std::vector<NodeCoord> out;
        int best = INT_MAX;
        for (auto l : ls)
            for (auto q : lines[l]) {
                if (!free(q)) continue;
                int d = dist(p, q);
                if (d < best) {
                    best = d;
                    out.clear();
                }
                if (d == best && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
            }
        return out;
    }
    NodeMask free_neighbors_on(NodeCoord p, std::size_t line) const {
        NodeMask m = 0;
        for (auto n : neighbors(g, p))
            if (free(n) && on(line, n)) m |= bit(g.index(n));
        return m;
    }
    // Canonical form of the configuration as seen from p.
    std::vector<int> view_key(NodeCoord p) const {
        std::vector<int> best;
        for (const auto& f : automorphisms(g)) {
            std::vector<int> key(static_cast<std::size_t>(g.node_count()) + 1, 0);
            for (int idx = 0; idx < g.node_count(); ++idx)
                key[static_cast<std::size_t>(g.index(f.apply(g, g.coord(idx))))] = c.at(idx);
            key.back() = g.index(f.apply(g, p));
            if (best.empty() || key < best) best = key;
        }
        return best;
    }
    NodeMask free_neighbors_off(NodeCoord p, std::size_t line) const {
        NodeMask m = 0;
        for (auto n : neighbors(g, p))
            if (free(n) && !on(line, n)) m |= bit(g.index(n));
        return m;
    }
};

struct Planner {
    Scene s;
    SetupPlan plan;

    explicit Planner(const Configuration& c) : s(c) {
        plan.moves.assign(static_cast<std::size_t>(s.g.node_count()), 0);
    }

    void move(NodeCoord r, NodeMask targets) { plan.moves[static_cast<std::size_t>(s.g.index(r))] |= targets; }
    void set(SetupCase k, std::string detail = {}) {
        plan.kind = k;
        plan.detail = std::move(detail);
    }
    [[noreturn]] void gap(const std::string& why) const {
        throw ClassificationGap("no three-robot case for " + format_configuration(s.c) + " on " +
                                to_string(s.g) + ": " + why);
    }

    void run() {
        if (s.c.robot_count() != 3) gap("needs exactly three robots");
        if (!s.c.towerless()) return towers();
        std::vector<NodeCoord> at_corner;
        for (auto r : s.robots)
            if (s.is_corner(r)) at_corner.push_back(r);
        switch (at_corner.size()) {
            case 1: return leader(at_corner[0]);
            case 2: return choice1(at_corner[0], at_corner[1]);
            case 3: return choice2();
            default: return undefined();
        }
    }

    std::vector<NodeCoord> others(NodeCoord r) const {
        std::vector<NodeCoord> out;
        for (auto q : s.robots)
            if (q != r) out.push_back(q);
        return out;
    }

    void towers() {
        auto frame = oriented_frame(s.c);
        if (!frame || popcount(s.c.singles()) != 1) gap("tower configuration without an orientation");
        NodeCoord explorer = s.g.coord(std::countr_zero(s.c.singles()));
        auto f = frame->to_frame(explorer);
        int idx = snake_index(s.g, f);
        int last = s.g.node_count() - 1;
        if (idx < 2) gap("explorer behind its start");
        if (idx == last) return set(SetupCase::Terminal);
        set(idx == 2 ? SetupCase::Oriented : SetupCase::Exploring);
        auto order = snake_order(s.g);
        move(explorer, bit(s.g.index(frame->from_frame(order[static_cast<std::size_t>(idx + 1)]))));
    }

    void leader(NodeCoord r1) {
        auto corner_lines = s.lines_of(r1);
        auto rest = others(r1);
        auto on_corner_line = [&](NodeCoord p) {
            for (auto l : corner_lines)
                if (s.on(l, p)) return true;
            return false;
        };
        auto line_with = [&](NodeCoord p) {
            for (auto l : corner_lines)
                if (s.on(l, p)) return l;
            gap("robot off the corner's borderlines");
        };
        std::vector<NodeCoord> on_lines;
        for (auto q : rest)
            if (on_corner_line(q)) on_lines.push_back(q);

        if (on_lines.empty()) {
            set(SetupCase::StrictLeader);
            int d = std::min(dist(r1, rest[0]), dist(r1, rest[1]));
            std::vector<std::size_t> longest;
            for (auto l : corner_lines)
                if (s.longest(l)) longest.push_back(l);
            for (auto q : rest) {
                if (dist(r1, q) != d) continue;
                move(q, s.steps_toward(q, s.closest_free_on(q, longest)));
            }
            return;
        }
        if (on_lines.size() == 1) {
            NodeCoord r2 = on_lines[0];
            NodeCoord r3 = rest[0] == r2 ? rest[1] : rest[0];
            auto l = line_with(r2);
            if (s.longest(l)) {
                set(SetupCase::HalfLeader1);
                move(r3, s.steps_toward(r3, s.closest_free_on(r3, {l})));
            } else {
                set(SetupCase::HalfLeader2);
                NodeMask out = s.free_neighbors_off(r2, l);
                move(r2, out ? out : s.free_neighbors_on(r2, l));
            }
            return;
        }
        NodeCoord r2 = rest[0], r3 = rest[1];
        if (auto d1 = s.common_line({r1, r2, r3}); d1 && on_corner_line(r2)) {
            if (dist(r1, r3) < dist(r1, r2)) std::swap(r2, r3);
            if (s.longest(*d1)) {
                if (dist(r1, r2) == 1 && dist(r1, r3) == 2) {
                    set(SetupCase::SetUpDone);
                    move(r1, bit(s.g.index(r2)));
                    return;
                }
                set(SetupCase::FullyLeader1);
                if (dist(r1, r2) > 1) {
                    move(r2, s.steps_toward(r2, {r1}));
                } else {
                    move(r3, s.steps_toward(r3, {r2}));
                }
            } else {
                set(SetupCase::FullyLeader2);
                move(r2, s.free_neighbors_off(r2, *d1));
            }
            return;
        }
        auto l2 = line_with(r2), l3 = line_with(r3);
        if (!s.g.is_square()) {
            set(SetupCase::SemiLeader1);
            if (!s.longest(l2)) move(r2, s.free_neighbors_off(r2, l2));
            if (!s.longest(l3)) move(r3, s.free_neighbors_off(r3, l3));
            return;
        }
        int d2 = dist(r1, r2), d3 = dist(r1, r3);
        if (d2 != d3) {
            set(SetupCase::SemiLeader2a, "unequal");
            if (d2 < d3) {
                move(r2, s.free_neighbors_off(r2, l2));
            } else {
                move(r3, s.free_neighbors_off(r3, l3));
            }
        } else if (d2 > 1) {
            set(SetupCase::SemiLeader2a, "equal");
            move(r1, s.free_neighbors(r1));
        } else {
            set(SetupCase::SemiLeader2b);
            move(r2, s.free_neighbors_on(r2, l2));
            move(r3, s.free_neighbors_on(r3, l3));
        }
    }

    void choice1(NodeCoord r1, NodeCoord r2) {
        set(SetupCase::Choice1);
        NodeCoord r3 = others(r1)[0] == r2 ? others(r1)[1] : others(r1)[0];
        auto share1 = s.common_line({r1, r3});
        auto share2 = s.common_line({r2, r3});
        if (share1 && share2) {
            auto all = s.common_line({r1, r2, r3});
            if (!all) gap("third robot shares separate borderlines with both corner robots");
            int d1 = dist(r1, r3), d2 = dist(r2, r3);
            if (d1 != d2) {
                plan.detail = "(i)";
                NodeCoord far = d1 > d2 ? r1 : r2;
                NodeMask on = s.free_neighbors_on(far, *all) & s.steps_toward(far, {r3});
                move(far, on);
            } else {
                NodeMask on = s.free_neighbors_on(r3, *all);
                plan.detail = on ? "(ii)" : "(ii) blocked";
                move(r3, on ? on : s.free_neighbors_off(r3, *all));
            }
            return;
        }
        if (share1 || share2) {
            plan.detail = "(shared)";
            NodeCoord mover = share1 ? r2 : r1;
            auto line = share1 ? *share1 : *share2;
            move(mover, s.steps_toward(mover, s.closest_free_on(mover, {line})));
            return;
        }
        // Third robot shares no borderline with a corner robot (possibly it
        // sits on the opposite side): head for the corner robots' sides.
        plan.detail = "(iii)";
        std::vector<std::size_t> targets;
        for (auto l : s.lines_of(r1))
            if (s.longest(l)) targets.push_back(l);
        for (auto l : s.lines_of(r2))
            if (s.longest(l) && std::find(targets.begin(), targets.end(), l) == targets.end()) targets.push_back(l);
        move(r3, s.steps_toward(r3, s.closest_free_on(r3, targets)));
    }

    void choice2() {
        set(SetupCase::Choice2);
        for (auto r : s.robots) {
            bool common = true;
            for (auto q : others(r)) {
                bool shares = false;
                for (auto l : s.lines_of(q)) shares = shares || s.on(l, r);
                common = common && shares;
            }
            if (!common) continue;
            NodeMask m = 0;
            for (auto n : neighbors(s.g, r)) {
                if (!s.free(n)) continue;
                for (std::size_t l = 0; l < s.lines.size(); ++l)
                    if (s.longest(l) && s.on(l, r) && s.on(l, n)) m |= bit(s.g.index(n));
            }
            move(r, m);
        }
        if (!plan.movers()) gap("no robot at the common node of the others' borderlines");
    }

    void to_corner(NodeCoord r) { move(r, s.steps_toward(r, s.closest_corners(r))); }

    void undefined() {
        std::vector<int> cd;
        for (auto r : s.robots) cd.push_back(s.corner_dist(r));
        int m = *std::min_element(cd.begin(), cd.end());
        std::vector<NodeCoord> closest, far;
        for (std::size_t n = 0; n < s.robots.size(); ++n) (cd[n] == m ? closest : far).push_back(s.robots[n]);

        if (s.g.is_square()) {
            // Every robot on the border, one borderline with two of them, the
            // nearer of which is as close to a corner as any robot: the third
            // robot joins that borderline.
            std::vector<std::pair<NodeCoord, std::size_t>> joins;
            bool all_border = true;
            for (auto r : s.robots) all_border = all_border && s.on_border(r);
            for (std::size_t l = 0; all_border && l < s.lines.size(); ++l) {
                std::vector<NodeCoord> in, out;
                for (auto r : s.robots) (s.on(l, r) ? in : out).push_back(r);
                if (in.size() != 2) continue;
                if (std::min(s.corner_dist(in[0]), s.corner_dist(in[1])) != m) continue;
                joins.emplace_back(out[0], l);
            }
            if (joins.size() == 1) {
                set(SetupCase::Undefined1);
                auto [r3, d1] = joins[0];
                move(r3, s.steps_toward(r3, s.closest_free_on(r3, {d1})));
                return;
            }
        }
        if (closest.size() == 1) {
            set(SetupCase::Undefined2);
            return to_corner(closest[0]);
        }
        if (closest.size() == 2) return undefined3(closest[0], closest[1], far[0]);
        undefined4();
    }

    void undefined3(NodeCoord r1, NodeCoord r2, NodeCoord r3) {
        set(SetupCase::Undefined3);
        int d1 = dist(r1, r3), d2 = dist(r2, r3);
        if (d1 == d2) {
            NodeMask m = 0;
            if (d1 == 1) {
                plan.detail = "adjacent";
                for (auto n : neighbors(s.g, r3))
                    if (s.free(n) && dist(n, r1) != dist(n, r2)) m |= bit(s.g.index(n));
                if (!m) m = s.free_neighbors(r3);
            } else {
                plan.detail = "apart";
                for (auto n : neighbors(s.g, r3)) {
                    if (!s.free(n)) continue;
                    bool a = dist(n, r1) < d1, b = dist(n, r2) < d2;
                    if (a != b) m |= bit(s.g.index(n));
                }
            }
            if (m) return move(r3, m);
            // R3 cannot break the tie. Symmetric flanks: R3 steps anywhere
            // (or, boxed in on a chain, both flanks head out). Otherwise the
            // smaller view among R1 and R2 heads for its corner.
            plan.detail += " (fallback)";
            auto k1 = s.view_key(r1), k2 = s.view_key(r2);
            if (k1 == k2 && s.free_neighbors(r3)) return move(r3, s.free_neighbors(r3));
            if (k1 <= k2) to_corner(r1);
            if (k2 <= k1) to_corner(r2);
            return;
        }
        plan.detail = "unequal";
        to_corner(d1 < d2 ? r1 : r2);
    }

    void undefined4() {
        std::vector<NodeCoord> border, inner;
        for (auto r : s.robots) (s.on_border(r) ? border : inner).push_back(r);
        if (border.size() == 1) {
            set(SetupCase::Undefined4_1);
            return to_corner(border[0]);
        }
        if (border.size() == 2) {
            set(SetupCase::Undefined4_2);
            return to_corner(inner[0]);
        }
        if (border.size() == 3) {
            for (auto r : s.robots) {
                auto rest = others(r);
                if (s.common_line({rest[0], rest[1]})) {
                    set(SetupCase::Undefined4_3i);
                    return to_corner(r);
                }
            }
            set(SetupCase::Undefined4_3ii);
            auto parallel = [&](NodeCoord a, NodeCoord b) {
                auto la = s.lines_of(a)[0], lb = s.lines_of(b)[0];
                bool ha = s.lines[la].front().y == s.lines[la].back().y;
                bool hb = s.lines[lb].front().y == s.lines[lb].back().y;
                return ha == hb;
            };
            for (auto r : s.robots) {
                auto rest = others(r);
                if (!parallel(r, rest[0]) && !parallel(r, rest[1])) to_corner(r);
            }
            if (!plan.movers()) gap("no perpendicular borderline");
            return;
        }
        std::vector<std::vector<NodeCoord>> cc;
        for (auto r : s.robots) cc.push_back(s.closest_corners(r));
        auto shares = [](const std::vector<NodeCoord>& a, const std::vector<NodeCoord>& b) {
            for (auto x : a)
                if (std::find(b.begin(), b.end(), x) != b.end()) return true;
            return false;
        };
        for (std::size_t n = 0; n < 3; ++n) {
            std::size_t a = (n + 1) % 3, b = (n + 2) % 3;
            if (shares(cc[a], cc[b]) && !shares(cc[n], cc[a]) && !shares(cc[n], cc[b])) {
                set(SetupCase::Undefined4_4i);
                to_corner(s.robots[n]);
            }
        }
        if (plan.movers()) return;
        for (std::size_t n = 0; n < 3; ++n) {
            std::size_t a = (n + 1) % 3, b = (n + 2) % 3;
            if (cc[n].size() >= 2 && shares(cc[n], cc[a]) && shares(cc[n], cc[b]) && !shares(cc[a], cc[b])) {
                set(SetupCase::Undefined4_4ii);
                to_corner(s.robots[n]);
            }
        }
        if (plan.movers()) return;
        bool distinct = true;
        for (std::size_t n = 0; n < 3; ++n) distinct = distinct && cc[n].size() == 1;
        if (distinct && !shares(cc[0], cc[1]) && !shares(cc[0], cc[2]) && !shares(cc[1], cc[2])) {
            set(SetupCase::Undefined4_4iii);
            for (std::size_t n = 0; n < 3; ++n) {
                std::size_t a = (n + 1) % 3, b = (n + 2) % 3;
                auto k = cc[n][0];
                if (s.common_line({k, cc[a][0]}) && s.common_line({k, cc[b][0]})) to_corner(s.robots[n]);
            }
            if (plan.movers()) return;
        }
        // Outside the listed subcases: the robot with the smallest view among
        // those whose view no other robot shares heads for its corner.
        set(SetupCase::Undefined4_4iii, "fallback");
        std::vector<std::vector<int>> keys;
        for (auto r : s.robots) keys.push_back(s.view_key(r));
        std::optional<std::size_t> pick;
        for (std::size_t n = 0; n < keys.size(); ++n) {
            if (std::count(keys.begin(), keys.end(), keys[n]) != 1) continue;
            if (!pick || keys[n] < keys[*pick]) pick = n;
        }
        if (!pick) gap("no robot with a distinct view");
        to_corner(s.robots[*pick]);
    }
};

}  // namespace

SetupPlan setup_plan(const Configuration& c) {
    if (c.grid().j <= 3) throw PreconditionFailed("the three-robot protocol needs j > 3");
    Planner p(c);
    p.run();
    return std::move(p.plan);
}

SetupCase classify_setup(const Configuration& c) { return setup_plan(c).kind; }

Decision general3(const View& v) {
    auto plan = setup_plan(v.as_configuration());
    return Decision::move(plan.moves[static_cast<std::size_t>(v.self)]);
}

Decision general3_reversed(const View& v) {
    auto c = v.as_configuration();
    if (!c.towerless() && v.labels[static_cast<std::size_t>(v.self)] == 1) {
        auto frame = oriented_frame(c);
        if (frame) {
            int idx = snake_index(v.grid, frame->to_frame(v.self_coord()));
            if (idx >= 3 && idx < v.grid.node_count() - 1) {
                auto prev = snake_order(v.grid)[static_cast<std::size_t>(idx - 1)];
                return Decision::move(bit(v.grid.index(frame->from_frame(prev))));
            }
        }
    }
    return general3(v);
}

}  // namespace gridexp
