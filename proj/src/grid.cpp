#include "gridexp/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace gridexp {

std::string to_string(const NodeCoord& c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

std::string to_string(const GridDims& g) {
    return std::to_string(g.i) + "x" + std::to_string(g.j);
}

GridDims make_grid(int a, int b) {
    if (a < 1 || b < 1) {
        throw InvalidDimension("grid dimensions must be positive, got " + std::to_string(a) +
                               "x" + std::to_string(b));
    }
    if (a * b > 64) {
        throw InvalidDimension("grids are limited to 64 nodes, got " + std::to_string(a) + "x" +
                               std::to_string(b));
    }
    return GridDims{std::min(a, b), std::max(a, b)};
}

namespace {

int parse_positive(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("malformed grid '" + std::string(whole) + "', expected IxJ");
    }
    return v;
}

}  // namespace

GridDims parse_grid(std::string_view text) {
    auto sep = text.find_first_of("xX");
    if (sep == std::string_view::npos) {
        throw ParseError("malformed grid '" + std::string(text) + "', expected IxJ");
    }
    int a = parse_positive(text.substr(0, sep), text);
    int b = parse_positive(text.substr(sep + 1), text);
    return make_grid(a, b);
}

namespace {

void check_bounds(const GridDims& g, NodeCoord v) {
    if (!g.contains(v)) {
        throw OutOfBounds("node " + to_string(v) + " outside " + to_string(g) + " grid");
    }
}

constexpr std::array<NodeCoord, 4> kSteps{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

}  // namespace

int degree(const GridDims& g, NodeCoord v) {
    check_bounds(g, v);
    int d = 0;
    for (auto s : kSteps) {
        if (g.contains({v.x + s.x, v.y + s.y})) ++d;
    }
    return d;
}

std::vector<NodeCoord> neighbors(const GridDims& g, NodeCoord v) {
    check_bounds(g, v);
    std::vector<NodeCoord> out;
    for (auto s : kSteps) {
        NodeCoord n{v.x + s.x, v.y + s.y};
        if (g.contains(n)) out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

NodeMask neighbor_mask(const GridDims& g, int index) {
    NodeCoord v = g.coord(index);
    NodeMask m = 0;
    for (auto s : kSteps) {
        NodeCoord n{v.x + s.x, v.y + s.y};
        if (g.contains(n)) m |= bit(g.index(n));
    }
    return m;
}

std::vector<NodeCoord> corners(const GridDims& g) {
    std::vector<NodeCoord> out;
    int best = 5;
    for (int idx = 0; idx < g.node_count(); ++idx) {
        best = std::min(best, degree(g, g.coord(idx)));
    }
    for (int idx = 0; idx < g.node_count(); ++idx) {
        if (degree(g, g.coord(idx)) == best) out.push_back(g.coord(idx));
    }
    return out;
}

NodeMask corner_mask(const GridDims& g) {
    NodeMask m = 0;
    for (auto c : corners(g)) m |= bit(g.index(c));
    return m;
}

std::vector<Borderline> borderlines(const GridDims& g) {
    if (g.node_count() < 2) {
        throw NoBorderline("a (1,1) grid has no borderline");
    }
    std::vector<Borderline> out;
    auto row = [&](int y) {
        Borderline b;
        for (int x = 0; x < g.j; ++x) b.push_back({x, y});
        return b;
    };
    auto col = [&](int x) {
        Borderline b;
        for (int y = 0; y < g.i; ++y) b.push_back({x, y});
        return b;
    };
    out.push_back(row(0));
    if (g.i > 1) {
        out.push_back(row(g.i - 1));
        out.push_back(col(0));
        out.push_back(col(g.j - 1));
    }
    return out;
}

std::vector<Borderline> longest_borderlines(const GridDims& g) {
    auto all = borderlines(g);
    std::vector<Borderline> out;
    for (auto& b : all) {
        if (static_cast<int>(b.size()) == g.j) out.push_back(std::move(b));
    }
    return out;
}

int dist(NodeCoord u, NodeCoord v) { return std::abs(u.x - v.x) + std::abs(u.y - v.y); }

int dist(const GridDims& g, NodeCoord u, NodeCoord v) {
    check_bounds(g, u);
    check_bounds(g, v);
    return dist(u, v);
}

NodeCoord Automorphism::apply(const GridDims& g, NodeCoord c) const {
    if (flip_x) c.x = g.j - 1 - c.x;
    if (flip_y) c.y = g.i - 1 - c.y;
    if (transpose) std::swap(c.x, c.y);
    return c;
}

std::string to_string(const Automorphism& f) {
    if (f.is_identity()) return "id";
    std::string s;
    if (f.flip_x) s += "fx";
    if (f.flip_y) s += s.empty() ? "fy" : "+fy";
    if (f.transpose) s += s.empty() ? "t" : "+t";
    return s;
}

namespace {

// The dihedral group acts faithfully on these probes of a 3x3 square, so
// they identify any element; larger grids realize the same group.
constexpr GridDims kProbeGrid{3, 3};
constexpr std::array<NodeCoord, 2> kProbes{{{0, 0}, {1, 0}}};

std::array<Automorphism, 8> all_generators() {
    std::array<Automorphism, 8> out{};
    int n = 0;
    for (int t = 0; t < 2; ++t)
        for (int fy = 0; fy < 2; ++fy)
            for (int fx = 0; fx < 2; ++fx) out[n++] = Automorphism{fx == 1, fy == 1, t == 1};
    return out;
}

}  // namespace

Automorphism compose(const Automorphism& a, const Automorphism& b) {
    for (const auto& c : all_generators()) {
        bool ok = true;
        for (auto p : kProbes) {
            if (c.apply(kProbeGrid, p) != a.apply(kProbeGrid, b.apply(kProbeGrid, p))) {
                ok = false;
                break;
            }
        }
        if (ok) return c;
    }
    throw Error("automorphism composition left the dihedral group");
}

Automorphism inverse(const Automorphism& a) {
    for (const auto& c : all_generators()) {
        if (compose(a, c).is_identity()) return c;
    }
    throw Error("automorphism without inverse");
}

std::vector<Automorphism> automorphisms(const GridDims& g) {
    std::vector<Automorphism> out{Automorphism{}};
    if (g.node_count() == 1) return out;
    if (g.i == 1) {
        out.push_back({true, false, false});
        return out;
    }
    out.push_back({true, false, false});
    out.push_back({false, true, false});
    out.push_back({true, true, false});
    if (g.is_square()) {
        out.push_back({false, false, true});
        out.push_back({true, false, true});
        out.push_back({false, true, true});
        out.push_back({true, true, true});
    }
    return out;
}

SymmetryTable::SymmetryTable(const GridDims& g) : grid_(g), group_(automorphisms(g)) {
    const int n = g.node_count();
    perm_.resize(group_.size());
    for (std::size_t e = 0; e < group_.size(); ++e) {
        perm_[e].resize(static_cast<std::size_t>(n));
        for (int idx = 0; idx < n; ++idx) {
            perm_[e][static_cast<std::size_t>(idx)] = g.index(group_[e].apply(g, g.coord(idx)));
        }
    }
    inverse_.resize(group_.size());
    for (std::size_t e = 0; e < group_.size(); ++e) {
        for (std::size_t f = 0; f < group_.size(); ++f) {
            bool undoes = true;
            for (int idx = 0; idx < n && undoes; ++idx) undoes = map(f, map(e, idx)) == idx;
            if (undoes) inverse_[e] = f;
        }
    }
}

NodeMask SymmetryTable::map_mask(std::size_t e, NodeMask m) const {
    NodeMask out = 0;
    const auto& p = perm_[e];
    for_each_node(m, [&](int idx) { out |= bit(p[static_cast<std::size_t>(idx)]); });
    return out;
}

std::size_t SymmetryTable::index_of(const Automorphism& a) const {
    for (std::size_t e = 0; e < group_.size(); ++e) {
        bool same = true;
        for (int idx = 0; idx < grid_.node_count(); ++idx) {
            if (map(e, idx) != grid_.index(a.apply(grid_, grid_.coord(idx)))) {
                same = false;
                break;
            }
        }
        if (same) return e;
    }
    throw Error("automorphism " + to_string(a) + " does not act on " + to_string(grid_));
}

}  // namespace gridexp
