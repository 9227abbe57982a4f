#include "gridexp/triple.hpp"

#include <algorithm>
#include <climits>

namespace gridexp {

std::string to_string(const GridLine& l) {
    return (l.axis == Axis::Rows ? "row y=" : "column x=") + std::to_string(l.index);
}

std::string TripleClass::name() const {
    return "(" + std::to_string(triple[0]) + "," + std::to_string(triple[1]) + "," +
           std::to_string(triple[2]) + ")";
}

namespace {

std::vector<NodeCoord> robots_of(const Configuration& c) {
    std::vector<NodeCoord> out;
    const auto& g = c.grid();
    for (int idx = 0; idx < g.node_count(); ++idx) {
        for (int n = 0; n < c.at(idx); ++n) out.push_back(g.coord(idx));
    }
    return out;
}

NodeCoord on_line(const GridLine& l, int pos) {
    return l.axis == Axis::Rows ? NodeCoord{pos, l.index} : NodeCoord{l.index, pos};
}

}  // namespace

int interdistance(const Configuration& c) {
    auto robots = robots_of(c);
    int best = INT_MAX;
    for (std::size_t a = 0; a < robots.size(); ++a)
        for (std::size_t b = a + 1; b < robots.size(); ++b) best = std::min(best, dist(robots[a], robots[b]));
    return best == INT_MAX ? 0 : best;
}

std::array<int, 3> line_counts(const Configuration& c, Axis axis) {
    std::array<int, 3> out{};
    for (int line = 0; line < 3; ++line) {
        for (int pos = 0; pos < 3; ++pos) out[static_cast<std::size_t>(line)] += c.at(on_line({axis, line}, pos));
    }
    return out;
}

std::vector<DBlock> d_blocks(const Configuration& c, int d) {
    std::vector<DBlock> out;
    const auto& g = c.grid();
    for (Axis axis : {Axis::Rows, Axis::Columns}) {
        int lines = axis == Axis::Rows ? g.i : g.j;
        int length = axis == Axis::Rows ? g.j : g.i;
        for (int line = 0; line < lines; ++line) {
            GridLine l{axis, line};
            std::vector<int> positions;
            for (int pos = 0; pos < length; ++pos) {
                if (c.at(on_line(l, pos)) > 0) positions.push_back(pos);
            }
            DBlock current{l, {}};
            for (std::size_t p = 0; p < positions.size(); ++p) {
                if (p > 0 && positions[p] - positions[p - 1] != d) {
                    out.push_back(current);
                    current.robots.clear();
                }
                current.robots.push_back(on_line(l, positions[p]));
            }
            if (!current.robots.empty()) out.push_back(current);
        }
    }
    return out;
}

TripleClass triple_classify(const Configuration& c) {
    if (!(c.grid() == GridDims{3, 3})) throw PreconditionFailed("triple classification needs the (3,3) grid");
    if (c.robot_count() != 5) throw PreconditionFailed("triple classification needs exactly 5 robots");
    if (!c.towerless()) throw PreconditionFailed("triple classification needs a towerless configuration");

    TripleClass t;
    t.d = interdistance(c);
    t.blocks = d_blocks(c, t.d);
    for (const auto& b : t.blocks) t.biggest = std::max(t.biggest, b.size());

    // Candidate guide lines per axis, and how many biggest blocks each axis holds.
    std::array<std::vector<GridLine>, 2> candidates;
    std::array<int, 2> tally{};
    std::array<bool, 2> on_border{};
    for (const auto& b : t.blocks) {
        if (b.size() != t.biggest) continue;
        auto a = static_cast<std::size_t>(b.line.axis);
        ++tally[a];
        if (std::find(candidates[a].begin(), candidates[a].end(), b.line) == candidates[a].end()) {
            candidates[a].push_back(b.line);
        }
        if (b.line.index != 1) on_border[a] = true;
    }

    std::size_t chosen = candidates[0].empty() ? 1 : 0;
    if (!candidates[0].empty() && !candidates[1].empty()) {
        if (on_border[0] != on_border[1]) {
            chosen = on_border[0] ? 0 : 1;
        } else if (tally[0] != tally[1]) {
            chosen = tally[0] > tally[1] ? 0 : 1;
        } else {
            t.ambiguous = true;
            chosen = 0;
        }
    }
    t.axis = static_cast<Axis>(chosen);
    t.guide_lines = candidates[chosen];
    t.B = tally[chosen];
    t.B_prime = tally[1 - chosen];

    auto counts = line_counts(c, t.axis);
    std::array<int, 3> reversed{counts[2], counts[1], counts[0]};
    if (reversed > counts) {
        t.triple = reversed;
        t.lines = {2, 1, 0};
    } else {
        t.triple = counts;
        t.lines = {0, 1, 2};
    }
    return t;
}

}  // namespace gridexp
