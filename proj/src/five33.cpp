#include <array>

#include "gridexp/protocols.hpp"

namespace gridexp {

namespace {

struct Step {
    NodeCoord from;
    NodeCoord to;
};

// Picture rows run top (y=2) to bottom (y=0): 'o' one robot, 'T' a tower.
// A rule lists one move per orbit; matching through every automorphism
// closes it under the configuration's symmetry. Pictures without a rule,
// and tower pictures absent from the table, are Stay.
struct Rule {
    const char* picture;
    std::vector<Step> steps;
};

const std::vector<Rule>& rules() {
    static const std::vector<Rule> table = {
        // Preparation, one rule per towerless class, grouped by triple.
        // (3,2,0): the special configuration and the free-center one.
        {"ooo/.oo/...", {{{2, 1}, {1, 1}}}},
        {"ooo/o.o/...", {{{0, 1}, {1, 1}}}},
        // (2,3,0): onto the free node of the 2-line.
        {"o.o/ooo/...", {{{1, 1}, {1, 2}}}},
        {".oo/ooo/...", {{{0, 1}, {0, 2}}}},
        // (3,1,1): the lone border robot toward the middle line.
        {"ooo/.o./..o", {{{2, 0}, {2, 1}}}},
        {"ooo/o../..o", {{{2, 0}, {2, 1}}}},
        {"ooo/..o/..o", {{{2, 0}, {1, 0}}}},  // blocked: both lone robots step aside
        {".oo/o.o/..o", {{{2, 0}, {1, 0}}}},  // the second of them
        {"..o/ooo/..o", {{{0, 1}, {0, 0}}}},
        // (2,2,1): the lone robot toward the free node of the middle line.
        {".oo/oo./..o", {{{2, 0}, {2, 1}}}},
        {"oo./oo./..o", {{{2, 0}, {2, 1}}}},
        {"oo./.oo/..o", {{{1, 1}, {1, 0}}}},
        {".oo/o.o/.o.", {{{1, 0}, {0, 0}}}},  // both meet on the free corner
        // (1,3,1): a block robot with two free neighbors; the plus makes a tower.
        {".o./ooo/..o", {{{0, 1}, {0, 2}}}},
        {"o../ooo/..o", {{{1, 1}, {1, 0}}}},
        {".o./ooo/.o.", {{{1, 1}, {1, 0}}}},
        // (2,1,2).
        {"o.o/oo./..o", {{{1, 1}, {2, 1}}}},
        {"o.o/o.o/.o.", {{{1, 0}, {0, 0}}}},
        {"o.o/o../.oo", {{{2, 2}, {2, 1}}}},
        {"o.o/.o./o.o", {{{1, 1}, {1, 0}}}},
        {"oo./o.o/..o", {{{2, 1}, {2, 0}}}},  // completes the corner tower
        // (3,0,2).
        {"ooo/.../o.o", {{{0, 0}, {0, 1}}}},
        {"o.o/o.o/..o", {{{0, 1}, {1, 1}}}},

        // Exploration after the special: full line and a central tower.
        {".../.T./ooo", {{{0, 0}, {0, 1}}}},
        {".../.To/oo.", {{{0, 0}, {0, 1}}}},
        {".o./.To/.o.", {{{2, 1}, {2, 2}}}},
        {".o./.T./oo.", {{{1, 2}, {2, 2}}}},
        {"..o/.T./oo.", {{{1, 0}, {2, 0}}}},
        {"..o/.T./o.o", {{{0, 0}, {1, 0}}}},
        {"o../.T./oo.", {{{0, 2}, {0, 1}}}},

        // Exploration after the corner tower.
        {".oo/..o/T..", {{{1, 2}, {0, 2}}}},
        {"o.o/..o/T..", {{{2, 1}, {2, 0}}}},
        {"o.o/.../T.o", {{{2, 2}, {1, 2}}}},
        {"oo./.../T.o", {{{1, 2}, {1, 1}}}},
        {"o../.o./T.o", {{{1, 1}, {0, 1}}}},
        {"o../o../T.o", {{{2, 0}, {1, 0}}}},

        // Exploration after the plus: tower on a border middle.
        {".o./o.o/.T.", {{{0, 1}, {0, 0}}}},
        {".o./..o/oT.", {{{2, 1}, {2, 0}}}},
        {".o./.../oTo", {{{1, 2}, {0, 2}}}},
        {"o../.../oTo", {{{2, 0}, {2, 1}}}},
        {"o../..o/oT.", {{{2, 1}, {2, 2}}}},
    };
    return table;
}

constexpr GridDims kGrid{3, 3};

using Labels = std::array<std::uint8_t, 9>;

Labels parse_picture(const char* p) {
    Labels out{};
    int x = 0, y = 2;
    for (; *p; ++p) {
        if (*p == '/') {
            --y;
            x = 0;
            continue;
        }
        out[static_cast<std::size_t>(kGrid.index({x, y}))] = *p == 'o' ? 1 : *p == 'T' ? 2 : 0;
        ++x;
    }
    return out;
}

struct CompiledRule {
    Labels labels;
    std::vector<std::pair<int, int>> steps;
};

const std::vector<CompiledRule>& compiled() {
    static const std::vector<CompiledRule> table = [] {
        std::vector<CompiledRule> out;
        for (const auto& r : rules()) {
            CompiledRule c{parse_picture(r.picture), {}};
            for (const auto& s : r.steps) c.steps.emplace_back(kGrid.index(s.from), kGrid.index(s.to));
            out.push_back(std::move(c));
        }
        return out;
    }();
    return table;
}

}  // namespace

std::vector<NodeMask> five33_moves(const Configuration& c) {
    if (!(c.grid() == kGrid)) throw UnsupportedInstance("five33 runs on the (3,3) grid only");
    static const SymmetryTable sym(kGrid);
    Labels labels{};
    for (int v = 0; v < 9; ++v) labels[static_cast<std::size_t>(v)] = threshold(static_cast<std::uint8_t>(c.at(v)));
    std::vector<NodeMask> moves(9, 0);
    for (const auto& rule : compiled()) {
        for (std::size_t e = 0; e < sym.size(); ++e) {
            bool match = true;
            for (int v = 0; v < 9 && match; ++v) {
                match = rule.labels[static_cast<std::size_t>(sym.map(e, v))] == labels[static_cast<std::size_t>(v)];
            }
            if (!match) continue;
            auto back = sym.inverse_of(e);
            for (auto [from, to] : rule.steps) {
                moves[static_cast<std::size_t>(sym.map(back, from))] |= bit(sym.map(back, to));
            }
        }
    }
    return moves;
}

Decision five33(const View& v) {
    auto moves = five33_moves(v.as_configuration());
    return decision_orbit(v, Decision::move(moves[static_cast<std::size_t>(v.self)]));
}

}  // namespace gridexp
