#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "gridexp/configuration.hpp"
#include "gridexp/triple.hpp"
#include "support/properties.hpp"

using namespace gridexp;

namespace {

Configuration random_config(const GridDims& g, std::mt19937_64& rng, int max_count) {
    Configuration c(g);
    std::uniform_int_distribution<int> count(0, max_count);
    for (int idx = 0; idx < g.node_count(); ++idx) c.set(g.coord(idx), count(rng));
    return c;
}

// Number of orbits of k-subsets of the 9 nodes under the 8 symmetries of the
// square, by explicit enumeration of each orbit.
int orbit_count_3x3(int k) {
    // Symmetries written out as coordinate maps, independent of Automorphism.
    auto maps = std::vector<std::function<NodeCoord(NodeCoord)>>{
        [](NodeCoord p) { return p; },
        [](NodeCoord p) { return NodeCoord{2 - p.x, p.y}; },
        [](NodeCoord p) { return NodeCoord{p.x, 2 - p.y}; },
        [](NodeCoord p) { return NodeCoord{2 - p.x, 2 - p.y}; },
        [](NodeCoord p) { return NodeCoord{p.y, p.x}; },
        [](NodeCoord p) { return NodeCoord{2 - p.y, p.x}; },
        [](NodeCoord p) { return NodeCoord{p.y, 2 - p.x}; },
        [](NodeCoord p) { return NodeCoord{2 - p.y, 2 - p.x}; },
    };
    std::set<int> seen;
    int orbits = 0;
    for (int m = 0; m < 512; ++m) {
        if (std::popcount(static_cast<unsigned>(m)) != k || seen.count(m)) continue;
        ++orbits;
        for (const auto& f : maps) {
            int img = 0;
            for (int idx = 0; idx < 9; ++idx)
                if (m & (1 << idx)) {
                    auto p = f({idx % 3, idx / 3});
                    img |= 1 << (p.y * 3 + p.x);
                }
            seen.insert(img);
        }
    }
    return orbits;
}

}  // namespace

TEST_CASE("observe thresholds in weak mode") {
    auto g = make_grid(3, 3);
    auto c = parse_configuration(g, "0,0:2;2,0");
    auto weak = observe(c, Multiplicity::Weak);
    CHECK(weak[0] == 2);
    CHECK(weak[2] == 1);
    CHECK(std::count(weak.begin(), weak.end(), 0) == 7);
    auto strong = observe(parse_configuration(g, "1,0:3"), Multiplicity::Strong);
    CHECK(strong[1] == 3);
}

TEST_CASE("weak equals threshold of strong on random configurations") {
    auto bad = testing::threshold_failures(10000);
    CAPTURE(bad);
    CHECK(bad.empty());
}

TEST_CASE("configuration text round trip and errors") {
    auto g = make_grid(3, 4);
    auto c = parse_configuration(g, "0,0;1,0;2,0");
    CHECK(c.robot_count() == 3);
    CHECK(c.towerless());
    CHECK(format_configuration(c) == "0,0;1,0;2,0");
    auto t = parse_configuration(g, "0,0;0,0;1,1");
    CHECK(t.at(NodeCoord{0, 0}) == 2);
    CHECK_FALSE(t.towerless());
    CHECK(format_configuration(t) == "0,0:2;1,1");
    CHECK_THROWS_AS(parse_configuration(g, "0,0;9,9"), ParseError);
    CHECK_THROWS_AS(parse_configuration(g, "0;1"), ParseError);
    CHECK_THROWS_AS(parse_configuration(g, "a,b"), ParseError);
}

TEST_CASE("view_of") {
    auto g = make_grid(3, 4);
    auto c = parse_configuration(g, "0,0;1,0;2,0");
    auto a = view_of(c, {0, 0}, Multiplicity::Weak);
    auto b = view_of(c, {2, 0}, Multiplicity::Weak);
    CHECK_FALSE(same_view(a, b));
    CHECK(same_view(a, view_of(c.mapped({true, false, false}), {3, 0}, Multiplicity::Weak)));
    CHECK_THROWS_AS(view_of(c, {3, 2}, Multiplicity::Weak), NotPresent);

    auto full = parse_configuration(make_grid(3, 3), "1,1:4");
    auto v = view_of(full, {1, 1}, Multiplicity::Weak);
    CHECK(v.tower({1, 1}));
    CHECK(stabilizer(v).size() == 8);
}

TEST_CASE("canonical form") {
    auto g = make_grid(3, 4);
    CHECK(indistinguishable(parse_configuration(g, "0,0"), parse_configuration(g, "3,2")));
    CHECK_FALSE(indistinguishable(parse_configuration(g, "1,0"), parse_configuration(g, "1,1")));

    auto bad = testing::canonical_failures(2000);
    CAPTURE(bad);
    CHECK(bad.empty());
}

TEST_CASE("towerless class counts on the 3x3 grid match orbit enumeration") {
    auto g = make_grid(3, 3);
    for (int k = 1; k <= 5; ++k) {
        std::set<std::vector<std::uint8_t>> classes;
        for (int m = 0; m < 512; ++m) {
            if (std::popcount(static_cast<unsigned>(m)) != k) continue;
            Configuration c(g);
            for (int idx = 0; idx < 9; ++idx)
                if (m & (1 << idx)) c.set(g.coord(idx), 1);
            classes.insert(canonical_form(c).representative.counts());
        }
        CAPTURE(k);
        CHECK(static_cast<int>(classes.size()) == orbit_count_3x3(k));
    }
}

TEST_CASE("decision_orbit") {
    auto g = make_grid(3, 3);
    auto tower = parse_configuration(g, "1,1:5");
    auto v = view_of(tower, {1, 1}, Multiplicity::Weak);
    NodeMask all4 = neighbor_mask(g, g.index({1, 1}));
    CHECK(decision_orbit(v, Decision::move(all4)) == Decision::move(all4));
    CHECK_THROWS_AS(decision_orbit(v, Decision::move(bit(g.index({1, 0})))), OrbitViolation);
    CHECK_THROWS_AS(decision_orbit(v, Decision::move(bit(g.index({0, 0})))), OrbitViolation);

    auto asym = parse_configuration(g, "0,0;1,0;2,1");
    auto w = view_of(asym, {1, 0}, Multiplicity::Weak);
    REQUIRE(stabilizer(w).size() == 1);
    CHECK_NOTHROW(decision_orbit(w, Decision::move(bit(g.index({1, 1})))));
    CHECK(decision_orbit(w, Decision::stay()).is_stay());
}

TEST_CASE("decision_orbit acceptance is invariant under relabeling") {
    std::mt19937_64 rng(3);
    auto g = make_grid(3, 3);
    for (int n = 0; n < 500; ++n) {
        auto c = random_config(g, rng, 1);
        if (c.robot_count() == 0) continue;
        int self = -1;
        for (int idx = 0; idx < 9; ++idx)
            if (c.at(idx)) self = idx;
        auto v = view_of(c, g.coord(self), Multiplicity::Weak);
        NodeMask targets = neighbor_mask(g, self) & rng();
        if (targets == 0) continue;
        bool accepted = is_orbit_closed(v, Decision::move(targets));
        for (const auto& f : automorphisms(g)) {
            auto fv = view_of(c.mapped(f), f.apply(g, g.coord(self)), Multiplicity::Weak);
            NodeMask ft = 0;
            for_each_node(targets, [&](int idx) { ft |= bit(g.index(f.apply(g, g.coord(idx)))); });
            CHECK(is_orbit_closed(fv, Decision::move(ft)) == accepted);
        }
    }
}

TEST_CASE("triple classification examples") {
    auto g = make_grid(3, 3);
    auto t = triple_classify(parse_configuration(g, "0,0;1,0;2,1;0,2;1,2"));
    CHECK(t.triple == std::array<int, 3>{2, 1, 2});
    CHECK(t.axis == Axis::Rows);
    CHECK(t.B == 2);

    t = triple_classify(parse_configuration(g, "0,0;1,0;2,0;0,1;1,1"));
    CHECK(t.d == 1);
    CHECK(t.biggest == 3);
    CHECK(t.triple == std::array<int, 3>{3, 2, 0});

    t = triple_classify(parse_configuration(g, "1,0;2,0;0,1;0,2;1,2"));
    CHECK(t.triple == std::array<int, 3>{2, 1, 2});

    CHECK_THROWS_AS(triple_classify(parse_configuration(make_grid(3, 4), "0,0;1,0;2,0;3,0;0,1")),
                    PreconditionFailed);
    CHECK_THROWS_AS(triple_classify(parse_configuration(g, "0,0;1,0;2,0;0,1")), PreconditionFailed);
    CHECK_THROWS_AS(triple_classify(parse_configuration(g, "0,0:2;1,0;2,0;0,1")), PreconditionFailed);
}

TEST_CASE("triple classification invariants over all 126 towerless configurations") {
    auto g = make_grid(3, 3);
    for (int m = 0; m < 512; ++m) {
        if (std::popcount(static_cast<unsigned>(m)) != 5) continue;
        Configuration c(g);
        for (int idx = 0; idx < 9; ++idx)
            if (m & (1 << idx)) c.set(g.coord(idx), 1);
        auto t = triple_classify(c);
        CHECK(t.triple[0] + t.triple[1] + t.triple[2] == 5);
        bool guide_has_biggest = false;
        for (const auto& b : t.blocks) {
            if (b.size() != t.biggest) continue;
            for (const auto& l : t.guide_lines)
                if (l == b.line) guide_has_biggest = true;
        }
        CHECK(guide_has_biggest);
        // Classification factors through the symmetry class.
        for (const auto& f : automorphisms(g)) CHECK(triple_classify(c.mapped(f)).triple == t.triple);
    }
}
