#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "gridexp/grid.hpp"

using namespace gridexp;

namespace {

// Adjacency-preserving node bijections, found by backtracking over all
// permutations. Independent of the generator representation.
std::set<std::vector<int>> brute_force_automorphisms(const GridDims& g) {
    const int n = g.node_count();
    auto adjacent = [&](int a, int b) {
        auto u = g.coord(a), v = g.coord(b);
        return std::abs(u.x - v.x) + std::abs(u.y - v.y) == 1;
    };
    std::set<std::vector<int>> out;
    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    auto extend = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            out.insert(perm);
            return;
        }
        for (int img = 0; img < n; ++img) {
            if (used[static_cast<std::size_t>(img)]) continue;
            bool ok = true;
            for (int prev = 0; prev < pos && ok; ++prev) {
                if (adjacent(prev, pos) != adjacent(perm[static_cast<std::size_t>(prev)], img)) ok = false;
            }
            if (!ok) continue;
            perm[static_cast<std::size_t>(pos)] = img;
            used[static_cast<std::size_t>(img)] = true;
            self(self, pos + 1);
            used[static_cast<std::size_t>(img)] = false;
        }
        perm[static_cast<std::size_t>(pos)] = -1;
    };
    extend(extend, 0);
    return out;
}

std::set<std::vector<int>> generated(const GridDims& g) {
    std::set<std::vector<int>> out;
    for (const auto& f : automorphisms(g)) {
        std::vector<int> perm;
        for (int idx = 0; idx < g.node_count(); ++idx) perm.push_back(g.index(f.apply(g, g.coord(idx))));
        out.insert(perm);
    }
    return out;
}

}  // namespace

TEST_CASE("make_grid normalizes and validates") {
    CHECK(make_grid(4, 3) == GridDims{3, 4});
    CHECK(make_grid(1, 1) == GridDims{1, 1});
    CHECK_THROWS_AS(make_grid(0, 5), InvalidDimension);
    CHECK_THROWS_AS(make_grid(-2, 3), InvalidDimension);
    CHECK(parse_grid("3x4") == GridDims{3, 4});
    CHECK(parse_grid("4X3") == GridDims{3, 4});
    CHECK_THROWS_AS(parse_grid("3-4"), ParseError);
}

TEST_CASE("degree") {
    CHECK(degree(make_grid(3, 4), {0, 0}) == 2);
    CHECK(degree(make_grid(1, 5), {0, 0}) == 1);
    CHECK(degree(make_grid(3, 3), {1, 1}) == 4);
    CHECK_THROWS_AS(degree(make_grid(3, 3), {3, 0}), OutOfBounds);
}

TEST_CASE("corners") {
    auto c = corners(make_grid(3, 4));
    CHECK(std::set<NodeCoord>(c.begin(), c.end()) == std::set<NodeCoord>{{0, 0}, {3, 0}, {0, 2}, {3, 2}});
    c = corners(make_grid(1, 5));
    CHECK(std::set<NodeCoord>(c.begin(), c.end()) == std::set<NodeCoord>{{0, 0}, {4, 0}});
    CHECK(corners(make_grid(1, 1)) == std::vector<NodeCoord>{{0, 0}});
}

TEST_CASE("borderlines") {
    auto b = borderlines(make_grid(2, 3));
    REQUIRE(b.size() == 4);
    std::multiset<std::size_t> lengths;
    for (const auto& l : b) lengths.insert(l.size());
    CHECK(lengths == std::multiset<std::size_t>{2, 2, 3, 3});
    CHECK(longest_borderlines(make_grid(2, 3)).size() == 2);

    b = borderlines(make_grid(1, 4));
    REQUIRE(b.size() == 1);
    CHECK(b[0].size() == 4);

    b = borderlines(make_grid(3, 3));
    CHECK(b.size() == 4);
    for (const auto& l : b) CHECK(l.size() == 3);

    CHECK_THROWS_AS(borderlines(make_grid(1, 1)), NoBorderline);

    // Each listed corner to corner and contiguous.
    for (auto g : {make_grid(2, 3), make_grid(3, 5), make_grid(1, 6)}) {
        auto cm = corner_mask(g);
        for (const auto& l : borderlines(g)) {
            CHECK(has(cm, g.index(l.front())));
            CHECK(has(cm, g.index(l.back())));
            for (std::size_t n = 1; n < l.size(); ++n) CHECK(dist(l[n - 1], l[n]) == 1);
        }
    }
}

TEST_CASE("borderline membership counts") {
    for (auto g : {make_grid(2, 2), make_grid(2, 5), make_grid(3, 4), make_grid(4, 4), make_grid(1, 4)}) {
        auto lines = borderlines(g);
        auto cm = corner_mask(g);
        for (int idx = 0; idx < g.node_count(); ++idx) {
            int count = 0;
            for (const auto& l : lines) count += static_cast<int>(std::count(l.begin(), l.end(), g.coord(idx)));
            CHECK(count <= 2);
            if (has(cm, idx)) CHECK(count == (g.i > 1 ? 2 : 1));
        }
    }
}

TEST_CASE("dist") {
    auto g = make_grid(3, 4);
    CHECK(dist(g, {0, 0}, {3, 2}) == 5);
    CHECK(dist(g, {2, 1}, {2, 1}) == 0);
    CHECK(dist(make_grid(3, 3), {0, 0}, {1, 1}) == 2);
    // Metric axioms and adjacency on a small grid.
    for (int a = 0; a < g.node_count(); ++a)
        for (int b = 0; b < g.node_count(); ++b) {
            auto u = g.coord(a), v = g.coord(b);
            CHECK(dist(u, v) == dist(v, u));
            CHECK((dist(u, v) == 0) == (a == b));
            bool adj = has(neighbor_mask(g, a), b);
            CHECK((dist(u, v) == 1) == adj);
            for (int c = 0; c < g.node_count(); ++c) CHECK(dist(u, v) <= dist(u, g.coord(c)) + dist(g.coord(c), v));
        }
}

TEST_CASE("automorphism group matches brute force for every grid up to 16 nodes") {
    for (int i = 1; i <= 4; ++i)
        for (int j = i; i * j <= 16; ++j) {
            auto g = make_grid(i, j);
            auto oracle = brute_force_automorphisms(g);
            CAPTURE(to_string(g));
            CHECK(generated(g) == oracle);
        }
    CHECK(automorphisms(make_grid(3, 4)).size() == 4);
    CHECK(automorphisms(make_grid(3, 3)).size() == 8);
    CHECK(automorphisms(make_grid(1, 1)).size() == 1);
    CHECK(automorphisms(make_grid(1, 5)).size() == 2);
}

TEST_CASE("automorphisms preserve degree and compose") {
    for (auto g : {make_grid(3, 3), make_grid(2, 5), make_grid(4, 4)}) {
        auto group = automorphisms(g);
        CHECK(group.front().is_identity());
        for (const auto& f : group)
            for (int idx = 0; idx < g.node_count(); ++idx)
                CHECK(degree(g, f.apply(g, g.coord(idx))) == degree(g, g.coord(idx)));
        for (const auto& a : group)
            for (const auto& b : group) {
                auto ab = compose(a, b);
                CHECK(std::find(group.begin(), group.end(), ab) != group.end());
                for (int idx = 0; idx < g.node_count(); ++idx) {
                    auto v = g.coord(idx);
                    CHECK(ab.apply(g, v) == a.apply(g, b.apply(g, v)));
                }
            }
        for (const auto& a : group)
            for (int idx = 0; idx < g.node_count(); ++idx) {
                auto v = g.coord(idx);
                CHECK(inverse(a).apply(g, a.apply(g, v)) == v);
            }
    }
}

TEST_CASE("symmetry table agrees with direct application") {
    auto g = make_grid(3, 3);
    SymmetryTable sym(g);
    REQUIRE(sym.size() == 8);
    for (std::size_t e = 0; e < sym.size(); ++e) {
        CHECK(sym.index_of(sym.element(e)) == e);
        for (int idx = 0; idx < g.node_count(); ++idx) {
            CHECK(sym.map(e, idx) == g.index(sym.element(e).apply(g, g.coord(idx))));
            CHECK(sym.map(sym.inverse_of(e), sym.map(e, idx)) == idx);
        }
        CHECK(sym.map_mask(e, g.all_nodes()) == g.all_nodes());
    }
}
