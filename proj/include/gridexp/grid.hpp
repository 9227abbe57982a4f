#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gridexp/errors.hpp"

namespace gridexp {

/// Set of nodes of one grid, indexed row-major (index = y * j + x).
/// Grids handled by this library have at most 64 nodes.
using NodeMask = std::uint64_t;

constexpr NodeMask bit(int index) { return NodeMask{1} << index; }
constexpr int popcount(NodeMask m) { return std::popcount(m); }
constexpr bool has(NodeMask m, int index) { return (m >> index) & 1U; }

/// Calls fn(index) for every set bit, lowest index first.
template <typename Fn>
void for_each_node(NodeMask m, Fn&& fn) {
    while (m != 0) {
        int idx = std::countr_zero(m);
        fn(idx);
        m &= m - 1;
    }
}

struct NodeCoord {
    int x = 0;  // along the long side, [0, j)
    int y = 0;  // along the short side, [0, i)

    friend bool operator==(const NodeCoord&, const NodeCoord&) = default;
    // Row-major: y is the primary key.
    friend std::strong_ordering operator<=>(const NodeCoord& a, const NodeCoord& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

std::string to_string(const NodeCoord& c);

/// An (i,j)-grid with i <= j. i counts node rows (Y), j node columns (X).
struct GridDims {
    int i = 1;
    int j = 1;

    friend bool operator==(const GridDims&, const GridDims&) = default;

    int node_count() const { return i * j; }
    bool is_square() const { return i == j; }
    bool contains(NodeCoord c) const { return c.x >= 0 && c.x < j && c.y >= 0 && c.y < i; }
    int index(NodeCoord c) const { return c.y * j + c.x; }
    NodeCoord coord(int index) const { return {index % j, index / j}; }
    NodeMask all_nodes() const {
        return node_count() == 64 ? ~NodeMask{0} : (bit(node_count()) - 1);
    }
};

std::string to_string(const GridDims& g);

/// Normalizing constructor: returns (min(a,b), max(a,b)).
/// Throws InvalidDimension for non-positive sizes or more than 64 nodes.
GridDims make_grid(int a, int b);

/// Parses "IxJ" (separator x or X), normalizing the orientation.
GridDims parse_grid(std::string_view text);

int degree(const GridDims& g, NodeCoord v);
std::vector<NodeCoord> neighbors(const GridDims& g, NodeCoord v);
NodeMask neighbor_mask(const GridDims& g, int index);

/// Minimum-degree nodes, row-major.
std::vector<NodeCoord> corners(const GridDims& g);
NodeMask corner_mask(const GridDims& g);

using Borderline = std::vector<NodeCoord>;

/// Boundary chains, each listed corner to corner. One chain for (1,j>1),
/// four otherwise: rows y=0 and y=i-1 (length j), then columns x=0 and
/// x=j-1 (length i). Throws NoBorderline on a (1,1) grid.
std::vector<Borderline> borderlines(const GridDims& g);
std::vector<Borderline> longest_borderlines(const GridDims& g);

int dist(NodeCoord u, NodeCoord v);
int dist(const GridDims& g, NodeCoord u, NodeCoord v);

/// Grid symmetry built from three generators. Applied as: reflect x, then
/// reflect y, then swap the axes (the swap is only valid on square grids).
struct Automorphism {
    bool flip_x = false;
    bool flip_y = false;
    bool transpose = false;

    friend bool operator==(const Automorphism&, const Automorphism&) = default;

    NodeCoord apply(const GridDims& g, NodeCoord c) const;
    bool is_identity() const { return !flip_x && !flip_y && !transpose; }
};

std::string to_string(const Automorphism& f);

/// (a ∘ b): apply b first, then a.
Automorphism compose(const Automorphism& a, const Automorphism& b);
Automorphism inverse(const Automorphism& a);

/// Complete automorphism group: 1, 2, 4 or 8 elements, identity first.
std::vector<Automorphism> automorphisms(const GridDims& g);

/// Precomputed node permutations for every automorphism of one grid. This is
/// the representation hot loops (canonicalization, verification) work with.
class SymmetryTable {
public:
    explicit SymmetryTable(const GridDims& g);

    const GridDims& grid() const { return grid_; }
    std::size_t size() const { return group_.size(); }
    const Automorphism& element(std::size_t e) const { return group_[e]; }
    int map(std::size_t e, int index) const { return perm_[e][static_cast<std::size_t>(index)]; }
    NodeMask map_mask(std::size_t e, NodeMask m) const;
    std::size_t inverse_of(std::size_t e) const { return inverse_[e]; }
    std::size_t index_of(const Automorphism& a) const;

private:
    GridDims grid_;
    std::vector<Automorphism> group_;
    std::vector<std::vector<int>> perm_;
    std::vector<std::size_t> inverse_;
};

}  // namespace gridexp
