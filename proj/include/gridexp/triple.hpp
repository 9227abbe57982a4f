#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridexp/configuration.hpp"

namespace gridexp {

/// Orientation of a family of grid lines: Rows are the lines y = const.
enum class Axis { Rows, Columns };

struct GridLine {
    Axis axis = Axis::Rows;
    int index = 0;  // y for rows, x for columns

    friend bool operator==(const GridLine&, const GridLine&) = default;
};

std::string to_string(const GridLine& l);

/// Maximal run of robots on one line whose consecutive members are exactly
/// the interdistance apart. A lone robot forms a block of size 1.
struct DBlock {
    GridLine line;
    std::vector<NodeCoord> robots;  // ordered along the line

    int size() const { return static_cast<int>(robots.size()); }
};

/// Line-count summary of a towerless 5-robot configuration on the (3,3)
/// grid, oriented by the guide-line election.
struct TripleClass {
    int d = 0;                     // interdistance
    std::vector<DBlock> blocks;    // every maximal block, both axes
    int biggest = 0;               // size of the biggest block
    std::vector<GridLine> guide_lines;
    Axis axis = Axis::Rows;        // orientation of the counted lines
    std::array<int, 3> lines{};    // line index counted as X1, X2, X3
    std::array<int, 3> triple{};   // (X1, X2, X3)
    int B = 0;                     // biggest blocks parallel to the elected axis
    int B_prime = 0;               // biggest blocks parallel to the other axis
    bool ambiguous = false;        // election tied between perpendicular axes

    /// Lines parallel to the guide lines, listed X1, X2, X3.
    GridLine line(int which) const { return {axis, lines[static_cast<std::size_t>(which)]}; }
    std::string name() const;
};

/// Interdistance: minimum pairwise Manhattan distance among robots.
int interdistance(const Configuration& c);

/// Maximal d-blocks of every row and column.
std::vector<DBlock> d_blocks(const Configuration& c, int d);

/// Classifies a towerless 5-robot configuration of the (3,3) grid.
/// Throws PreconditionFailed for any other grid, robot count, or a tower.
TripleClass triple_classify(const Configuration& c);

/// Counts per line along an axis (index 0..2).
std::array<int, 3> line_counts(const Configuration& c, Axis axis);

}  // namespace gridexp
