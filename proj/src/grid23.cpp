#include "gridexp/protocols.hpp"

namespace gridexp {

namespace {

// Free neighbors of p that bring it closer to t.
NodeMask steps(const Configuration& c, NodeCoord p, NodeCoord t) {
    NodeMask m = 0;
    for (auto n : neighbors(c.grid(), p))
        if (c.at(n) == 0 && dist(n, t) < dist(p, t)) m |= bit(c.grid().index(n));
    return m;
}

NodeMask grid23_move(const Configuration& c, NodeCoord self) {
    const auto& g = c.grid();
    if (c.towerless()) {
        for (int row = 0; row < 2; ++row) {
            int on_row = 0;
            NodeCoord hole{};
            for (int x = 0; x < 3; ++x) {
                if (c.at(NodeCoord{x, row})) {
                    ++on_row;
                } else {
                    hole = {x, row};
                }
            }
            if (on_row == 3) {
                if (self != NodeCoord{1, row}) return 0;
                return bit(g.index({0, row})) | bit(g.index({2, row}));
            }
            if (on_row == 2 && self.y != row) return steps(c, self, hole);
        }
        return 0;
    }
    // Tower phase: the tower sits on a corner; the single robot crosses to
    // the other long side, then walks back to the tower's column.
    NodeMask towers = c.towers();
    if (popcount(towers) != 1 || popcount(c.singles()) != 1) return 0;
    NodeCoord t = g.coord(std::countr_zero(towers));
    if (c.at(self) != 1) return 0;
    if (self.y == t.y) return bit(g.index({self.x, 1 - self.y}));
    if (self.x == t.x) return 0;
    return bit(g.index({self.x + (t.x > self.x ? 1 : -1), self.y}));
}

}  // namespace

Decision grid23(const View& v) {
    if (!(v.grid == GridDims{2, 3})) throw PreconditionFailed("grid23 runs on the (2,3) grid only");
    return Decision::move(grid23_move(v.as_configuration(), v.self_coord()));
}

Decision stay_protocol(const View&) { return Decision::stay(); }

}  // namespace gridexp
