#pragma once

#include <string>
#include <vector>

#include "gridexp/trace.hpp"

namespace gridexp {

/// Longest walk of one robot beside an immobile 2-tower on the (3,3) grid
/// that never re-enters a configuration class.
struct WalkBoundResult {
    int max_new_visited = 0;         // nodes other than the start robot node and the tower
    NodeCoord tower{};
    std::vector<NodeCoord> witness_walk;  // robot positions, start included
    int class_count = 0;             // classes of (2-tower, single robot) placements
    std::size_t walks = 0;           // class-simple walks enumerated
    /// Same count when the first class-repeating move is still taken.
    int post_repetition_max = 0;
    std::vector<NodeCoord> post_repetition_witness;
};

/// allowed(tower, from, to) restricts the robot's moves further (the default
/// allows every neighbor other than the tower).
using WalkFilter = std::function<bool(NodeCoord, NodeCoord, NodeCoord)>;
WalkBoundResult tower_walk_bound(const WalkFilter& allowed = {});
Json to_json(const WalkBoundResult& r);
/// Certificate with the producing command line and the checked bound.
Json tower_walk_certificate();

struct TowerOrbit {
    std::vector<NodeCoord> destinations;
    bool adversary_undoes = false;  // every possible predecessor node is in the orbit
    int new_nodes = 0;              // best guaranteed count with this first move
};

struct TowerPlacement {
    std::string name;  // "center", "border-middle", "corner"
    NodeCoord tower{};
    std::vector<TowerOrbit> orbits;
    int new_nodes = 0;  // max over orbits (and Stay = 0)
};

struct FullTowerReport {
    int k = 0;
    std::vector<TowerPlacement> placements;
    int bound = 0;  // max new nodes over placements
};

/// Game between a protocol and the adversary for a k-tower moving as one
/// unit on the (3,3) grid. Throws PreconditionFailed for k < 2.
FullTowerReport full_tower_analysis(int k);
Json to_json(const FullTowerReport& r);

struct SearchOptions {
    std::size_t cap = 24;     // maximum view classes
    std::size_t max_options = 5;
};

struct ProtocolWitness {
    std::vector<int> choice;   // option index per view class
    std::string failure;       // "uncovered-terminal" / "fair-lasso" / "" when correct
    std::string initial;
    std::size_t trace_length = 0;
    int visited = 0;           // nodes visited by the counterexample (uncovered case)
};

struct ViewClassInfo {
    std::string configuration;
    NodeCoord self{};
    std::vector<std::vector<NodeCoord>> options;  // option 0 is Stay (empty)
};

struct SearchReport {
    GridDims grid{};
    int k = 0;
    bool within_cap = true;
    std::string refusal;
    std::vector<ViewClassInfo> classes;
    std::size_t protocols = 0;   // enumerated
    bool correct_exists = false;
    std::optional<ProtocolWitness> correct;
    std::vector<ProtocolWitness> failures;
};

/// Enumerates every deterministic protocol (strong multiplicity, one
/// orbit-closed decision per view class) and checks each with the exhaustive
/// ATOM verifier. Stops at the first correct protocol.
SearchReport search_protocol_space(const GridDims& g, int k, const SearchOptions& opt = {});
Json to_json(const SearchReport& r);

}  // namespace gridexp
