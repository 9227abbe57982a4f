#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridexp/engine.hpp"

namespace gridexp {

/// Exploration order in an oriented frame: rows ascending, even rows left to
/// right, odd rows right to left. Requires j > 3.
std::vector<NodeCoord> snake_order(const GridDims& g);
int snake_index(const GridDims& g, NodeCoord frame_pos);

enum class SetupCase {
    StrictLeader,
    HalfLeader1,
    HalfLeader2,
    FullyLeader1,
    FullyLeader2,
    SemiLeader1,
    SemiLeader2a,
    SemiLeader2b,
    Choice1,
    Choice2,
    Undefined1,
    Undefined2,
    Undefined3,
    Undefined4_1,
    Undefined4_2,
    Undefined4_3i,
    Undefined4_3ii,
    Undefined4_4i,
    Undefined4_4ii,
    Undefined4_4iii,
    SetUpDone,
    Oriented,
    Exploring,
    Terminal,
};

std::string to_string(SetupCase c);

/// Frame induced by a 2-tower one step away from a unique corner.
struct OrientedFrame {
    NodeCoord origin;
    NodeCoord x_axis;  // unit step from origin to the tower
    NodeCoord y_axis;  // unit step into the grid; (0,0) on a chain

    NodeCoord to_frame(NodeCoord p) const;
    NodeCoord from_frame(NodeCoord f) const;
};

std::optional<OrientedFrame> oriented_frame(const Configuration& c);

/// Per-configuration outcome of the three-robot protocol: the case and the
/// destination set of every robot node (0 = Stay).
struct SetupPlan {
    SetupCase kind = SetupCase::Terminal;
    std::string detail;           // subcase note, e.g. "(ii)" for Choice1
    std::vector<NodeMask> moves;  // indexed by node

    NodeMask movers() const;
};

/// Throws ClassificationGap for configurations outside the case analysis.
SetupPlan setup_plan(const Configuration& c);
SetupCase classify_setup(const Configuration& c);

Decision general3(const View& v);
/// Deliberately broken variant: from its fourth snake position on, the
/// explorer steps back instead of forward.
Decision general3_reversed(const View& v);
Decision grid23(const View& v);
Decision five33(const View& v);
Decision stay_protocol(const View& v);

/// Decision table of five33 for one towerless or tower configuration, per
/// node; exposed for tests.
std::vector<NodeMask> five33_moves(const Configuration& c);

struct ProtocolInfo {
    std::string name;
    ProtocolFn fn;
    std::string summary;
    bool test_only = false;
};

const std::vector<ProtocolInfo>& protocol_registry();
const ProtocolInfo& find_protocol(std::string_view name);  // ParseError when unknown

/// Throws UnsupportedInstance (with the relevant bound) unless the protocol
/// is registered for this grid and robot count.
void check_instance(std::string_view protocol, const GridDims& g, int k);

/// The protocol the registry assigns to (grid, k), or UnsupportedInstance.
std::string protocol_for(const GridDims& g, int k);

}  // namespace gridexp
