#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridexp/engine.hpp"
#include "gridexp/trace.hpp"

namespace gridexp {

struct VerifyOptions {
    Model model = Model::Atom;
    Multiplicity mode = Multiplicity::Weak;
    std::size_t budget = 10'000'000;  // canonical states per worker
    bool canonicalize = true;         // quotient by grid automorphisms
    int jobs = 1;
    /// Restrict to these initial configurations (default: every towerless one).
    std::optional<std::vector<Configuration>> initials;
};

struct InitialVerdict {
    Configuration initial;
    bool explored = false;     // every reachable terminal state has visited every node
    bool terminates = false;   // no fair non-terminating execution
};

struct Counterexample {
    enum class Kind { UncoveredTerminal, FairLasso };
    Kind kind = Kind::UncoveredTerminal;
    Trace trace;              // replays in the engine from trace.header.initial
    int lasso_start = -1;     // FairLasso: events after this index form the loop
    NodeMask missed = 0;      // UncoveredTerminal: nodes never visited
};

std::string to_string(Counterexample::Kind k);

struct VerifyStats {
    std::size_t states = 0;
    std::size_t edges = 0;
    std::size_t max_depth = 0;
    std::size_t decisions = 0;  // distinct views evaluated (each validated against its orbit)
    std::size_t fair_components = 0;
    double wall_seconds = 0;
};

struct VerificationReport {
    GridDims grid{};
    int k = 0;
    std::string protocol;
    Model model = Model::Atom;
    Multiplicity mode = Multiplicity::Weak;
    bool conclusive = true;
    bool passed = false;
    std::vector<InitialVerdict> verdicts;
    std::optional<Counterexample> counterexample;
    VerifyStats stats;
};

/// Explicit-state search over every schedule from every initial
/// configuration. Fails on a reachable terminal state that misses a node, or
/// on a reachable fair cycle of non-terminal states. Decisions are validated
/// with decision_orbit (OrbitViolation propagates).
VerificationReport verify_exhaustive(const GridDims& g, int k, const std::string& protocol_name,
                                     const ProtocolFn& protocol, const VerifyOptions& options = {});

/// Every towerless placement of k robots, in increasing row-major bitmask order.
std::vector<Configuration> towerless_configurations(const GridDims& g, int k);

Json to_json(const VerificationReport& r);

}  // namespace gridexp
