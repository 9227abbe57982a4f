#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gridexp/grid.hpp"

namespace gridexp {

enum class Multiplicity { Weak, Strong };

std::string to_string(Multiplicity m);
Multiplicity parse_multiplicity(std::string_view s);

/// Weak observation codomain: free, one robot, several robots.
enum class WeakLabel : std::uint8_t { Free = 0, Single = 1, Tower = 2 };

constexpr std::uint8_t threshold(std::uint8_t count) { return count >= 2 ? 2 : count; }

/// Robot multiplicities per node, indexed row-major.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(GridDims g);
    Configuration(GridDims g, const std::vector<NodeCoord>& robots);

    const GridDims& grid() const { return grid_; }
    const std::vector<std::uint8_t>& counts() const { return counts_; }

    int at(int index) const { return counts_[static_cast<std::size_t>(index)]; }
    int at(NodeCoord c) const;
    void set(NodeCoord c, int count);
    void add(int index, int delta);

    int robot_count() const;
    bool towerless() const;
    NodeMask occupied() const;
    NodeMask towers() const;
    NodeMask singles() const;

    /// Image under an automorphism: result(f(v)) = this(v).
    Configuration mapped(const Automorphism& f) const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration& a, const Configuration& b) {
        return a.counts_ <=> b.counts_;
    }

private:
    GridDims grid_{};
    std::vector<std::uint8_t> counts_;
};

/// Parses "x,y[:count];x,y..." (repeated atoms accumulate).
Configuration parse_configuration(const GridDims& g, std::string_view text);
/// Inverse of parse_configuration, atoms in row-major order.
std::string format_configuration(const Configuration& c);

/// Per-node labels: 0/1/2 (free/single/tower) in weak mode, exact counts in
/// strong mode.
std::vector<std::uint8_t> observe(const Configuration& c, Multiplicity mode);

/// A configuration as seen by one robot: labels plus the observer's own
/// node. Coordinates are an internal frame; two views are the same view iff
/// some automorphism maps one onto the other.
struct View {
    GridDims grid{};
    Multiplicity mode = Multiplicity::Weak;
    std::vector<std::uint8_t> labels;
    int self = 0;

    NodeCoord self_coord() const { return grid.coord(self); }
    std::uint8_t label(NodeCoord c) const { return labels[static_cast<std::size_t>(grid.index(c))]; }
    bool occupied(NodeCoord c) const { return label(c) != 0; }
    bool tower(NodeCoord c) const { return label(c) >= 2; }

    /// Rebuilds a configuration with one robot per single and two per
    /// tower (exact counts in strong mode).
    Configuration as_configuration() const;
};

View view_of(const Configuration& c, NodeCoord at, Multiplicity mode);

/// Same view up to automorphism (labels and self mark).
bool same_view(const View& a, const View& b);

struct CanonicalForm {
    Configuration representative;
    Automorphism witness;  // witness applied to the input gives representative
};

/// Lexicographically smallest image (row-major counts) over the group.
CanonicalForm canonical_form(const Configuration& c);
bool indistinguishable(const Configuration& a, const Configuration& b);

/// Automorphisms fixing the labels and the self node of a view.
std::vector<Automorphism> stabilizer(const View& v);

/// Outcome of one Compute phase. A Move carries the full set of destinations
/// the protocol treats as equivalent; the adversary picks one of them.
struct Decision {
    NodeMask targets = 0;

    static Decision stay() { return {}; }
    static Decision move(NodeMask m) { return {m}; }

    bool is_stay() const { return targets == 0; }
    friend bool operator==(const Decision&, const Decision&) = default;
};

/// Destinations in row-major order; tie-break indices index into this list.
std::vector<int> ordered_targets(const Decision& d);

/// Validates a decision against a view: every target must be adjacent to the
/// observer and the set must be closed under the view's stabilizer.
/// Returns the decision unchanged or throws OrbitViolation.
Decision decision_orbit(const View& v, const Decision& d);
bool is_orbit_closed(const View& v, const Decision& d);

}  // namespace gridexp
