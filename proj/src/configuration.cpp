#include "gridexp/configuration.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace gridexp {

std::string to_string(Multiplicity m) { return m == Multiplicity::Weak ? "weak" : "strong"; }

Multiplicity parse_multiplicity(std::string_view s) {
    if (s == "weak") return Multiplicity::Weak;
    if (s == "strong") return Multiplicity::Strong;
    throw ParseError("unknown multiplicity mode '" + std::string(s) + "'");
}

Configuration::Configuration(GridDims g)
    : grid_(g), counts_(static_cast<std::size_t>(g.node_count()), 0) {}

Configuration::Configuration(GridDims g, const std::vector<NodeCoord>& robots) : Configuration(g) {
    for (auto r : robots) set(r, at(r) + 1);
}

int Configuration::at(NodeCoord c) const {
    if (!grid_.contains(c)) throw OutOfBounds("node " + to_string(c) + " outside grid");
    return counts_[static_cast<std::size_t>(grid_.index(c))];
}

void Configuration::set(NodeCoord c, int count) {
    if (!grid_.contains(c)) throw OutOfBounds("node " + to_string(c) + " outside grid");
    if (count < 0 || count > 255) throw PreconditionFailed("robot count out of range");
    counts_[static_cast<std::size_t>(grid_.index(c))] = static_cast<std::uint8_t>(count);
}

void Configuration::add(int index, int delta) {
    auto& slot = counts_[static_cast<std::size_t>(index)];
    slot = static_cast<std::uint8_t>(slot + delta);
}

int Configuration::robot_count() const {
    int k = 0;
    for (auto c : counts_) k += c;
    return k;
}

bool Configuration::towerless() const {
    return std::all_of(counts_.begin(), counts_.end(), [](auto c) { return c <= 1; });
}

NodeMask Configuration::occupied() const {
    NodeMask m = 0;
    for (std::size_t idx = 0; idx < counts_.size(); ++idx)
        if (counts_[idx] > 0) m |= bit(static_cast<int>(idx));
    return m;
}

NodeMask Configuration::towers() const {
    NodeMask m = 0;
    for (std::size_t idx = 0; idx < counts_.size(); ++idx)
        if (counts_[idx] > 1) m |= bit(static_cast<int>(idx));
    return m;
}

NodeMask Configuration::singles() const {
    NodeMask m = 0;
    for (std::size_t idx = 0; idx < counts_.size(); ++idx)
        if (counts_[idx] == 1) m |= bit(static_cast<int>(idx));
    return m;
}

Configuration Configuration::mapped(const Automorphism& f) const {
    Configuration out(grid_);
    for (int idx = 0; idx < grid_.node_count(); ++idx) {
        out.counts_[static_cast<std::size_t>(grid_.index(f.apply(grid_, grid_.coord(idx))))] =
            counts_[static_cast<std::size_t>(idx)];
    }
    return out;
}

namespace {

int parse_int(std::string_view s, std::string_view atom) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("malformed configuration atom '" + std::string(atom) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

Configuration parse_configuration(const GridDims& g, std::string_view text) {
    Configuration c(g);
    text = trim(text);
    if (text.empty()) return c;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(';', pos);
        if (end == std::string_view::npos) end = text.size();
        auto atom = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (atom.empty()) {
            if (end == text.size()) break;
            throw ParseError("empty configuration atom");
        }
        int count = 1;
        auto colon = atom.find(':');
        auto xy = atom.substr(0, colon);
        if (colon != std::string_view::npos) {
            count = parse_int(atom.substr(colon + 1), atom);
            if (count < 1) throw ParseError("count must be positive in '" + std::string(atom) + "'");
        }
        auto comma = xy.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError("malformed configuration atom '" + std::string(atom) + "'");
        }
        NodeCoord v{parse_int(trim(xy.substr(0, comma)), atom), parse_int(trim(xy.substr(comma + 1)), atom)};
        if (!g.contains(v)) {
            throw ParseError("node " + to_string(v) + " outside " + to_string(g) + " grid");
        }
        c.set(v, c.at(v) + count);
        if (end == text.size()) break;
    }
    return c;
}

std::string format_configuration(const Configuration& c) {
    std::ostringstream out;
    bool first = true;
    const auto& g = c.grid();
    for (int idx = 0; idx < g.node_count(); ++idx) {
        int n = c.at(idx);
        if (n == 0) continue;
        auto v = g.coord(idx);
        if (!first) out << ';';
        first = false;
        out << v.x << ',' << v.y;
        if (n > 1) out << ':' << n;
    }
    return out.str();
}

std::vector<std::uint8_t> observe(const Configuration& c, Multiplicity mode) {
    std::vector<std::uint8_t> labels = c.counts();
    if (mode == Multiplicity::Weak) {
        for (auto& l : labels) l = threshold(l);
    }
    return labels;
}

Configuration View::as_configuration() const {
    Configuration c(grid);
    for (int idx = 0; idx < grid.node_count(); ++idx) {
        c.set(grid.coord(idx), labels[static_cast<std::size_t>(idx)]);
    }
    return c;
}

View view_of(const Configuration& c, NodeCoord at, Multiplicity mode) {
    if (c.at(at) < 1) {
        throw NotPresent("no robot at " + to_string(at) + " to observe from");
    }
    return View{c.grid(), mode, observe(c, mode), c.grid().index(at)};
}

namespace {

// Image of a view's labels/self under group element e of the table.
void map_view(const SymmetryTable& sym, std::size_t e, const View& v, std::vector<std::uint8_t>& labels,
              int& self) {
    labels.assign(v.labels.size(), 0);
    for (int idx = 0; idx < v.grid.node_count(); ++idx) {
        labels[static_cast<std::size_t>(sym.map(e, idx))] = v.labels[static_cast<std::size_t>(idx)];
    }
    self = sym.map(e, v.self);
}

}  // namespace

bool same_view(const View& a, const View& b) {
    if (!(a.grid == b.grid) || a.mode != b.mode) return false;
    SymmetryTable sym(a.grid);
    std::vector<std::uint8_t> labels;
    int self = 0;
    for (std::size_t e = 0; e < sym.size(); ++e) {
        map_view(sym, e, a, labels, self);
        if (self == b.self && labels == b.labels) return true;
    }
    return false;
}

CanonicalForm canonical_form(const Configuration& c) {
    CanonicalForm best{c, Automorphism{}};
    for (const auto& f : automorphisms(c.grid())) {
        auto image = c.mapped(f);
        if (image.counts() < best.representative.counts()) best = {std::move(image), f};
    }
    return best;
}

bool indistinguishable(const Configuration& a, const Configuration& b) {
    if (!(a.grid() == b.grid())) return false;
    return canonical_form(a).representative == canonical_form(b).representative;
}

std::vector<Automorphism> stabilizer(const View& v) {
    SymmetryTable sym(v.grid);
    std::vector<Automorphism> out;
    std::vector<std::uint8_t> labels;
    int self = 0;
    for (std::size_t e = 0; e < sym.size(); ++e) {
        map_view(sym, e, v, labels, self);
        if (self == v.self && labels == v.labels) out.push_back(sym.element(e));
    }
    return out;
}

std::vector<int> ordered_targets(const Decision& d) {
    std::vector<int> out;
    for_each_node(d.targets, [&](int idx) { out.push_back(idx); });
    return out;
}

bool is_orbit_closed(const View& v, const Decision& d) {
    if (d.is_stay()) return true;
    if ((d.targets & ~neighbor_mask(v.grid, v.self)) != 0) return false;
    for (const auto& f : stabilizer(v)) {
        NodeMask image = 0;
        for_each_node(d.targets, [&](int idx) {
            image |= bit(v.grid.index(f.apply(v.grid, v.grid.coord(idx))));
        });
        if (image != d.targets) return false;
    }
    return true;
}

Decision decision_orbit(const View& v, const Decision& d) {
    if (d.is_stay()) return d;
    NodeMask stray = d.targets & ~neighbor_mask(v.grid, v.self);
    if (stray != 0) {
        throw OrbitViolation("decision targets a node not adjacent to the observer at " +
                             to_string(v.self_coord()));
    }
    if (!is_orbit_closed(v, d)) {
        throw OrbitViolation("decision at " + to_string(v.self_coord()) +
                             " is not closed under the symmetries of the view");
    }
    return d;
}

}  // namespace gridexp
