#include "gridexp/protocols.hpp"

namespace gridexp {

const std::vector<ProtocolInfo>& protocol_registry() {
    static const std::vector<ProtocolInfo> registry = {
        {"general3", general3, "three robots, any grid with j > 3 (Set-Up, Orientation, Exploration)", false},
        {"grid23", grid23, "three robots on the (2,3) grid", false},
        {"five33", five33, "five robots on the (3,3) grid (Preparation, then a scripted sweep)", false},
        {"stay", stay_protocol, "every robot stays; explores only when k = n", false},
        {"general3-reversed", general3_reversed, "general3 with a broken explorer step (verifier demo)", true},
    };
    return registry;
}

const ProtocolInfo& find_protocol(std::string_view name) {
    for (const auto& p : protocol_registry())
        if (p.name == name) return p;
    throw ParseError("unknown protocol '" + std::string(name) + "'");
}

namespace {

std::string why_unsupported(const GridDims& g, int k) {
    const int n = g.node_count();
    const std::string where = "the " + to_string(g) + " grid";
    if (n == 1) return "exploration of a single node is trivial and not modelled";
    if (k < 1) return "at least one robot is needed";
    if (k > n) return "more robots than nodes on " + where;
    if (k <= 2) return "no deterministic protocol explores a grid of 3 or more nodes with at most 2 oblivious robots";
    if (g == GridDims{2, 2}) return "the (2,2) grid needs k = 4 robots; no protocol with fewer exists";
    if (g == GridDims{3, 3} && k <= 3) return "no deterministic protocol explores the (3,3) grid with k <= 3 robots";
    if (g == GridDims{3, 3} && k == 4) return "no deterministic protocol explores the (3,3) grid with 4 robots; 5 are needed";
    return "no protocol is registered for k = " + std::to_string(k) + " on " + where +
           " (available: k = 3 with j > 3, k = 3 on (2,3), k = 5 on (3,3), k = n)";
}

bool supports(std::string_view name, const GridDims& g, int k) {
    if (g.node_count() < 2 || k < 1 || k > g.node_count()) return false;
    if (name == "general3" || name == "general3-reversed") return g.j > 3 && k == 3;
    if (name == "grid23") return g == GridDims{2, 3} && k == 3;
    if (name == "five33") return g == GridDims{3, 3} && k == 5;
    if (name == "stay") return k == g.node_count();
    return false;
}

}  // namespace

void check_instance(std::string_view protocol, const GridDims& g, int k) {
    find_protocol(protocol);
    if (supports(protocol, g, k)) return;
    std::string reason = why_unsupported(g, k);
    for (const auto& p : protocol_registry())
        if (!p.test_only && supports(p.name, g, k)) reason = "this instance is served by " + p.name;
    std::string msg = "protocol " + std::string(protocol) + " does not apply to k = " + std::to_string(k) +
                      " on the " + to_string(g) + " grid: " + reason;
    throw UnsupportedInstance(msg);
}

std::string protocol_for(const GridDims& g, int k) {
    for (const auto& p : protocol_registry())
        if (!p.test_only && supports(p.name, g, k)) return p.name;
    throw UnsupportedInstance("no protocol for k = " + std::to_string(k) + " on the " + to_string(g) +
                              " grid: " + why_unsupported(g, k));
}

}  // namespace gridexp
