#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridexp/engine.hpp"
#include "json.hpp"

namespace gridexp {

using Json = nlohmann::json;

struct TraceHeader {
    GridDims grid{};
    int k = 0;
    std::string protocol;
    Model model = Model::Atom;
    Multiplicity mode = Multiplicity::Weak;
    Configuration initial;
    std::optional<std::uint64_t> seed;
};

struct Trace {
    TraceHeader header;
    std::vector<TraceEvent> events;
};

Json to_json(const SchedulerAction& a);
SchedulerAction action_from_json(const Json& j);  // ParseError on malformed input
Json to_json(const TraceHeader& h);
TraceHeader header_from_json(const Json& j);
Json to_json(const TraceEvent& e);
Json config_to_json(const Configuration& c);
Json mask_to_json(const GridDims& g, NodeMask m);

/// One JSON object per line: the header, then one line per event.
void write_trace(std::ostream& out, const Trace& t);
Trace read_trace(std::istream& in);

/// Scheduler actions, one JSON object per line (the scripted adversary's
/// input). Lines may also be whole trace events; their "action" is used and
/// a trace header line is skipped.
std::vector<SchedulerAction> read_script(std::istream& in);

/// Re-executes the recorded actions from the header's initial state and
/// returns the regenerated events.
std::vector<TraceEvent> replay(const Engine& engine, const TraceHeader& h, const std::vector<SchedulerAction>& actions);

/// True iff replaying the trace's actions reproduces every recorded event.
bool replay_matches(const Engine& engine, const Trace& t);

}  // namespace gridexp
