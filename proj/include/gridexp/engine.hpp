#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gridexp/configuration.hpp"

namespace gridexp {

/// ATOM: an activated robot runs Look-Compute-Move within one step.
/// CORDA: Look and Move are separate scheduler events; a robot may move on
/// a stale observation.
enum class Model { Atom, Corda };

std::string to_string(Model m);
Model parse_model(std::string_view s);

/// A protocol is a pure function of the observer's view.
using ProtocolFn = std::function<Decision(const View&)>;

/// A Look result waiting for its Move. Stay results are never stored: the
/// robot goes straight back to idle.
struct Pending {
    Decision decision;
    int snapshot_step = -1;

    bool computed() const { return !decision.is_stay(); }
    friend bool operator==(const Pending&, const Pending&) = default;
};

struct RobotSlot {
    int node = 0;  // row-major index
    Pending pending;

    friend bool operator==(const RobotSlot&, const RobotSlot&) = default;
};

struct EngineState {
    Model model = Model::Atom;
    Multiplicity mode = Multiplicity::Weak;
    Configuration config;
    std::vector<RobotSlot> robots;  // internal ids, never visible to protocols
    NodeMask visited = 0;
    int step = 0;

    const GridDims& grid() const { return config.grid(); }
    int robot_count() const { return static_cast<int>(robots.size()); }
    bool explored() const { return visited == grid().all_nodes(); }
};

struct SchedulerAction {
    enum class Kind { Activate, Look, Move };

    Kind kind = Kind::Look;
    std::vector<int> robots;      // Activate: activated ids
    std::vector<int> tie_breaks;  // Activate: chosen destination index per robot (0 for Stay)
    std::vector<int> choices;     // Activate, as listed by enabled_actions: destinations per robot
    int robot = -1;               // Look / Move
    int tie_break = 0;            // Move: index into the stored decision's ordered targets

    static SchedulerAction activate(std::vector<int> ids, std::vector<int> tie_breaks);
    static SchedulerAction look(int id);
    static SchedulerAction move(int id, int tie_break);

    friend bool operator==(const SchedulerAction& a, const SchedulerAction& b) {
        return a.kind == b.kind && a.robots == b.robots && a.tie_breaks == b.tie_breaks &&
               a.robot == b.robot && a.tie_break == b.tie_break;
    }
};

std::string to_string(const SchedulerAction& a);

struct TraceEvent {
    int step = 0;
    SchedulerAction action;
    Configuration config;
    NodeMask visited = 0;
    bool quiescent = false;
};

/// Operational semantics of one protocol under ATOM or CORDA scheduling.
/// The engine is immutable; states are values.
class Engine {
public:
    explicit Engine(ProtocolFn protocol);

    /// Robots get ids in row-major order of their initial nodes. Throws
    /// InvalidInitial for a tower, more robots than nodes, or no robots.
    EngineState init(const Configuration& initial, Model model, Multiplicity mode) const;

    /// The validated decision robot `id` would compute on the current config.
    Decision decide(const EngineState& s, int id) const;
    Decision decide_at(const Configuration& c, int node, Multiplicity mode) const;

    /// ATOM: one Activate per nonempty subset, with `choices` holding the
    /// number of destinations per activated robot (0 = Stay) instead of tie
    /// breaks. CORDA: fully expanded Look/Move actions.
    std::vector<SchedulerAction> enabled_actions(const EngineState& s) const;

    /// Throws SchedulerContract when `a` is not a legal concrete action.
    std::pair<EngineState, TraceEvent> step(const EngineState& s, const SchedulerAction& a) const;

    /// No pending Move and every robot computes Stay.
    bool is_quiescent(const EngineState& s) const;

private:
    ProtocolFn protocol_;
};

/// Every concrete Activate covered by one listed ATOM entry.
std::vector<SchedulerAction> expand_activation(const SchedulerAction& listed);

class Adversary {
public:
    virtual ~Adversary() = default;
    /// Next action, or nullopt to end the run.
    virtual std::optional<SchedulerAction> next(const Engine& engine, const EngineState& s) = 0;
};

class RandomAdversary : public Adversary {
public:
    explicit RandomAdversary(std::uint64_t seed) : rng_(seed) {}
    std::optional<SchedulerAction> next(const Engine& engine, const EngineState& s) override;

private:
    std::mt19937_64 rng_;
};

/// One robot at a time, round robin over ids, first destination.
class SequentialAdversary : public Adversary {
public:
    std::optional<SchedulerAction> next(const Engine& engine, const EngineState& s) override;

private:
    int cursor_ = 0;
};

/// All robots act together: ATOM activates everyone; CORDA lets every robot
/// Look before any of them Moves.
class SynchronousAdversary : public Adversary {
public:
    std::optional<SchedulerAction> next(const Engine& engine, const EngineState& s) override;

private:
    std::vector<bool> looked_;
};

class ScriptedAdversary : public Adversary {
public:
    explicit ScriptedAdversary(std::vector<SchedulerAction> script) : script_(std::move(script)) {}
    std::optional<SchedulerAction> next(const Engine& engine, const EngineState& s) override;

private:
    std::vector<SchedulerAction> script_;
    std::size_t pos_ = 0;
};

class CallbackAdversary : public Adversary {
public:
    using Fn = std::function<std::optional<SchedulerAction>(const Engine&, const EngineState&)>;
    explicit CallbackAdversary(Fn fn) : fn_(std::move(fn)) {}
    std::optional<SchedulerAction> next(const Engine& engine, const EngineState& s) override {
        return fn_(engine, s);
    }

private:
    Fn fn_;
};

struct RunLimits {
    int max_steps = 100000;
};

struct RunResult {
    std::vector<TraceEvent> events;
    EngineState final_state;
    bool explored = false;
    bool quiescent = false;
    bool timed_out = false;
};

RunResult run(const Engine& engine, EngineState s, Adversary& adversary, RunLimits limits = {});

}  // namespace gridexp
