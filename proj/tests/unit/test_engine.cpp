#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gridexp/cli.hpp"
#include "gridexp/engine.hpp"
#include "gridexp/protocols.hpp"
#include "gridexp/trace.hpp"
#include "support/properties.hpp"

using namespace gridexp;

namespace {

// Every robot moves to all free neighbors unless another robot is adjacent.
Decision lonely_mover(const View& v) {
    NodeMask free = 0;
    for (auto n : neighbors(v.grid, v.self_coord())) {
        if (v.occupied(n)) return Decision::stay();
        free |= bit(v.grid.index(n));
    }
    return Decision::move(free);
}

Decision always_move(const View& v) { return Decision::move(neighbor_mask(v.grid, v.self)); }

}  // namespace

TEST_CASE("init rejects towers, empty and overfull configurations") {
    Engine e(stay_protocol);
    auto g = make_grid(2, 3);
    CHECK_THROWS_AS(e.init(Configuration(g), Model::Atom, Multiplicity::Weak), InvalidInitial);
    CHECK_THROWS_AS(e.init(parse_configuration(g, "0,0:2;1,0"), Model::Atom, Multiplicity::Weak), InvalidInitial);
    auto s = e.init(parse_configuration(g, "2,1;0,0;1,0"), Model::Corda, Multiplicity::Weak);
    REQUIRE(s.robot_count() == 3);
    CHECK(s.robots[0].node == g.index({0, 0}));
    CHECK(s.robots[1].node == g.index({1, 0}));
    CHECK(s.robots[2].node == g.index({2, 1}));
    CHECK(popcount(s.visited) == 3);
    CHECK(s.step == 0);
}

TEST_CASE("enabled actions") {
    auto g = make_grid(1, 5);
    Engine e(lonely_mover);
    auto c = parse_configuration(g, "0,0;2,0;4,0");

    auto atom = e.init(c, Model::Atom, Multiplicity::Weak);
    auto listed = e.enabled_actions(atom);
    CHECK(listed.size() == 7);
    std::size_t concrete = 0;
    for (const auto& a : listed) concrete += expand_activation(a).size();
    // Destination counts 1, 2, 1: product of (choices or 1) over each subset.
    CHECK(concrete == 1 + 2 + 1 + 2 + 1 + 2 + 2);

    auto corda = e.init(c, Model::Corda, Multiplicity::Weak);
    auto looks = e.enabled_actions(corda);
    REQUIRE(looks.size() == 3);
    for (const auto& a : looks) CHECK(a.kind == SchedulerAction::Kind::Look);
    auto [s1, ev] = e.step(corda, SchedulerAction::look(1));
    CHECK(ev.step == 1);
    auto after = e.enabled_actions(s1);
    CHECK(std::count_if(after.begin(), after.end(), [](auto& a) { return a.kind == SchedulerAction::Kind::Move; }) == 2);
    CHECK(std::count_if(after.begin(), after.end(), [](auto& a) { return a.kind == SchedulerAction::Kind::Look; }) == 2);
}

TEST_CASE("CORDA moves on a stale observation") {
    auto g = make_grid(1, 4);
    Engine e(lonely_mover);
    auto s = e.init(parse_configuration(g, "0,0;2,0"), Model::Corda, Multiplicity::Weak);
    s = e.step(s, SchedulerAction::look(0)).first;
    s = e.step(s, SchedulerAction::look(1)).first;
    CHECK(s.robots[1].pending.decision.targets == (bit(1) | bit(3)));
    CHECK(s.robots[1].pending.snapshot_step == 1);
    s = e.step(s, SchedulerAction::move(0, 0)).first;
    CHECK(e.decide(s, 1).is_stay());
    CHECK_FALSE(e.is_quiescent(s));
    auto [t, ev] = e.step(s, SchedulerAction::move(1, 0));
    CHECK(t.config.at(1) == 2);
    CHECK(t.config.towers() == bit(1));
    CHECK(t.robots[0].node == t.robots[1].node);
}

TEST_CASE("scheduler contract violations") {
    auto g = make_grid(1, 4);
    Engine e(lonely_mover);
    auto corda = e.init(parse_configuration(g, "0,0;2,0"), Model::Corda, Multiplicity::Weak);
    CHECK_THROWS_AS(e.step(corda, SchedulerAction::move(0, 0)), SchedulerContract);
    CHECK_THROWS_AS(e.step(corda, SchedulerAction::activate({0}, {0})), SchedulerContract);
    CHECK_THROWS_AS(e.step(corda, SchedulerAction::look(5)), SchedulerContract);
    auto looked = e.step(corda, SchedulerAction::look(0)).first;
    CHECK_THROWS_AS(e.step(looked, SchedulerAction::look(0)), SchedulerContract);
    CHECK_THROWS_AS(e.step(looked, SchedulerAction::move(0, 1)), SchedulerContract);

    auto atom = e.init(parse_configuration(g, "0,0;2,0"), Model::Atom, Multiplicity::Weak);
    CHECK_THROWS_AS(e.step(atom, SchedulerAction::look(0)), SchedulerContract);
    CHECK_THROWS_AS(e.step(atom, SchedulerAction::activate({}, {})), SchedulerContract);
    CHECK_THROWS_AS(e.step(atom, SchedulerAction::activate({0, 0}, {0, 0})), SchedulerContract);
    CHECK_THROWS_AS(e.step(atom, SchedulerAction::activate({1}, {2})), SchedulerContract);
}

TEST_CASE("ATOM activation reads one snapshot") {
    auto g = make_grid(1, 4);
    Engine e(lonely_mover);
    auto s = e.init(parse_configuration(g, "0,0;2,0"), Model::Atom, Multiplicity::Weak);
    // Both robots see each other at distance 2 and move toward node 1.
    auto [t, ev] = e.step(s, SchedulerAction::activate({0, 1}, {0, 0}));
    CHECK(t.config.at(1) == 2);
    CHECK(t.visited == (bit(0) | bit(1) | bit(2)));
}

TEST_CASE("run stops on quiescence or the step limit") {
    auto g = make_grid(1, 3);
    Engine osc(always_move);
    RandomAdversary adv(1);
    auto r = run(osc, osc.init(parse_configuration(g, "0,0"), Model::Atom, Multiplicity::Weak), adv, {50});
    CHECK(r.timed_out);
    CHECK_FALSE(r.quiescent);
    CHECK(r.events.size() == 50);
    CHECK(r.explored);

    Engine still(stay_protocol);
    SequentialAdversary seq;
    auto q = run(still, still.init(parse_configuration(g, "0,0"), Model::Corda, Multiplicity::Weak), seq);
    CHECK(q.quiescent);
    CHECK(q.events.empty());
    CHECK_FALSE(q.explored);
}

TEST_CASE("engine runs are equivariant under grid automorphisms") {
    auto bad = testing::equivariance_failures(1000);
    CAPTURE(bad);
    CHECK(bad.empty());
}

TEST_CASE("CORDA with sequential Look-Move pairs equals ATOM with singleton activations") {
    auto bad = testing::sequential_correspondence_failures(1000);
    CAPTURE(bad);
    CHECK(bad.empty());
}

TEST_CASE("traces replay bit-exactly") {
    auto bad = testing::replay_failures(100);
    CAPTURE(bad);
    CHECK(bad.empty());

    // A tampered event no longer matches.
    const auto& inst = testing::instance_for(3);
    Engine e(find_protocol(inst.protocol).fn);
    TraceHeader h{inst.g, inst.k, inst.protocol, Model::Corda, Multiplicity::Weak, sample_initial(inst.g, inst.k, 3), 3U};
    RandomAdversary adv(3);
    auto r = run(e, e.init(h.initial, h.model, h.mode), adv);
    Trace t{h, r.events};
    REQUIRE(replay_matches(e, t));
    t.events.back().visited ^= bit(0) | bit(1);
    CHECK_FALSE(replay_matches(e, t));
}
