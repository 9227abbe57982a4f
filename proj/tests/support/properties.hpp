#pragma once

// Property checks shared by the unit tests and the acceptance binary. Each
// returns the seeds (or case numbers) that violated the property.

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "gridexp/cli.hpp"
#include "gridexp/engine.hpp"
#include "gridexp/protocols.hpp"
#include "gridexp/trace.hpp"

namespace gridexp::testing {

struct Instance {
    GridDims g;
    int k;
    const char* protocol;
};

inline const std::vector<Instance>& registered_instances() {
    static const std::vector<Instance> all = {
        {make_grid(1, 5), 3, "general3"}, {make_grid(2, 4), 3, "general3"}, {make_grid(3, 4), 3, "general3"},
        {make_grid(3, 5), 3, "general3"}, {make_grid(4, 4), 3, "general3"}, {make_grid(2, 3), 3, "grid23"},
        {make_grid(3, 3), 5, "five33"},
    };
    return all;
}

inline const Instance& instance_for(int seed) {
    return registered_instances()[static_cast<std::size_t>(seed) % registered_instances().size()];
}

inline Configuration random_counts(const GridDims& g, std::mt19937_64& rng, int max_count) {
    Configuration c(g);
    std::uniform_int_distribution<int> count(0, max_count);
    for (int idx = 0; idx < g.node_count(); ++idx) c.set(g.coord(idx), count(rng));
    return c;
}

inline GridDims random_grid(std::mt19937_64& rng) {
    return make_grid(1 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 6));
}

inline std::vector<int> threshold_failures(int cases) {
    std::vector<int> bad;
    std::mt19937_64 rng(7);
    for (int n = 0; n < cases; ++n) {
        auto c = random_counts(random_grid(rng), rng, 4);
        auto weak = observe(c, Multiplicity::Weak);
        auto strong = observe(c, Multiplicity::Strong);
        for (std::size_t idx = 0; idx < weak.size(); ++idx)
            if (weak[idx] != threshold(strong[idx])) {
                bad.push_back(n);
                break;
            }
    }
    return bad;
}

// Canonical form: the witness maps onto the representative, the
// representative is its own canonical form, and every image shares it.
inline std::vector<int> canonical_failures(int cases) {
    std::vector<int> bad;
    std::mt19937_64 rng(11);
    for (int n = 0; n < cases; ++n) {
        auto c = random_counts(random_grid(rng), rng, 2);
        auto cf = canonical_form(c);
        bool ok = c.mapped(cf.witness) == cf.representative &&
                  canonical_form(cf.representative).representative == cf.representative;
        for (const auto& f : automorphisms(c.grid())) ok = ok && canonical_form(c.mapped(f)).representative == cf.representative;
        if (!ok) bad.push_back(n);
    }
    return bad;
}

inline NodeMask image_mask(const GridDims& g, const Automorphism& f, NodeMask m) {
    NodeMask out = 0;
    for_each_node(m, [&](int idx) { out |= bit(g.index(f.apply(g, g.coord(idx)))); });
    return out;
}

// Runs a random schedule and the same schedule transported by an
// automorphism side by side; every state must correspond.
inline bool equivariant_run(int seed, std::mt19937_64& rng) {
    const auto& inst = instance_for(seed);
    const auto& g = inst.g;
    auto autos = automorphisms(g);
    auto f = autos[rng() % autos.size()];
    Model model = seed % 2 ? Model::Corda : Model::Atom;
    Engine e(find_protocol(inst.protocol).fn);
    auto init = sample_initial(g, inst.k, static_cast<std::uint64_t>(seed));
    auto s = e.init(init, model, Multiplicity::Weak);
    auto m = e.init(init.mapped(f), model, Multiplicity::Weak);

    std::vector<int> id_map(static_cast<std::size_t>(inst.k));
    for (int r = 0; r < inst.k; ++r) {
        int img = g.index(f.apply(g, g.coord(s.robots[static_cast<std::size_t>(r)].node)));
        for (int q = 0; q < inst.k; ++q)
            if (m.robots[static_cast<std::size_t>(q)].node == img) id_map[static_cast<std::size_t>(r)] = q;
    }
    bool ok = true;
    auto mapped_tb = [&](const Decision& d, const Decision& md, int tb) {
        ok = ok && md.targets == image_mask(g, f, d.targets);
        int node = ordered_targets(d)[static_cast<std::size_t>(tb)];
        auto targets = ordered_targets(md);
        auto pos = std::find(targets.begin(), targets.end(), g.index(f.apply(g, g.coord(node))));
        return static_cast<int>(pos - targets.begin());
    };

    RandomAdversary adv(static_cast<std::uint64_t>(seed));
    for (int t = 0; t < 300 && ok && !e.is_quiescent(s); ++t) {
        auto a = *adv.next(e, s);
        SchedulerAction b = a;
        if (a.kind == SchedulerAction::Kind::Activate) {
            for (std::size_t n = 0; n < a.robots.size(); ++n) {
                int r = a.robots[n], q = id_map[static_cast<std::size_t>(r)];
                b.robots[n] = q;
                auto d = e.decide(s, r);
                b.tie_breaks[n] = d.is_stay() ? 0 : mapped_tb(d, e.decide(m, q), a.tie_breaks[n]);
            }
        } else {
            b.robot = id_map[static_cast<std::size_t>(a.robot)];
            if (a.kind == SchedulerAction::Kind::Move)
                b.tie_break = mapped_tb(s.robots[static_cast<std::size_t>(a.robot)].pending.decision,
                                        m.robots[static_cast<std::size_t>(b.robot)].pending.decision, a.tie_break);
        }
        if (!ok) break;
        s = e.step(s, a).first;
        m = e.step(m, b).first;
        ok = m.config == s.config.mapped(f) && m.visited == image_mask(g, f, s.visited) &&
             e.is_quiescent(m) == e.is_quiescent(s);
    }
    return ok;
}

inline std::vector<int> equivariance_failures(int seeds) {
    std::vector<int> bad;
    std::mt19937_64 rng(2024);
    for (int seed = 0; seed < seeds; ++seed)
        if (!equivariant_run(seed, rng)) bad.push_back(seed);
    return bad;
}

// CORDA where every Look is followed at once by its Move behaves like ATOM
// activating one robot at a time.
inline std::vector<int> sequential_correspondence_failures(int seeds) {
    std::vector<int> bad;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto& inst = instance_for(seed);
        Engine e(find_protocol(inst.protocol).fn);
        auto init = sample_initial(inst.g, inst.k, static_cast<std::uint64_t>(seed) + 77);
        auto atom = e.init(init, Model::Atom, Multiplicity::Weak);
        auto corda = e.init(init, Model::Corda, Multiplicity::Weak);
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        bool ok = true;
        for (int t = 0; t < 200 && ok; ++t) {
            int r = static_cast<int>(rng() % static_cast<std::uint64_t>(inst.k));
            int m = popcount(e.decide(atom, r).targets);
            int tb = m == 0 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(m));
            atom = e.step(atom, SchedulerAction::activate({r}, {tb})).first;
            corda = e.step(corda, SchedulerAction::look(r)).first;
            if (corda.robots[static_cast<std::size_t>(r)].pending.computed())
                corda = e.step(corda, SchedulerAction::move(r, tb)).first;
            ok = atom.config == corda.config && atom.visited == corda.visited &&
                 e.is_quiescent(atom) == e.is_quiescent(corda);
        }
        if (!ok) bad.push_back(seed);
    }
    return bad;
}

// Writes a random run as NDJSON, reads it back, replays it and writes it
// again: both texts must be identical.
inline std::vector<int> replay_failures(int seeds) {
    std::vector<int> bad;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto& inst = instance_for(seed);
        Model model = seed % 2 ? Model::Corda : Model::Atom;
        Engine e(find_protocol(inst.protocol).fn);
        TraceHeader h{inst.g, inst.k, inst.protocol, model, Multiplicity::Weak,
                      sample_initial(inst.g, inst.k, static_cast<std::uint64_t>(seed)), static_cast<std::uint64_t>(seed)};
        RandomAdversary adv(static_cast<std::uint64_t>(seed));
        auto r = run(e, e.init(h.initial, model, h.mode), adv, {500});
        std::ostringstream first;
        write_trace(first, Trace{h, r.events});
        std::istringstream in(first.str());
        auto back = read_trace(in);
        std::vector<SchedulerAction> actions;
        for (const auto& ev : back.events) actions.push_back(ev.action);
        std::ostringstream second;
        write_trace(second, Trace{back.header, replay(e, back.header, actions)});
        if (!replay_matches(e, back) || second.str() != first.str()) bad.push_back(seed);
    }
    return bad;
}

}  // namespace gridexp::testing
