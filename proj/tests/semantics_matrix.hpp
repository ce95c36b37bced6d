#pragma once

// Hand-built fixtures covering every action under blocked, unblocked and
// absent-target situations, and every condition on both sides of its
// boundary. Shared by the unit suite and the acceptance binary.

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qdaf/sim.hpp"

namespace qdaf::testing {

struct FixtureCase {
    std::string name;
    bool passed = false;
};

namespace detail {

// A fortress where class A runs a single node `a`, B and C idle.
inline FortressGenotype single_action(ActionNode a, int n = 3, int width = kDefaultWidth, int height = kDefaultHeight) {
    auto g = idle_fortress(n, width, height);
    class_of(g, 'A').nodes = {a};
    return g;
}

inline bool at(const EntityInstance& i, int x, int y) { return i.x == x && i.y == y; }

inline const EntityInstance* find(const SimulationState& s, std::int64_t id) {
    for (const auto& i : s.instances())
        if (i.instance_id == id && i.alive) return &i;
    return nullptr;
}

inline int alive(const SimulationState& s) {
    int n = 0;
    for (const auto& i : s.instances()) n += i.alive;
    return n;
}

}  // namespace detail

inline std::vector<FixtureCase> semantics_matrix() {
    using namespace detail;
    using AK = ActionKind;
    using CK = ConditionKind;
    std::vector<FixtureCase> out;
    auto expect = [&](std::string name, bool ok) { out.push_back({std::move(name), ok}); };

    // idle
    {
        auto g = single_action(node(AK::idle));
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.step();
        expect("idle: stays in place", at(s.instances()[0], 3, 3) && s.tick() == 1);
    }
    // move
    {
        auto g = single_action(node(AK::move));
        place(g, 'A', 3, 3);
        place(g, 'A', 3, 1);
        SimulationState s(g, 1);
        s.execute_action(0, Direction::east);
        expect("move: unblocked step east", at(s.instances()[0], 4, 3));
        s.execute_action(1, Direction::north);
        expect("move: blocked by wall stays", at(s.instances()[1], 3, 1));
        bool safe = true;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto r = simulate(g, seed, {20});
            for (const auto& i : r.instances()) safe = safe && g.is_interior(i.x, i.y);
        }
        expect("move: random walk never enters a wall", safe);
    }
    // die
    {
        auto g = single_action(node(AK::die));
        class_of(g, 'A').nodes.push_back(node(AK::idle));
        class_of(g, 'A').edges = {edge(0, 1)};
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.step();
        expect("die: instance removed", s.live_count() == 0 && s.instances().empty());
        expect("die: no edge evaluated", s.explored().edges[0][0] == 0 && s.explored().nodes[0][1] == 0);
    }
    // clone
    {
        auto g = single_action(node(AK::clone));
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.execute_action(0);
        const auto& c = s.instances().back();
        const int d = std::abs(c.x - 3) + std::abs(c.y - 3);
        expect("clone: spawns own class on an adjacent tile",
               s.instances().size() == 2 && c.class_index == 0 && d == 1 && c.current_node == 0 && c.instance_id == 1);

        auto tiny = single_action(node(AK::clone), 3, 3, 3);
        place(tiny, 'A', 1, 1);
        SimulationState t(tiny, 1);
        t.execute_action(0);
        expect("clone: walled in spawns on own tile", t.instances().size() == 2 && at(t.instances()[1], 1, 1));

        auto full = single_action(node(AK::clone));
        place(full, 'A', 3, 3);
        place(full, 'B', 4, 4);
        SimulationState f(full, 1, {100, 2});
        f.execute_action(0);
        expect("clone: no spawn at the overpopulation cap", f.live_count() == 2);
    }
    // push
    {
        auto g = single_action(node(AK::push, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'B', 4, 3);
        SimulationState s(g, 1);
        s.execute_action(0, Direction::east);
        expect("push: target displaced, pusher follows", at(s.instances()[0], 4, 3) && at(s.instances()[1], 5, 3));
    }
    {
        auto g = single_action(node(AK::push, 'B'));
        place(g, 'A', 12, 3);
        place(g, 'B', 13, 3);
        SimulationState s(g, 1);
        s.execute_action(0, Direction::east);
        expect("push: target against wall, neither moves", at(s.instances()[0], 12, 3) && at(s.instances()[1], 13, 3));
    }
    {
        auto g = single_action(node(AK::push, 'B'));
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.execute_action(0, Direction::east);
        expect("push: absent target behaves as move", at(s.instances()[0], 4, 3));
        place(g, 'A', 13, 2);
        SimulationState w(g, 1);
        w.execute_action(1, Direction::east);
        expect("push: wall ahead stays", at(w.instances()[1], 13, 2));
    }
    {
        auto g = single_action(node(AK::push, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'C', 4, 3);
        SimulationState s(g, 1);
        s.execute_action(0, Direction::east);
        expect("push: other classes are not pushed", at(s.instances()[0], 4, 3) && at(s.instances()[1], 4, 3));
    }
    // take
    {
        auto g = single_action(node(AK::take, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'B', 9, 3);  // id 1, distance 6
        place(g, 'B', 5, 4);  // id 2, distance 3
        place(g, 'B', 1, 3);  // id 3, distance 2
        SimulationState s(g, 1);
        s.step();
        expect("take: removes the nearest target",
               s.live_count() == 3 && find(s, 3) == nullptr && find(s, 1) && find(s, 2));
    }
    {
        auto g = single_action(node(AK::take, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'B', 5, 3);  // id 1, distance 2
        place(g, 'B', 1, 3);  // id 2, distance 2
        SimulationState s(g, 1);
        s.step();
        expect("take: distance ties go to the lowest id", find(s, 1) == nullptr && find(s, 2) != nullptr);
    }
    {
        auto g = single_action(node(AK::take, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'C', 3, 3);
        SimulationState s(g, 1);
        s.step();
        expect("take: absent target removes nothing", s.live_count() == 2);

        auto self = single_action(node(AK::take, 'A'));
        place(self, 'A', 3, 3);
        SimulationState t(self, 1);
        t.step();
        expect("take: never removes the actor itself", t.live_count() == 1);
    }
    // chase
    {
        auto g = single_action(node(AK::chase, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'B', 6, 3);
        SimulationState s(g, 1);
        s.step();
        expect("chase: single decreasing axis", at(s.instances()[0], 4, 3));
    }
    {
        auto g = single_action(node(AK::chase, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'B', 5, 5);
        bool ok = true;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            SimulationState s(g, seed);
            s.step();
            const auto& a = s.instances()[0];
            ok = ok && (at(a, 4, 3) || at(a, 3, 4));
        }
        expect("chase: two decreasing axes, one step along either", ok);
    }
    {
        auto g = single_action(node(AK::chase, 'B'));
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.step();
        expect("chase: absent target stays", at(s.instances()[0], 3, 3));
        place(g, 'B', 3, 3);
        SimulationState t(g, 1);
        t.step();
        expect("chase: already on target stays", at(t.instances()[0], 3, 3));
    }
    // add
    {
        auto g = single_action(node(AK::add, 'B'));
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.execute_action(0);
        const auto& b = s.instances().back();
        expect("add: spawns target class adjacent",
               s.instances().size() == 2 && b.class_index == 1 && std::abs(b.x - 3) + std::abs(b.y - 3) == 1 &&
                   s.explored().nodes[1][0] == 1);

        auto tiny = single_action(node(AK::add, 'B'), 3, 3, 3);
        place(tiny, 'A', 1, 1);
        SimulationState t(tiny, 1);
        t.execute_action(0);
        expect("add: walled in spawns on own tile", at(t.instances().back(), 1, 1));

        SimulationState f(g, 1, {100, 1});
        f.execute_action(0);
        expect("add: no spawn at the overpopulation cap", f.live_count() == 1);
    }
    // transform
    {
        auto g = single_action(node(AK::transform, 'B'));
        class_of(g, 'B').nodes = {node(AK::idle), node(AK::move)};
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        s.step();
        const auto& i = s.instances()[0];
        expect("transform: class changes, node resets, identity and position kept (target class absent)",
               i.class_index == 1 && i.current_node == 0 && i.instance_id == 0 && at(i, 3, 3) &&
                   s.explored().nodes[1][0] == 1 && s.explored().nodes[1][1] == 0);
    }
    // move_wall
    {
        auto g = single_action(node(AK::move_wall, 'B'));
        place(g, 'A', 3, 3);
        place(g, 'B', 4, 3);
        place(g, 'C', 2, 3);
        place(g, 'A', 13, 4);
        SimulationState s(g, 1);
        s.execute_action(0, Direction::east);
        expect("move_wall: target class ahead blocks", at(s.instances()[0], 3, 3));
        s.execute_action(0, Direction::west);
        expect("move_wall: other class ahead does not block", at(s.instances()[0], 2, 3));
        s.execute_action(0, Direction::south);
        expect("move_wall: empty tile ahead moves", at(s.instances()[0], 2, 4));
        s.execute_action(3, Direction::east);
        expect("move_wall: wall ahead stays", at(s.instances()[3], 13, 4));
    }

    // Conditions
    {
        auto g = idle_fortress(3);
        place(g, 'A', 5, 3);  // 0
        place(g, 'B', 5, 3);  // 1 same tile
        place(g, 'B', 7, 3);  // 2 distance 2
        place(g, 'C', 8, 3);  // 3 distance 3 from A
        place(g, 'C', 6, 4);  // 4 diagonal to A
        SimulationState s(g, 1);
        expect("none: always true", s.eval_condition({CK::none}, 0));
        expect("touch: target on same tile true", s.eval_condition({CK::touch, 'B'}, 0));
        expect("touch: target one tile away false", !s.eval_condition({CK::touch, 'C'}, 0));
        expect("touch: own class alone false", !s.eval_condition({CK::touch, 'A'}, 0));
        expect("within: distance d true", s.eval_condition({CK::within, 'C', 2}, 0) && s.eval_condition({CK::within, 'C', 3}, 0));
        // nearest C is the diagonal one at distance 2; C at (8,3) is 3 away.
        expect("within: distance d+1 false", !s.eval_condition({CK::within, 'C', 1}, 0));
        expect("within: co-located counts as distance 0", s.eval_condition({CK::within, 'B', 1}, 0));
        expect("nextTo: diagonal false", !s.eval_condition({CK::next_to, 'C'}, 0));
        expect("nextTo: same tile false", !s.eval_condition({CK::next_to, 'A'}, 1));
        expect("nextTo: orthogonal neighbour true", s.eval_condition({CK::next_to, 'C'}, 2));
        expect("nextTo: targets only on the same tile or two away false", !s.eval_condition({CK::next_to, 'B'}, 0));
    }
    {
        auto g = idle_fortress(2);
        place(g, 'A', 3, 3);
        place(g, 'B', 6, 3);  // distance 3
        SimulationState s(g, 1);
        expect("within: boundary d=3 true, d=2 false",
               s.eval_condition({CK::within, 'B', 3}, 0) && !s.eval_condition({CK::within, 'B', 2}, 0));
        expect("nextTo: distance 3 false", !s.eval_condition({CK::next_to, 'B'}, 0));
        expect("within: absent class false", !s.eval_condition({CK::within, 'A', 20}, 0));
    }
    {
        auto g = idle_fortress(1);
        place(g, 'A', 3, 3);
        SimulationState s(g, 1);
        const Condition step3{CK::step, '\0', 3};
        bool ok = !s.eval_condition(step3, 0);  // ticks_in_node = 0
        for (int t = 1; t <= 9; ++t) {
            s.step();
            ok = ok && s.eval_condition(step3, 0) == (t % 3 == 0);
        }
        expect("step: fires on positive multiples only", ok);
    }
    // Priority: touch > nextTo > within > step > none, insertion order within a rank.
    {
        auto g = idle_fortress(2);
        auto& a = class_of(g, 'A');
        a.nodes = {node(AK::idle), node(AK::idle, '\0'), node(AK::move), node(AK::die), node(AK::clone)};
        a.edges = {edge(0, 1), edge(0, 2, CK::step, '\0', 1), edge(0, 3, CK::within, 'B', 5),
                   edge(0, 4, CK::touch, 'B'), edge(0, 2, CK::touch, 'B')};
        place(g, 'A', 3, 3);
        place(g, 'B', 3, 3);
        SimulationState s(g, 1);
        s.step();
        expect("priority: touch beats every lower rank, first touch edge wins",
               s.instances()[0].current_node == 4 && s.explored().edges[0][3] == 1 && s.explored().edges[0][4] == 0);

        auto far = g;
        far.placements[1] = {'B', 6, 3};
        SimulationState f(far, 1);
        f.step();
        expect("priority: within beats step and none", f.instances()[0].current_node == 3);

        auto none = g;
        none.placements.pop_back();
        SimulationState n(none, 1);
        n.step();
        expect("priority: step beats none", n.instances()[0].current_node == 2);
    }
    return out;
}

}  // namespace qdaf::testing
