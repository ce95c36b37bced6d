#pragma once

// Recomputes exploration and live counts from a rollout log alone, using
// the genotype only to resolve edge destinations and class sizes. It shares
// no code with the simulator's own tracking.

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qdaf/genotype.hpp"
#include "qdaf/sim.hpp"

namespace qdaf::testing {

struct Replay {
    std::set<std::pair<char, int>> nodes;  // (glyph, node index)
    std::set<std::pair<char, int>> edges;  // (glyph, edge index)
    std::vector<int> live_per_tick;        // index = tick

    int explored() const { return static_cast<int>(nodes.size() + edges.size()); }
};

inline Replay replay(const RolloutLog& log, const FortressGenotype& g) {
    Replay r;
    std::map<char, const EntityClassDef*> defs;
    for (const auto& c : g.classes) defs[c.glyph] = &c;

    std::map<int, int> delta;  // tick -> net change in live count
    for (const auto& rec : log.records) {
        switch (rec.event) {
        case LogEvent::init:
        case LogEvent::spawn:
            r.nodes.insert({rec.glyph, rec.node});
            delta[rec.tick] += 1;
            break;
        case LogEvent::taken:
            delta[rec.tick] -= 1;
            break;
        case LogEvent::act: {
            r.nodes.insert({rec.glyph, rec.node});
            char owner = rec.glyph;
            if (rec.action.kind == ActionKind::transform) {
                owner = rec.action.target;
                r.nodes.insert({owner, 0});
            }
            if (rec.action.kind == ActionKind::die) delta[rec.tick] -= 1;
            if (rec.edge >= 0) {
                r.edges.insert({owner, rec.edge});
                r.nodes.insert({owner, defs.at(owner)->edges.at(rec.edge).destination});
            }
            break;
        }
        }
    }
    int live = 0;
    for (int t = 0; t <= log.ticks; ++t) {
        live += delta[t];
        r.live_per_tick.push_back(live);
    }
    return r;
}

inline int total_elements(const FortressGenotype& g) { return g.total_nodes() + g.total_edges(); }

}  // namespace qdaf::testing
