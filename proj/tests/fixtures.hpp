#pragma once

#include <string>
#include <vector>

#include "qdaf/genotype.hpp"

namespace qdaf::testing {

/// n classes (default alphabet), each a single idle node with no edges, no placements.
inline FortressGenotype idle_fortress(int n = kDefaultClassCount, int width = kDefaultWidth,
                                      int height = kDefaultHeight) {
    FortressGenotype g;
    g.width = width;
    g.height = height;
    const auto alphabet = default_alphabet(n);
    for (int i = 0; i < n; ++i) g.classes.push_back({alphabet[i], i, {{ActionKind::idle, '\0'}}, {}});
    return g;
}

inline EntityClassDef& class_of(FortressGenotype& g, char glyph) { return g.classes.at(g.class_index(glyph)); }

inline ActionNode node(ActionKind k, char target = '\0') { return {k, target}; }

inline Edge edge(int from, int to, ConditionKind k = ConditionKind::none, char glyph = '\0', int param = 0) {
    return {from, to, {k, glyph, param}};
}

inline void place(FortressGenotype& g, char glyph, int x, int y) { g.placements.push_back({glyph, x, y}); }

}  // namespace qdaf::testing
