#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdaf/rng.hpp"

namespace qdaf {

/// Action performed by an instance while it occupies a node.
/// The first four kinds carry no target; the remaining six target a class glyph.
enum class ActionKind : std::uint8_t {
    idle,
    move,
    die,
    clone,
    push,
    take,
    chase,
    add,
    transform,
    move_wall,
};

inline constexpr int kUntargetedActionKinds = 4;
inline constexpr int kTargetedActionKinds = 6;

constexpr bool is_targeted(ActionKind k) {
    return static_cast<int>(k) >= kUntargetedActionKinds;
}

std::string_view to_string(ActionKind k);
std::optional<ActionKind> parse_action_kind(std::string_view s);

struct ActionNode {
    ActionKind kind = ActionKind::idle;
    char target = '\0';  // '\0' for untargeted kinds

    bool operator==(const ActionNode&) const = default;
};

/// Transition condition. Enumerators are ordered by ascending priority, so
/// comparing underlying values ranks touch highest and none lowest.
enum class ConditionKind : std::uint8_t {
    none,
    step,
    within,
    next_to,
    touch,
};

inline constexpr int kConditionKinds = 5;

std::string_view to_string(ConditionKind k);
std::optional<ConditionKind> parse_condition_kind(std::string_view s);

constexpr bool has_glyph(ConditionKind k) {
    return k == ConditionKind::within || k == ConditionKind::next_to || k == ConditionKind::touch;
}
constexpr bool has_param(ConditionKind k) {
    return k == ConditionKind::step || k == ConditionKind::within;
}

struct Condition {
    ConditionKind kind = ConditionKind::none;
    char glyph = '\0';  // within, next_to, touch
    int param = 0;      // step: ticks, within: tiles

    bool operator==(const Condition&) const = default;
};

struct Edge {
    int source = 0;
    int destination = 0;
    Condition condition;

    bool operator==(const Edge&) const = default;
};

/// One entity class: a glyph plus the FSM every instance of the class runs.
/// Node 0 is the initial state of new instances.
struct EntityClassDef {
    char glyph = '?';
    int class_id = 0;
    std::vector<ActionNode> nodes;
    std::vector<Edge> edges;

    bool operator==(const EntityClassDef&) const = default;
};

/// Sorted, duplicate-free glyphs of a fortress's classes.
using Alphabet = std::string;

/// 6n + 4: the number of distinct action nodes available with n classes.
int max_nodes_per_class(int class_count);

/// Node kinds are enumerated as idle, move, die, clone, then each targeted
/// kind crossed with the alphabet in order.
int node_kind_count(const Alphabet& alphabet);
ActionNode node_kind_at(int index, const Alphabet& alphabet);
/// Inverse of node_kind_at; -1 if the node is not in the kind space.
int node_kind_index(const ActionNode& node, const Alphabet& alphabet);

/// Sampling parameters shared by generation and edits.
struct ClassContext {
    Alphabet alphabet;
    int max_step = 20;
    int max_within = 15;
};

ClassContext make_context(Alphabet alphabet, int width, int height);

/// Empty result means valid.
std::vector<std::string> validate_class(const EntityClassDef& def, const Alphabet& alphabet);

Condition random_condition(const ClassContext& ctx, Rng& rng);

/// node_budget distinct node kinds in random order, plus node_budget random edges.
EntityClassDef random_class(char glyph, int class_id, int node_budget, const ClassContext& ctx, Rng& rng);

// Edit operations. Each keeps the class valid and clamps instead of failing.
// Node kinds within a class stay pairwise distinct.
void add_nodes(EntityClassDef& def, int count, const ClassContext& ctx, Rng& rng);
void delete_nodes(EntityClassDef& def, int count, Rng& rng);
void alter_nodes(EntityClassDef& def, int count, const ClassContext& ctx, Rng& rng);
void add_edge(EntityClassDef& def, const ClassContext& ctx, Rng& rng);
void delete_edge(EntityClassDef& def, Rng& rng);
void alter_edge(EntityClassDef& def, const ClassContext& ctx, Rng& rng);

}  // namespace qdaf
