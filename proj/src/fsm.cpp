#include "qdaf/fsm.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace qdaf {

namespace {

constexpr std::array<std::string_view, 10> kActionNames = {
    "idle", "move", "die", "clone", "push", "take", "chase", "add", "transform", "move_wall",
};

constexpr std::array<std::string_view, kConditionKinds> kConditionNames = {
    "none", "step", "within", "nextTo", "touch",
};

bool in_alphabet(char c, const Alphabet& alphabet) {
    return c != '\0' && alphabet.find(c) != Alphabet::npos;
}

// Kind indices not used by any node of def.
std::vector<int> unused_kinds(const EntityClassDef& def, const Alphabet& alphabet) {
    const int total = node_kind_count(alphabet);
    std::vector<char> used(total, 0);
    for (const auto& n : def.nodes) {
        const int idx = node_kind_index(n, alphabet);
        if (idx >= 0) used[idx] = 1;
    }
    std::vector<int> out;
    for (int i = 0; i < total; ++i)
        if (!used[i]) out.push_back(i);
    return out;
}

// Moves k uniformly chosen elements of v to its front (partial Fisher-Yates).
template <typename T>
void partial_shuffle(std::vector<T>& v, std::size_t k, Rng& rng) {
    k = std::min(k, v.size());
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + rng.below(v.size() - i);
        std::swap(v[i], v[j]);
    }
}

Edge random_edge(int node_count, const ClassContext& ctx, Rng& rng) {
    Edge e;
    e.source = static_cast<int>(rng.below(node_count));
    e.destination = static_cast<int>(rng.below(node_count));
    e.condition = random_condition(ctx, rng);
    return e;
}

}  // namespace

std::string_view to_string(ActionKind k) { return kActionNames[static_cast<int>(k)]; }

std::optional<ActionKind> parse_action_kind(std::string_view s) {
    for (std::size_t i = 0; i < kActionNames.size(); ++i)
        if (kActionNames[i] == s) return static_cast<ActionKind>(i);
    return std::nullopt;
}

std::string_view to_string(ConditionKind k) { return kConditionNames[static_cast<int>(k)]; }

std::optional<ConditionKind> parse_condition_kind(std::string_view s) {
    for (std::size_t i = 0; i < kConditionNames.size(); ++i)
        if (kConditionNames[i] == s) return static_cast<ConditionKind>(i);
    return std::nullopt;
}

int max_nodes_per_class(int class_count) {
    if (class_count < 1) throw std::invalid_argument("class count must be at least 1");
    return kTargetedActionKinds * class_count + kUntargetedActionKinds;
}

int node_kind_count(const Alphabet& alphabet) {
    return max_nodes_per_class(static_cast<int>(alphabet.size()));
}

ActionNode node_kind_at(int index, const Alphabet& alphabet) {
    const int n = static_cast<int>(alphabet.size());
    if (index < 0 || index >= node_kind_count(alphabet)) throw std::out_of_range("node kind index");
    if (index < kUntargetedActionKinds) return {static_cast<ActionKind>(index), '\0'};
    const int rel = index - kUntargetedActionKinds;
    return {static_cast<ActionKind>(kUntargetedActionKinds + rel / n), alphabet[rel % n]};
}

int node_kind_index(const ActionNode& node, const Alphabet& alphabet) {
    const int k = static_cast<int>(node.kind);
    if (!is_targeted(node.kind)) return node.target == '\0' ? k : -1;
    const auto pos = alphabet.find(node.target);
    if (node.target == '\0' || pos == Alphabet::npos) return -1;
    return kUntargetedActionKinds + (k - kUntargetedActionKinds) * static_cast<int>(alphabet.size()) +
           static_cast<int>(pos);
}

ClassContext make_context(Alphabet alphabet, int width, int height) {
    ClassContext ctx;
    ctx.alphabet = std::move(alphabet);
    ctx.max_within = std::max(1, std::max(width, height));
    return ctx;
}

std::vector<std::string> validate_class(const EntityClassDef& def, const Alphabet& alphabet) {
    std::vector<std::string> out;
    const std::string where = std::string("class '") + def.glyph + "': ";
    const int cap = alphabet.empty() ? 0 : node_kind_count(alphabet);
    const int count = static_cast<int>(def.nodes.size());

    if (count < 1) out.push_back(where + "no nodes");
    if (count > cap) out.push_back(where + "too many nodes (" + std::to_string(count) + " > " + std::to_string(cap) + ")");

    for (int i = 0; i < count; ++i) {
        const auto& n = def.nodes[i];
        const std::string at = where + "node " + std::to_string(i) + ": ";
        if (is_targeted(n.kind) && !in_alphabet(n.target, alphabet))
            out.push_back(at + "unknown target '" + std::string(1, n.target) + "'");
        if (!is_targeted(n.kind) && n.target != '\0') out.push_back(at + "unexpected target");
    }
    if (count == cap && cap > 0) {
        std::vector<int> idx;
        for (const auto& n : def.nodes) idx.push_back(node_kind_index(n, alphabet));
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
            out.push_back(where + "duplicate node kinds at capacity");
    }

    for (std::size_t i = 0; i < def.edges.size(); ++i) {
        const auto& e = def.edges[i];
        const std::string at = where + "edge " + std::to_string(i) + ": ";
        if (e.source < 0 || e.source >= count || e.destination < 0 || e.destination >= count)
            out.push_back(at + "dangling edge");
        const auto& c = e.condition;
        if (has_glyph(c.kind) && !in_alphabet(c.glyph, alphabet))
            out.push_back(at + "unknown target '" + std::string(1, c.glyph) + "'");
        if (!has_glyph(c.kind) && c.glyph != '\0') out.push_back(at + "unexpected glyph");
        if (has_param(c.kind) && c.param < 1) out.push_back(at + "parameter must be positive");
        if (!has_param(c.kind) && c.param != 0) out.push_back(at + "unexpected parameter");
    }
    return out;
}

Condition random_condition(const ClassContext& ctx, Rng& rng) {
    Condition c;
    c.kind = static_cast<ConditionKind>(rng.below(kConditionKinds));
    if (has_glyph(c.kind)) c.glyph = ctx.alphabet[rng.below(ctx.alphabet.size())];
    if (c.kind == ConditionKind::step) c.param = static_cast<int>(rng.between(1, ctx.max_step));
    if (c.kind == ConditionKind::within) c.param = static_cast<int>(rng.between(1, ctx.max_within));
    return c;
}

EntityClassDef random_class(char glyph, int class_id, int node_budget, const ClassContext& ctx, Rng& rng) {
    const int cap = node_kind_count(ctx.alphabet);
    if (node_budget < 1 || node_budget > cap)
        throw std::invalid_argument("node budget " + std::to_string(node_budget) + " outside [1, " +
                                    std::to_string(cap) + "]");
    EntityClassDef def;
    def.glyph = glyph;
    def.class_id = class_id;

    std::vector<int> kinds(cap);
    std::iota(kinds.begin(), kinds.end(), 0);
    partial_shuffle(kinds, node_budget, rng);
    def.nodes.reserve(node_budget);
    for (int i = 0; i < node_budget; ++i) def.nodes.push_back(node_kind_at(kinds[i], ctx.alphabet));

    def.edges.reserve(node_budget);
    for (int i = 0; i < node_budget; ++i) def.edges.push_back(random_edge(node_budget, ctx, rng));
    return def;
}

void add_nodes(EntityClassDef& def, int count, const ClassContext& ctx, Rng& rng) {
    auto pool = unused_kinds(def, ctx.alphabet);
    const auto k = std::min<std::size_t>(std::max(count, 0), pool.size());
    partial_shuffle(pool, k, rng);
    for (std::size_t i = 0; i < k; ++i) def.nodes.push_back(node_kind_at(pool[i], ctx.alphabet));
}

void delete_nodes(EntityClassDef& def, int count, Rng& rng) {
    const int size = static_cast<int>(def.nodes.size());
    const int k = std::clamp(count, 0, size - 1);
    if (k == 0) return;

    std::vector<int> order(size);
    std::iota(order.begin(), order.end(), 0);
    partial_shuffle(order, k, rng);
    std::vector<char> removed(size, 0);
    for (int i = 0; i < k; ++i) removed[order[i]] = 1;

    std::vector<int> remap(size, -1);
    std::vector<ActionNode> kept;
    kept.reserve(size - k);
    for (int i = 0; i < size; ++i) {
        if (removed[i]) continue;
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(def.nodes[i]);
    }
    def.nodes = std::move(kept);

    std::vector<Edge> edges;
    for (auto e : def.edges) {
        if (removed[e.source] || removed[e.destination]) continue;
        e.source = remap[e.source];
        e.destination = remap[e.destination];
        edges.push_back(e);
    }
    def.edges = std::move(edges);
}

void alter_nodes(EntityClassDef& def, int count, const ClassContext& ctx, Rng& rng) {
    const int size = static_cast<int>(def.nodes.size());
    const int k = std::clamp(count, 0, size);
    std::vector<int> order(size);
    std::iota(order.begin(), order.end(), 0);
    partial_shuffle(order, k, rng);
    for (int i = 0; i < k; ++i) {
        // At capacity there is no unused kind and the node keeps its kind.
        const auto pool = unused_kinds(def, ctx.alphabet);
        if (pool.empty()) return;
        def.nodes[order[i]] = node_kind_at(pool[rng.below(pool.size())], ctx.alphabet);
    }
}

void add_edge(EntityClassDef& def, const ClassContext& ctx, Rng& rng) {
    def.edges.push_back(random_edge(static_cast<int>(def.nodes.size()), ctx, rng));
}

void delete_edge(EntityClassDef& def, Rng& rng) {
    if (def.edges.empty()) return;
    def.edges.erase(def.edges.begin() + static_cast<std::ptrdiff_t>(rng.below(def.edges.size())));
}

void alter_edge(EntityClassDef& def, const ClassContext& ctx, Rng& rng) {
    if (def.edges.empty()) return;
    def.edges[rng.below(def.edges.size())].condition = random_condition(ctx, rng);
}

}  // namespace qdaf
