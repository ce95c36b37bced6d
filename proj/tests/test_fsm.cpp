#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "qdaf/fsm.hpp"
#include "qdaf/genotype.hpp"
#include "qdaf/rng.hpp"

using namespace qdaf;
using namespace qdaf::testing;

namespace {

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

std::set<int> kind_set(const EntityClassDef& def, const Alphabet& alphabet) {
    std::set<int> s;
    for (const auto& n : def.nodes) s.insert(node_kind_index(n, alphabet));
    return s;
}

}  // namespace

TEST_CASE("node capacity per class") {
    CHECK(max_nodes_per_class(15) == 94);
    CHECK(max_nodes_per_class(1) == 10);
    CHECK(max_nodes_per_class(15) * 15 == 1410);
    CHECK_THROWS(max_nodes_per_class(0));
}

TEST_CASE("node kind enumeration is a bijection") {
    const auto alphabet = default_alphabet(15);
    CHECK(node_kind_count(alphabet) == 94);
    std::set<std::pair<int, char>> seen;
    for (int i = 0; i < node_kind_count(alphabet); ++i) {
        const auto n = node_kind_at(i, alphabet);
        CHECK(node_kind_index(n, alphabet) == i);
        CHECK(is_targeted(n.kind) == (n.target != '\0'));
        seen.insert({static_cast<int>(n.kind), n.target});
    }
    CHECK(seen.size() == 94);
    CHECK(node_kind_at(0, alphabet).kind == ActionKind::idle);
    CHECK(node_kind_at(4, alphabet) == node(ActionKind::push, 'A'));
    CHECK(node_kind_index(node(ActionKind::chase, '#'), alphabet) == -1);
}

TEST_CASE("action and condition tokens round trip") {
    for (int k = 0; k <= static_cast<int>(ActionKind::move_wall); ++k) {
        const auto kind = static_cast<ActionKind>(k);
        CHECK(parse_action_kind(to_string(kind)) == kind);
    }
    for (int k = 0; k < kConditionKinds; ++k) {
        const auto kind = static_cast<ConditionKind>(k);
        CHECK(parse_condition_kind(to_string(kind)) == kind);
    }
    CHECK(to_string(ConditionKind::next_to) == "nextTo");
    CHECK_FALSE(parse_action_kind("jump").has_value());
}

TEST_CASE("validate_class") {
    const auto alphabet = default_alphabet(15);
    EntityClassDef def{'A', 0, {node(ActionKind::idle)}, {}};
    CHECK(validate_class(def, alphabet).empty());

    SUBCASE("dangling edge") {
        def.edges.push_back(edge(0, 1));
        CHECK(mentions(validate_class(def, alphabet), "dangling edge"));
    }
    SUBCASE("unknown node target") {
        def.nodes.push_back(node(ActionKind::chase, 'z'));
        CHECK(mentions(validate_class(def, alphabet), "unknown target"));
    }
    SUBCASE("unknown condition glyph") {
        def.edges.push_back(edge(0, 0, ConditionKind::touch, 'z'));
        CHECK(mentions(validate_class(def, alphabet), "unknown target"));
    }
    SUBCASE("empty class") {
        def.nodes.clear();
        CHECK(mentions(validate_class(def, alphabet), "no nodes"));
    }
    SUBCASE("untargeted kind with a target") {
        def.nodes[0].target = 'A';
        CHECK_FALSE(validate_class(def, alphabet).empty());
    }
    SUBCASE("nonpositive step") {
        def.edges.push_back(edge(0, 0, ConditionKind::step, '\0', 0));
        CHECK_FALSE(validate_class(def, alphabet).empty());
    }
}

TEST_CASE("random_class") {
    const auto ctx = make_context(default_alphabet(15), 15, 8);
    CHECK(ctx.max_within == 15);

    SUBCASE("budget 1") {
        Rng rng(1);
        const auto def = random_class('A', 0, 1, ctx, rng);
        CHECK(def.nodes.size() == 1);
        CHECK(def.edges.size() == 1);
        CHECK(def.edges[0].source == 0);
        CHECK(def.edges[0].destination == 0);
        CHECK(validate_class(def, ctx.alphabet).empty());
    }
    SUBCASE("budget at capacity uses every kind once") {
        Rng rng(2);
        const auto def = random_class('A', 0, 94, ctx, rng);
        CHECK(def.nodes.size() == 94);
        CHECK(kind_set(def, ctx.alphabet).size() == 94);
        CHECK(validate_class(def, ctx.alphabet).empty());
    }
    SUBCASE("fixed seed reproduces the class") {
        Rng a(77), b(77);
        CHECK(random_class('C', 2, 10, ctx, a) == random_class('C', 2, 10, ctx, b));
    }
    SUBCASE("condition parameters stay in range") {
        Rng rng(3);
        for (int i = 0; i < 2000; ++i) {
            const auto c = random_condition(ctx, rng);
            if (c.kind == ConditionKind::step) CHECK((c.param >= 1 && c.param <= 20));
            if (c.kind == ConditionKind::within) CHECK((c.param >= 1 && c.param <= 15));
            if (has_glyph(c.kind)) CHECK(ctx.alphabet.find(c.glyph) != std::string::npos);
        }
    }
    SUBCASE("budget out of range") {
        Rng rng(4);
        CHECK_THROWS(random_class('A', 0, 0, ctx, rng));
        CHECK_THROWS(random_class('A', 0, 95, ctx, rng));
    }
}

TEST_CASE("node edits") {
    const auto ctx = make_context(default_alphabet(15), 15, 8);
    Rng rng(9);

    SUBCASE("delete keeps at least one node") {
        EntityClassDef def{'A', 0, {node(ActionKind::idle)}, {}};
        const auto before = def;
        delete_nodes(def, 5, rng);
        CHECK(def == before);
    }
    SUBCASE("add clamps at capacity") {
        auto def = random_class('A', 0, 90, ctx, rng);
        add_nodes(def, 10, ctx, rng);
        CHECK(def.nodes.size() == 94);
        CHECK(kind_set(def, ctx.alphabet).size() == 94);
    }
    SUBCASE("delete drops edges into the removed node and reindexes") {
        // Deleting from three nodes with every possible draw; the expected
        // edge list is rebuilt independently from the surviving nodes.
        const EntityClassDef base{'A', 0,
                                  {node(ActionKind::idle), node(ActionKind::move), node(ActionKind::die)},
                                  {edge(0, 1), edge(1, 2, ConditionKind::step, '\0', 3), edge(2, 0), edge(0, 2)}};
        std::set<int> removed_seen;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            auto def = base;
            Rng r(seed);
            delete_nodes(def, 1, r);
            REQUIRE(def.nodes.size() == 2);
            int removed = -1;
            for (int i = 0; i < 3; ++i)
                if (std::find(def.nodes.begin(), def.nodes.end(), base.nodes[i]) == def.nodes.end()) removed = i;
            REQUIRE(removed >= 0);
            removed_seen.insert(removed);
            std::vector<Edge> expected;
            for (auto e : base.edges) {
                if (e.source == removed || e.destination == removed) continue;
                if (e.source > removed) --e.source;
                if (e.destination > removed) --e.destination;
                expected.push_back(e);
            }
            CHECK(def.edges == expected);
            CHECK(validate_class(def, ctx.alphabet).empty());
        }
        CHECK(removed_seen.size() == 3);
    }
    SUBCASE("alter preserves edges and count") {
        auto def = random_class('A', 0, 12, ctx, rng);
        const auto edges = def.edges;
        alter_nodes(def, 4, ctx, rng);
        CHECK(def.nodes.size() == 12);
        CHECK(def.edges == edges);
        CHECK(kind_set(def, ctx.alphabet).size() == 12);
    }
}

TEST_CASE("edge edits") {
    const auto ctx = make_context(default_alphabet(15), 15, 8);
    Rng rng(5);

    SUBCASE("delete and alter on an edgeless class") {
        EntityClassDef def{'A', 0, {node(ActionKind::idle)}, {}};
        const auto before = def;
        delete_edge(def, rng);
        alter_edge(def, ctx, rng);
        CHECK(def == before);
    }
    SUBCASE("add on a one-node class is a self loop") {
        EntityClassDef def{'A', 0, {node(ActionKind::idle)}, {}};
        add_edge(def, ctx, rng);
        REQUIRE(def.edges.size() == 1);
        CHECK(def.edges[0].source == 0);
        CHECK(def.edges[0].destination == 0);
    }
    SUBCASE("fixed seed reproduces edits") {
        auto a = random_class('A', 0, 6, ctx, rng);
        auto b = a;
        Rng ra(11), rb(11);
        add_edge(a, ctx, ra);
        alter_edge(a, ctx, ra);
        add_edge(b, ctx, rb);
        alter_edge(b, ctx, rb);
        CHECK(a == b);
    }
    SUBCASE("alter keeps endpoints") {
        auto def = random_class('A', 0, 6, ctx, rng);
        const auto before = def;
        alter_edge(def, ctx, rng);
        REQUIRE(def.edges.size() == before.edges.size());
        for (std::size_t i = 0; i < def.edges.size(); ++i) {
            CHECK(def.edges[i].source == before.edges[i].source);
            CHECK(def.edges[i].destination == before.edges[i].destination);
        }
    }
}

TEST_CASE("random edit sequences stay valid") {
    const auto ctx = make_context(default_alphabet(15), 15, 8);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        auto def = random_class('B', 1, static_cast<int>(rng.between(1, 94)), ctx, rng);
        for (int i = 0; i < 60; ++i) {
            const int count = static_cast<int>(rng.between(1, 10));
            switch (rng.below(6)) {
            case 0: add_nodes(def, count, ctx, rng); break;
            case 1: delete_nodes(def, count, rng); break;
            case 2: alter_nodes(def, count, ctx, rng); break;
            case 3: add_edge(def, ctx, rng); break;
            case 4: delete_edge(def, rng); break;
            default: alter_edge(def, ctx, rng); break;
            }
            const auto v = validate_class(def, ctx.alphabet);
            REQUIRE_MESSAGE(v.empty(), "seed ", seed, " step ", i, ": ", v.front());
            REQUIRE(def.nodes.size() >= 1);
            REQUIRE(def.nodes.size() <= 94);
        }
    }
}

TEST_CASE("glyphs and alphabets") {
    CHECK(default_alphabet(3) == "ABC");
    CHECK(default_alphabet(15) == "ABCDEFGHIJKLMNO");
    const auto wide = default_alphabet(62);
    CHECK(std::is_sorted(wide.begin(), wide.end()));
    CHECK_FALSE(is_valid_glyph('#'));
    CHECK_FALSE(is_valid_glyph('.'));
    CHECK_FALSE(is_valid_glyph(' '));
    CHECK(is_valid_glyph('x'));
}
