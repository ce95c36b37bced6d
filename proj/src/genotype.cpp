#include "qdaf/genotype.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace qdaf {

Alphabet FortressGenotype::alphabet() const {
    Alphabet a;
    a.reserve(classes.size());
    for (const auto& c : classes) a.push_back(c.glyph);
    std::sort(a.begin(), a.end());
    return a;
}

int FortressGenotype::class_index(char glyph) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].glyph == glyph) return static_cast<int>(i);
    return -1;
}

int FortressGenotype::total_nodes() const {
    int n = 0;
    for (const auto& c : classes) n += static_cast<int>(c.nodes.size());
    return n;
}

int FortressGenotype::total_edges() const {
    int n = 0;
    for (const auto& c : classes) n += static_cast<int>(c.edges.size());
    return n;
}

bool is_valid_glyph(char c) {
    return std::isgraph(static_cast<unsigned char>(c)) && c != '#' && c != '.' && c != '-';
}

Alphabet default_alphabet(int n) {
    static const std::string pool =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    if (n < 1 || n > static_cast<int>(pool.size()))
        throw std::invalid_argument("class count must be in [1, 62]");
    Alphabet a = pool.substr(0, n);
    std::sort(a.begin(), a.end());
    return a;
}

std::vector<std::string> validate_genotype(const FortressGenotype& g) {
    std::vector<std::string> out;
    if (g.width < 3 || g.height < 3) out.push_back("fortress must be at least 3x3 including walls");
    if (g.classes.empty()) {
        out.push_back("no entity classes");
        return out;
    }

    const Alphabet alphabet = g.alphabet();
    if (std::adjacent_find(alphabet.begin(), alphabet.end()) != alphabet.end())
        out.push_back("duplicate class glyphs");
    for (char c : alphabet)
        if (!is_valid_glyph(c)) out.push_back(std::string("invalid glyph '") + c + "'");

    for (const auto& c : g.classes) {
        auto v = validate_class(c, alphabet);
        out.insert(out.end(), v.begin(), v.end());
    }

    const int n = static_cast<int>(g.classes.size());
    const int total = g.total_nodes();
    const int cap = max_nodes_per_class(n) * n;
    if (total < n || total > cap)
        out.push_back("total node count " + std::to_string(total) + " outside [" + std::to_string(n) + ", " +
                      std::to_string(cap) + "]");

    if (static_cast<int>(g.placements.size()) > 2 * g.interior_tiles())
        out.push_back("more than two placements per interior tile");
    for (std::size_t i = 0; i < g.placements.size(); ++i) {
        const auto& p = g.placements[i];
        if (g.class_index(p.glyph) < 0)
            out.push_back("placement " + std::to_string(i) + ": unknown glyph '" + std::string(1, p.glyph) + "'");
        if (!g.is_interior(p.x, p.y))
            out.push_back("placement " + std::to_string(i) + ": (" + std::to_string(p.x) + "," +
                          std::to_string(p.y) + ") out of bounds");
    }
    return out;
}

}  // namespace qdaf
