#pragma once

#include <string>
#include <vector>

#include "qdaf/fsm.hpp"

namespace qdaf {

inline constexpr int kDefaultClassCount = 15;
inline constexpr int kDefaultWidth = 15;
inline constexpr int kDefaultHeight = 8;

struct Placement {
    char glyph = '?';
    int x = 0;
    int y = 0;

    bool operator==(const Placement&) const = default;
};

/// The evolvable unit: class FSMs plus initial instance placements on a
/// walled grid. width and height include the one-tile wall border.
struct FortressGenotype {
    int width = kDefaultWidth;
    int height = kDefaultHeight;
    std::vector<EntityClassDef> classes;
    std::vector<Placement> placements;

    bool operator==(const FortressGenotype&) const = default;

    Alphabet alphabet() const;
    int class_index(char glyph) const;  // -1 if absent
    int total_nodes() const;
    int total_edges() const;
    bool is_interior(int x, int y) const {
        return x > 0 && y > 0 && x < width - 1 && y < height - 1;
    }
    int interior_tiles() const { return interior_tile_count(width, height); }

    static int interior_tile_count(int width, int height) {
        return width > 2 && height > 2 ? (width - 2) * (height - 2) : 0;
    }
};

/// Printable, and not one of the characters the renderer and file formats reserve.
bool is_valid_glyph(char c);

/// First n glyphs of A-Z, a-z, 0-9 (sorted ascending).
Alphabet default_alphabet(int n);

/// Empty result means valid.
std::vector<std::string> validate_genotype(const FortressGenotype& g);

}  // namespace qdaf
