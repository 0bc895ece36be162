#pragma once

#include "kcrit/graph.hpp"

#include <string>
#include <vector>

namespace kcrit {

using Color = int;
constexpr Color kUncolored = 0;

/// Vertex -> color map, colors 1-based; kUncolored marks an unassigned vertex.
struct ColorAssignment {
    std::vector<Color> colors;

    ColorAssignment() = default;
    explicit ColorAssignment(int n) : colors(n, kUncolored) {}

    int size() const { return static_cast<int>(colors.size()); }
    Color operator[](Vertex v) const { return colors[v]; }
    Color& operator[](Vertex v) { return colors[v]; }
    bool complete() const;
};

/// Empty string when `c` is a proper coloring of g using colors 1..palette (total when
/// `require_complete`); otherwise a description of the first defect found.
std::string coloring_defect(const Graph& g, const ColorAssignment& c, int palette, bool require_complete = true);

inline bool is_proper_coloring(const Graph& g, const ColorAssignment& c, int palette)
{
    return coloring_defect(g, c, palette, true).empty();
}

/// Smallest color in 1..palette absent from v's colored neighbors, or kUncolored.
Color first_free_color(const Graph& g, const ColorAssignment& c, Vertex v, int palette);

/// Colors `order` greedily in sequence; returns false when some vertex has no free color.
bool greedy_extend(const Graph& g, ColorAssignment& c, const std::vector<Vertex>& order, int palette);

} // namespace kcrit
