#include "kcrit/coloring.hpp"

#include <algorithm>

namespace kcrit {

bool ColorAssignment::complete() const
{
    return std::none_of(colors.begin(), colors.end(), [](Color c) { return c == kUncolored; });
}

std::string coloring_defect(const Graph& g, const ColorAssignment& c, int palette, bool require_complete)
{
    if (c.size() != g.vertex_count())
        return "assignment covers " + std::to_string(c.size()) + " vertices, graph has " +
               std::to_string(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (c[v] == kUncolored) {
            if (require_complete)
                return "vertex " + std::to_string(v) + " is uncolored";
            continue;
        }
        if (c[v] < 1 || c[v] > palette)
            return "vertex " + std::to_string(v) + " has color " + std::to_string(c[v]) + " outside 1.." +
                   std::to_string(palette);
    }
    for (const auto& e : g.edges())
        if (c[e.u] != kUncolored && c[e.u] == c[e.v])
            return "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is monochromatic";
    return {};
}

Color first_free_color(const Graph& g, const ColorAssignment& c, Vertex v, int palette)
{
    std::vector<bool> used(palette + 1, false);
    for (Vertex u : g.neighbors(v))
        if (c[u] >= 1 && c[u] <= palette)
            used[c[u]] = true;
    for (Color x = 1; x <= palette; ++x)
        if (!used[x])
            return x;
    return kUncolored;
}

bool greedy_extend(const Graph& g, ColorAssignment& c, const std::vector<Vertex>& order, int palette)
{
    for (Vertex v : order) {
        const Color x = first_free_color(g, c, v, palette);
        if (x == kUncolored)
            return false;
        c[v] = x;
    }
    return true;
}

} // namespace kcrit
