#pragma once

#include "kcrit/graph.hpp"

#include <algorithm>
#include <random>

namespace testing_support {

inline kcrit::Graph random_graph(int n, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(p);
    kcrit::GraphBuilder b(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng))
                b.add_edge(u, v);
    return b.build();
}

inline kcrit::Graph from_edges(int n, std::initializer_list<std::pair<int, int>> es)
{
    kcrit::GraphBuilder b(n);
    for (auto [u, v] : es)
        b.add_edge(u, v);
    return b.build();
}

inline kcrit::Graph disjoint_union(const kcrit::Graph& a, const kcrit::Graph& b)
{
    kcrit::GraphBuilder out(a.vertex_count() + b.vertex_count());
    for (auto e : a.edges())
        out.add_edge(e.u, e.v);
    for (auto e : b.edges())
        out.add_edge(e.u + a.vertex_count(), e.v + a.vertex_count());
    return out.build();
}

// Configuration-model graph with every degree d (retried until simple), plus `extra` random edges.
// Falls back to the last attempt with clashing pairs dropped.
inline kcrit::Graph near_regular(int n, int d, int extra, std::mt19937_64& rng)
{
    kcrit::GraphBuilder b(n);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i)
                stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng() % i]);
        b = kcrit::GraphBuilder(n);
        bool simple = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            const int u = stubs[i], v = stubs[i + 1];
            if (u == v || b.adjacent(u, v)) {
                simple = false;
                continue;
            }
            b.add_edge(u, v);
        }
        if (simple)
            break;
    }
    for (int added = 0, tries = 0; added < extra && tries < 1000; ++tries) {
        const int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
        if (u != v && !b.adjacent(u, v)) {
            b.add_edge(u, v);
            ++added;
        }
    }
    return b.build();
}

// d-regular graph on n vertices (n*d even, d < n): the circulant on offsets 1..d/2 (plus the antipodal
// matching when d is odd), scrambled by random degree-preserving double-edge switches.
inline kcrit::Graph regular_by_switching(int n, int d, int switches, std::mt19937_64& rng)
{
    kcrit::GraphBuilder b(n);
    for (int v = 0; v < n; ++v)
        for (int off = 1; off <= d / 2; ++off)
            b.add_edge(v, (v + off) % n);
    if (d % 2)
        for (int v = 0; v < n / 2; ++v)
            b.add_edge(v, v + n / 2);
    std::vector<kcrit::Edge> edges = b.build().edges();
    for (int s = 0; s < switches && edges.size() >= 2; ++s) {
        const std::size_t i = rng() % edges.size(), j = rng() % edges.size();
        auto [a, c] = edges[i];
        auto [x, y] = edges[j];
        if (rng() % 2)
            std::swap(x, y);
        // ac, xy -> ax, cy
        if (i == j || a == x || c == y || a == y || c == x || b.adjacent(a, x) || b.adjacent(c, y))
            continue;
        b.remove_edge(a, c);
        b.remove_edge(x, y);
        b.add_edge(a, x);
        b.add_edge(c, y);
        edges[i] = kcrit::Edge(a, x);
        edges[j] = kcrit::Edge(c, y);
    }
    return b.build();
}

// Bipartite graph: `low` vertices of degree k-1 (0..low-1) against `high` vertices of degree k.
// Needs low*(k-1) == high*k. Each low vertex takes the high vertices with the most spare capacity,
// ties broken at random; restarts on a dead end.
inline kcrit::Graph biregular_bipartite(int low, int high, int k, std::mt19937_64& rng)
{
    for (;;) {
        kcrit::GraphBuilder b(low + high);
        std::vector<int> spare(high, k);
        bool stuck = false;
        for (int a = 0; a < low && !stuck; ++a) {
            std::vector<std::pair<int, std::uint64_t>> order;
            for (int h = 0; h < high; ++h)
                order.emplace_back(h, rng());
            std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
                return spare[x.first] != spare[y.first] ? spare[x.first] > spare[y.first] : x.second < y.second;
            });
            for (int j = 0; j < k - 1; ++j) {
                const int h = order[j].first;
                if (spare[h] == 0) {
                    stuck = true;
                    break;
                }
                --spare[h];
                b.add_edge(a, low + h);
            }
        }
        if (!stuck)
            return b.build();
    }
}

} // namespace testing_support
