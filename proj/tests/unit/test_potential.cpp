#include "kcrit/error.hpp"
#include "kcrit/potential.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace kcrit;
using testing_support::random_graph;

namespace {

// Straight enumeration, independent of the Gray-code oracle.
struct Minima {
    Potential all;
    std::optional<Potential> restricted;
};

Minima enumerate_minima(const Graph& g, int k)
{
    const int n = g.vertex_count();
    Minima m{std::numeric_limits<Potential>::max(), std::nullopt};
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        std::vector<Vertex> vs;
        for (int v = 0; v < n; ++v)
            if ((mask >> v) & 1)
                vs.push_back(v);
        std::int64_t e = 0;
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                e += g.adjacent(vs[i], vs[j]);
        const auto s = static_cast<std::int64_t>(vs.size());
        const Potential p = (k - 2) * (k + 1) * s - 2 * (k - 1) * e;
        m.all = std::min(m.all, p);
        if (s >= 2 && s <= n - 1)
            m.restricted = std::min(m.restricted.value_or(p), p);
    }
    return m;
}

} // namespace

TEST_CASE("potential of small cliques")
{
    CHECK(rho(complete_graph(5), 5, VertexSet::range(5)) == 10);
    CHECK(rho(cycle_graph(7), 4, VertexSet{3}) == 10);
    CHECK(rho(complete_graph(6), 5, VertexSet{1, 4}) == 28);
    CHECK(rho(complete_graph(6), 5, VertexSet{0, 1, 2, 3}) == 24);
    for (int k = 4; k <= 12; ++k) {
        const Graph kk = complete_graph(k);
        CHECK(rho(kk, k, VertexSet::range(k)) == k * (k - 3));
        CHECK(rho(kk, k, VertexSet{0}) == (k - 2) * (k + 1));
        CHECK(rho(kk, k, VertexSet{0, 1}) == 2 * (k * k - 2 * k - 1));
        CHECK(rho(kk, k, VertexSet::range(k - 1)) == 2 * (k - 1) * (k - 2));
    }
    CHECK_THROWS_AS(rho(complete_graph(3), 4, VertexSet{}), DomainError);
    CHECK_THROWS_AS(rho(complete_graph(3), 3, VertexSet{0}), DomainError);
}

TEST_CASE("brute-force minimum")
{
    const auto k5 = brute_min_potential(complete_graph(5), 4, false);
    CHECK(k5.set == VertexSet::range(5));
    CHECK(k5.rho == -10);

    const auto c5 = brute_min_potential(cycle_graph(5), 4, false);
    CHECK(c5.rho == 10);
    CHECK(c5.set == VertexSet{0});

    const auto k4 = brute_min_potential(complete_graph(4), 4, true);
    // Over 2 <= |W| <= 3 the triangle wins: 30 - 18 = 12 < 14 for an edge.
    CHECK(k4.rho == 12);
    CHECK(k4.set == VertexSet{0, 1, 2});

    CHECK_THROWS_AS(brute_min_potential(Graph(21), 4, false), SizeLimitError);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const int k = 4 + static_cast<int>(rng() % 4);
        const Graph g = random_graph(n, 0.2 + 0.7 * (trial % 5) / 4.0, rng);
        const auto m = enumerate_minima(g, k);
        const auto w = brute_min_potential(g, k, false);
        CHECK(w.rho == m.all);
        CHECK(rho(g, k, w.set) == w.rho);
        if (m.restricted) {
            const auto r = brute_min_potential(g, k, true);
            CHECK(r.rho == *m.restricted);
            CHECK(r.set.size() >= 2);
            CHECK(static_cast<int>(r.set.size()) <= n - 1);
        }
    }
}

TEST_CASE("R1 network layout")
{
    const Graph k4 = complete_graph(4);
    const auto h = build_R1_network(k4, 4);
    CHECK(h.node_count() == 12);
    const R1NodeLayout layout{4, 6};
    int vertex_edge_arcs = 0;
    for (const auto& a : h.arcs()) {
        if (a.tail == layout.source())
            CHECK(a.capacity == 80);
        if (a.head == layout.sink())
            CHECK(a.capacity == 8 * 6);
        if (a.tail < 4)
            ++vertex_edge_arcs;
    }
    CHECK(vertex_edge_arcs == 12);

    const auto hp = build_R1_network(k4, 4, Edge{0, 1}, 2);
    for (const auto& a : hp.arcs()) {
        if (a.tail == layout.edge_node(0))
            CHECK(a.capacity == 144);
        if (a.tail == layout.source())
            CHECK(a.capacity == (a.head == 2 ? 79 + 8 * 13 : 79));
    }
    CHECK_THROWS_AS(build_R1_network(k4, 4, Edge{0, 1}, 1), DomainError);

    // Unscaled this is 36 = 2(k-1)|E| + min(P_4, 0) with P_4(K_4) = 4 > 0.
    CHECK(max_flow(h).flow_value == 8 * 36);
}

TEST_CASE("flow identity and closed edge side")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const int k = 4 + static_cast<int>(rng() % 4);
        const Graph g = random_graph(n, 0.15 + 0.8 * (trial % 6) / 5.0, rng);
        const auto m = enumerate_minima(g, k);
        const auto net = build_R1_network(g, k);
        const auto cut = max_flow(net);
        const Capacity m2 = 2 * n;
        CHECK(cut.flow_value == m2 * (2 * (k - 1) * static_cast<Capacity>(g.edge_count()) + std::min<Potential>(m.all, 0)));
        const auto edges = g.edges();
        const R1NodeLayout layout{n, static_cast<int>(edges.size())};
        for (std::size_t j = 0; j < edges.size(); ++j) {
            const bool both = !cut.in_source_side(edges[j].u) && !cut.in_source_side(edges[j].v);
            CHECK(!cut.in_source_side(layout.edge_node(static_cast<int>(j))) == both);
        }
    }
}

TEST_CASE("procedure R1 agrees with enumeration")
{
    const auto k5 = procedure_R1(complete_graph(5), 5);
    CHECK(k5.tag == R1Tag::S1);
    REQUIRE(k5.witness);
    CHECK(k5.witness->set == VertexSet::range(5));
    CHECK(k5.witness->rho == 10);

    const auto k5k4 = procedure_R1(complete_graph(5), 4);
    CHECK(k5k4.tag == R1Tag::S1);
    CHECK(k5k4.witness->rho <= -10);

    const Graph two_c5 = testing_support::disjoint_union(cycle_graph(5), cycle_graph(5));
    CHECK(procedure_R1(two_c5, 4).tag == classify_brute(two_c5, 4).tag);

    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 9);
        const int k = 4 + static_cast<int>(rng() % 4);
        const Graph g = random_graph(n, 0.2 + 0.8 * (trial % 5) / 4.0, rng);
        const auto r1 = procedure_R1(g, k);
        const auto bf = classify_brute(g, k);
        CHECK(r1.tag == bf.tag);
        if (bf.tag == R1Tag::S2 || bf.tag == R1Tag::S3) {
            REQUIRE(r1.witness);
            CHECK(r1.witness->rho == *bf.restricted_minimum);
        }
        if (r1.witness)
            CHECK(rho(g, k, r1.witness->set) == r1.witness->rho);
        R1Options par;
        par.jobs = 3;
        const auto r3 = procedure_R1(g, k, par);
        CHECK(r3.tag == r1.tag);
        CHECK(r3.witness.has_value() == r1.witness.has_value());
        if (r3.witness)
            CHECK(r3.witness->set == r1.witness->set);
    }
}
