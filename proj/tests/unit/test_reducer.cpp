#include "kcrit/error.hpp"
#include "kcrit/graph_io.hpp"
#include "kcrit/oracle.hpp"
#include "kcrit/reducer.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace kcrit;
using testing_support::from_edges;

namespace {

// Independent check of the band 1 + k(k-3) + 2i(k-1) <= rho <= k(k-3) + 2(i+1)(k-1).
bool in_band(Potential rho, int k, int i)
{
    const Potential low = static_cast<Potential>(k) * (k - 3);
    return 1 + low + 2 * i * (k - 1) <= rho && rho <= low + 2 * (i + 1) * (k - 1);
}

// Every independent M (|M| >= 2) of the graph on the weighted vertices leaves weight >= i outside.
bool satisfies_weight_condition(const WeightedSet& w, const std::vector<Edge>& edges, int i)
{
    const int s = static_cast<int>(w.size());
    std::set<std::pair<Vertex, Vertex>> adj;
    for (const Edge& e : edges)
        adj.insert({e.u, e.v});
    for (std::uint32_t mask = 0; mask < (1U << s); ++mask) {
        if (__builtin_popcount(mask) < 2)
            continue;
        bool independent = true;
        int outside = 0;
        for (int a = 0; a < s; ++a) {
            if (!(mask >> a & 1U)) {
                outside += w[a].second;
                continue;
            }
            for (int b = a + 1; b < s; ++b)
                if (mask >> b & 1U) {
                    const Vertex x = std::min(w[a].first, w[b].first), y = std::max(w[a].first, w[b].first);
                    if (adj.count({x, y}))
                        independent = false;
                }
        }
        if (independent && outside < i)
            return false;
    }
    return true;
}

ColoringOutcome traced(const Graph& g, int k)
{
    ReducerOptions o;
    o.trace = true;
    return color_or_witness(g, k, o);
}

bool fired(const ColoringOutcome& out, const std::string& step)
{
    return std::any_of(out.trace.entries.begin(), out.trace.entries.end(),
                       [&](const TraceEntry& e) { return e.step == step; });
}

// Parent of an entry: the nearest earlier entry one level up.
void check_monotone(const ReductionTrace& trace)
{
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        const auto& e = trace.entries[i];
        if (e.depth == 0)
            continue;
        std::size_t j = i;
        while (j-- > 0 && trace.entries[j].depth != e.depth - 1) {
        }
        REQUIRE(j < i);
        const auto& p = trace.entries[j];
        const auto child = std::make_tuple(e.edges, -static_cast<std::int64_t>(e.twin_pairs), e.vertices);
        const auto parent = std::make_tuple(p.edges, -static_cast<std::int64_t>(p.twin_pairs), p.vertices);
        CHECK(child < parent);
    }
}

Graph circulant(int n, std::initializer_list<int> offsets)
{
    GraphBuilder b(n);
    for (int v = 0; v < n; ++v)
        for (int d : offsets)
            b.add_edge(v, (v + d) % n);
    return b.build();
}

// K_8 minus a perfect matching, twice, joined by two edges.
Graph two_blobs()
{
    GraphBuilder b(16);
    for (int base : {0, 8})
        for (int u = 0; u < 8; ++u)
            for (int v = u + 1; v < 8; ++v)
                if (!(u % 2 == 0 && v == u + 1))
                    b.add_edge(base + u, base + v);
    b.add_edge(0, 8);
    b.add_edge(2, 10);
    return b.build();
}

} // namespace

TEST_CASE("choose_i")
{
    CHECK(choose_i(41, 7) == 1);
    CHECK(choose_i(52, 7) == 1);
    CHECK(choose_i(24, 5) == 1);
    CHECK(choose_i(40, 7) == 0);
    for (int k = 4; k <= 15; ++k)
        for (Potential rho = witness_threshold(k) + 1; rho <= clique_potential(k); ++rho) {
            const int i = choose_i(rho, k);
            CHECK(in_band(rho, k, i));
            CHECK(2 * i <= k - 2);
        }
    CHECK_THROWS_AS(choose_i(28, 7), DomainError);
    CHECK_THROWS_AS(choose_i(61, 7), DomainError);
}

TEST_CASE("lemma4_edges examples")
{
    const WeightedSet star{{0, 3}, {1, 1}, {2, 1}};
    const auto e1 = lemma4_edges(star, 2, 6);
    CHECK(e1 == std::vector<Edge>{Edge(0, 1), Edge(0, 2)});
    CHECK(satisfies_weight_condition(star, e1, 2));

    const WeightedSet even{{0, 2}, {1, 2}, {2, 2}, {3, 2}};
    const auto e2 = lemma4_edges(even, 3, 9);
    CHECK(e2.size() <= 3);
    CHECK(satisfies_weight_condition(even, e2, 3));

    const WeightedSet any{{4, 2}, {7, 1}, {9, 3}};
    CHECK(lemma4_edges(any, 1, 6).size() >= 1);

    CHECK_THROWS_AS(lemma4_edges(star, 3, 6), DomainError);                    // i > (k-1)/2
    CHECK_THROWS_AS(lemma4_edges({{0, 1}, {1, 1}}, 1, 6), DomainError);        // weight < k-1
    CHECK_THROWS_AS(lemma4_edges({{0, 0}, {1, 5}}, 1, 6), DomainError);        // zero weight
}

TEST_CASE("lemma4_edges weight condition on random weights")
{
    std::mt19937_64 rng(404);
    for (int t = 0; t < 400; ++t) {
        const int k = 5 + static_cast<int>(rng() % 10);
        const int i = 1 + static_cast<int>(rng() % ((k - 1) / 2));
        const int s = 1 + static_cast<int>(rng() % 8);
        WeightedSet w;
        int total = 0;
        for (int v = 0; v < s; ++v) {
            const int wt = 1 + static_cast<int>(rng() % 4);
            w.emplace_back(3 * v + 1, wt);
            total += wt;
        }
        while (total < k - 1) {
            ++w[rng() % s].second;
            ++total;
        }
        const auto edges = lemma4_edges(w, i, k);
        CHECK(edges.size() <= static_cast<std::size_t>(i));
        CHECK(satisfies_weight_condition(w, edges, i));
    }
}

TEST_CASE("y_gadget")
{
    // K_4 with pendant p = 4 on vertex 1.
    const Graph g = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {1, 4}});
    ColorAssignment phi(4);
    phi[0] = 1, phi[1] = 2, phi[2] = 3, phi[3] = 1;  // not proper: 0 and 3 clash
    CHECK_THROWS_AS(y_gadget(g, {0, 1, 2, 3}, phi, 4), DomainError);

    // K_4 needs 4 colors, so use k = 5 with palette 4.
    phi[3] = 4;
    const Graph y = y_gadget(g, {0, 1, 2, 3}, phi, 5);
    CHECK(y.vertex_count() == 5 - 4 + 4);
    // p is Y-vertex 0; x_i is 1 + (i - 1).
    CHECK(y.neighbors(0) == std::vector<Vertex>{1 + phi[1] - 1});
    CHECK(is_clique(y, {1, 2, 3, 4}));

    ColorAssignment all(5);
    for (Vertex v = 0; v < 4; ++v)
        all[v] = phi[v];
    all[4] = 1;
    const Graph whole = y_gadget(g, VertexSet::range(5), all, 5);
    CHECK(whole == complete_graph(4));

    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        const Graph h = testing_support::random_graph(10, 0.3, rng);
        const VertexSet r{0, 1, 2, 3, 4};
        const auto c = find_coloring(h.induced(r), 4);
        REQUIRE(c);
        const Graph yy = y_gadget(h, r, *c, 5);
        CHECK(yy.vertex_count() == 10 - 5 + 4);
        CHECK(yy.induced(VertexSet{0, 1, 2, 3, 4}) == h.induced(VertexSet{5, 6, 7, 8, 9}));
    }
}

TEST_CASE("combine_across_small_cut")
{
    // Two triangles joined by one edge, palette 3.
    const Graph g = from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
    ColorAssignment a(3), b(3);
    a[0] = 1, a[1] = 2, a[2] = 3;
    b[0] = 3, b[1] = 1, b[2] = 2;  // vertex 3 gets 3, clashing with vertex 2
    const ColorAssignment c = combine_across_small_cut(g, {0, 1, 2}, a, b, 3);
    CHECK(is_proper_coloring(g, c, 3));
    CHECK(c[0] == 1);
}

TEST_CASE("color_or_witness examples")
{
    const auto c5 = traced(cycle_graph(5), 4);
    REQUIRE(c5.is_coloring());
    CHECK(is_proper_coloring(cycle_graph(5), c5.coloring(), 3));

    const auto k5 = color_or_witness(complete_graph(5), 5);
    REQUIRE(!k5.is_coloring());
    CHECK(k5.witness().set == VertexSet::range(5));
    CHECK(k5.witness().rho == 10);

    // 200-vertex random forest.
    std::mt19937_64 rng(77);
    GraphBuilder fb(200);
    for (Vertex v = 1; v < 200; ++v)
        if (rng() % 10 != 0)
            fb.add_edge(v, static_cast<Vertex>(rng() % v));
    const Graph forest = fb.build();
    const auto f = color_or_witness(forest, 7);
    REQUIRE(f.is_coloring());
    CHECK(is_proper_coloring(forest, f.coloring(), 6));

    CHECK_THROWS_AS(color_or_witness(cycle_graph(5), 3), DomainError);
    CHECK(color_or_witness(Graph(0), 4).is_coloring());
}

TEST_CASE("random n = 12 graphs with large potential get 6-colored at k = 7")
{
    std::mt19937_64 rng(1207);
    int checked = 0;
    for (int t = 0; t < 400 && checked < 40; ++t) {
        const Graph g = testing_support::near_regular(12, 6, static_cast<int>(rng() % 3), rng);
        if (brute_min_potential(g, 7, false).rho <= witness_threshold(7))
            continue;
        ++checked;
        const auto out = traced(g, 7);
        REQUIRE(out.is_coloring());
        CHECK(is_proper_coloring(g, out.coloring(), 6));
        check_monotone(out.trace);
    }
    CHECK(checked >= 20);
}

TEST_CASE("soundness against the oracles")
{
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 300; ++t) {
        const int k = 4 + static_cast<int>(rng() % 4);
        const int n = 5 + static_cast<int>(rng() % 8);
        const Graph g = rng() % 2 ? testing_support::random_graph(n, 0.25 + (rng() % 50) / 100.0, rng)
                                  : testing_support::near_regular(n, std::min(k - 1, n - 1), 0, rng);
        const auto out = traced(g, k);
        const Potential p = brute_min_potential(g, k, false).rho;
        if (out.is_coloring()) {
            CHECK(is_proper_coloring(g, out.coloring(), k - 1));
        } else {
            CHECK(is_valid_failure_witness(g, out.witness()));
            CHECK(p <= witness_threshold(k));
        }
        if (p > witness_threshold(k))
            CHECK(out.is_coloring());
        if (!find_coloring(g, k - 1))
            CHECK(!out.is_coloring());
        check_monotone(out.trace);
    }
}

TEST_CASE("step rules fire and lift on a seeded corpus")
{
    std::mt19937_64 rng(11);
    std::set<std::string> seen;
    for (int k : {4, 5, 6, 7}) {
        for (int t = 0; t < 500; ++t) {
            const int n = k + 1 + static_cast<int>(rng() % (15 - k));
            const Graph g = testing_support::near_regular(n, k - 1, static_cast<int>(rng() % 3), rng);
            if (brute_min_potential(g, k, false).rho <= witness_threshold(k))
                continue;
            const auto out = traced(g, k);
            REQUIRE(out.is_coloring());
            CHECK(out.stats.fallbacks == 0);
            check_monotone(out.trace);
            for (const auto& e : out.trace.entries)
                seen.insert(e.step);
        }
    }
    for (const char* step : {"1.peel", "4", "5.1", "5.3", "6.2", "extra.k5"})
        CHECK_MESSAGE(seen.count(step), step);
}

TEST_CASE("synthetic S2 instance")
{
    const Graph g = two_blobs();
    const auto brute = classify_brute(g, 7);
    REQUIRE(brute.tag == R1Tag::S2);
    const auto out = traced(g, 7);
    REQUIRE(out.is_coloring());
    CHECK(fired(out, "3"));
    CHECK(is_proper_coloring(g, out.coloring(), 6));
}

TEST_CASE("5.2 twin lift: size-2 cluster in a 6-clique, k = 7")
{
    const Graph g = parse_graph6("M~~}??BGXU`{C|D]?");
    REQUIRE(classify_brute(g, 7).tag == R1Tag::S5);
    REQUIRE(same_closed_neighborhood(g, 0, 1));
    REQUIRE(is_clique(g, {0, 1, 2, 3, 4, 5}));
    const auto out = traced(g, 7);
    REQUIRE(!out.trace.entries.empty());
    CHECK(out.trace.entries.front().step == "5.2");
    REQUIRE(out.is_coloring());
    CHECK(is_proper_coloring(g, out.coloring(), 6));
}

TEST_CASE("6.2 twin lift when v lies in no 6-clique, k = 7")
{
    const Graph g = circulant(14, {1, 2, 3});
    REQUIRE(classify_brute(g, 7).tag == R1Tag::S5);
    REQUIRE(!find_clique_of(g, 0, 6));
    const auto out = traced(g, 7);
    REQUIRE(!out.trace.entries.empty());
    CHECK(out.trace.entries.front().step == "6.2");
    REQUIRE(out.is_coloring());
    CHECK(is_proper_coloring(g, out.coloring(), 6));
}

TEST_CASE("step 7 on a biregular low/high graph")
{
    std::mt19937_64 rng(1);
    const Graph g = testing_support::biregular_bipartite(18, 15, 6, rng);
    const Step7Partition part = step7_partition(g, 6);
    CHECK(part.low.size() == 18);
    CHECK(part.high.size() == 15);
    CHECK(part.e0 == 90);
    CHECK(part.dense);
    const auto out = traced(g, 6);
    REQUIRE(out.is_coloring());
    CHECK(fired(out, "7"));
    CHECK(is_proper_coloring(g, out.coloring(), 5));

    // Every low residual vertex keeps at least d_H colors after the outer region is colored.
    const VertexSet hs = part.residual();
    ColorAssignment partial(g.vertex_count());
    const VertexSet outer = [&] {
        std::vector<Vertex> o;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (!hs.contains(v))
                o.push_back(v);
        return VertexSet(o);
    }();
    const auto oc = find_coloring(g.induced(outer), 5);
    REQUIRE(oc);
    for (std::size_t p = 0; p < outer.size(); ++p)
        partial[outer[p]] = (*oc)[static_cast<Vertex>(p)];
    for (Vertex a : part.residual_low) {
        std::set<Color> used;
        int inside = 0;
        for (Vertex u : g.neighbors(a)) {
            if (hs.contains(u))
                ++inside;
            else
                used.insert(partial[u]);
        }
        CHECK(5 - static_cast<int>(used.size()) >= inside);
    }
    CHECK(is_proper_coloring(g, step7_peel_and_color(g, 6, partial), 5));
}

TEST_CASE("step 7 with nothing left after the peel returns the partial coloring")
{
    const Graph g = cycle_graph(6);  // k = 4: every vertex has degree 2, so no low/high classes
    ColorAssignment c(6);
    for (Vertex v = 0; v < 6; ++v)
        c[v] = 1 + v % 2;
    const Step7Partition part = step7_partition(g, 4);
    CHECK(part.residual().empty());
    CHECK(!part.dense);
    CHECK(step7_peel_and_color(g, 4, c).colors == c.colors);

    ColorAssignment bad(6);
    CHECK_THROWS_AS(step7_peel_and_color(g, 4, bad), DomainError);
}

TEST_CASE("step 7 residual colorings on random sparse instances")
{
    std::mt19937_64 rng(2024);
    int exercised = 0;
    for (int t = 0; t < 50; ++t) {
        // Partial biregular core plus a random fringe that keeps some low vertices outside the residual.
        const Graph core = testing_support::biregular_bipartite(6, 5, 6, rng);
        GraphBuilder b(core);
        for (int extra = 0; extra < 3; ++extra) {
            const Vertex v = b.add_vertex();
            b.add_edge(v, static_cast<Vertex>(rng() % 6));
            b.add_edge(v, 6 + static_cast<Vertex>(rng() % 5));
        }
        const Graph g = b.build();
        const VertexSet hs = step7_partition(g, 6).residual();
        std::vector<Vertex> o;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (!hs.contains(v))
                o.push_back(v);
        const VertexSet outer(o);
        const auto oc = find_coloring(g.induced(outer), 5);
        if (!oc)
            continue;
        ColorAssignment partial(g.vertex_count());
        for (std::size_t p = 0; p < outer.size(); ++p)
            partial[outer[p]] = (*oc)[static_cast<Vertex>(p)];
        const ColorAssignment c = step7_peel_and_color(g, 6, partial);
        CHECK(is_proper_coloring(g, c, 5));
        exercised += !hs.empty();
    }
    CHECK(exercised > 0);
}

TEST_CASE("collapse_and_recurse on a tight K_6")
{
    // K_6 on 0..5 and a 7-cycle on 6..12, each cycle vertex attached to one clique vertex.
    GraphBuilder b(13);
    for (Vertex u = 0; u < 6; ++u)
        for (Vertex v = u + 1; v < 6; ++v)
            b.add_edge(u, v);
    for (Vertex i = 0; i < 7; ++i) {
        b.add_edge(6 + i, 6 + (i + 1) % 7);
        b.add_edge(6 + i, i % 6);
    }
    const Graph g = b.build();
    const VertexSet r = VertexSet::range(6);
    CHECK(rho(g, 7, r) == clique_potential(7));
    const auto out = collapse_and_recurse(g, 7, r, choose_i(rho(g, 7, r), 7));
    REQUIRE(out.is_coloring());
    CHECK(is_proper_coloring(g, out.coloring(), 6));
    const auto plain = collapse_and_recurse(g, 7, r, std::nullopt);
    REQUIRE(plain.is_coloring());
    CHECK_THROWS_AS(collapse_and_recurse(g, 7, VertexSet{0}, std::nullopt), DomainError);
}
