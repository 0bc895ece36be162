#include "kcrit/potential.hpp"

#include "kcrit/config.hpp"
#include "kcrit/error.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace kcrit {

int oracle_limit()
{
    if (const char* env = std::getenv("KCRIT_ORACLE_LIMIT")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 62)
            return static_cast<int>(v);
    }
    return 20;
}

namespace {

void check_k(int k)
{
    if (k < 4)
        throw DomainError("k must be at least 4, got " + std::to_string(k));
}

} // namespace

Potential rho(const Graph& g, int k, const VertexSet& r)
{
    check_k(k);
    if (r.empty())
        throw DomainError("potential of the empty set is undefined");
    if (r[r.size() - 1] >= g.vertex_count() || r[0] < 0)
        throw DomainError("vertex set not contained in the graph");
    return potential_of(k, static_cast<std::int64_t>(r.size()), static_cast<std::int64_t>(g.induced_edge_count(r)));
}

PotentialWitness make_witness(const Graph& g, int k, VertexSet set)
{
    const Potential value = rho(g, k, set);
    return {std::move(set), value, k};
}

bool is_valid_failure_witness(const Graph& g, const PotentialWitness& w)
{
    if (w.set.empty() || w.k < 4 || w.set[w.set.size() - 1] >= g.vertex_count())
        return false;
    return rho(g, w.k, w.set) == w.rho && w.rho <= witness_threshold(w.k);
}

std::string_view to_string(R1Tag tag)
{
    switch (tag) {
    case R1Tag::S1: return "S1";
    case R1Tag::S2: return "S2";
    case R1Tag::S3: return "S3";
    case R1Tag::S4: return "S4";
    case R1Tag::S5: return "S5";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

namespace {

using Mask = std::uint64_t;

std::vector<Mask> adjacency_masks(const Graph& g)
{
    const int limit = oracle_limit();
    if (g.vertex_count() > limit)
        throw SizeLimitError("subset enumeration refuses n = " + std::to_string(g.vertex_count()) +
                             " (limit " + std::to_string(limit) + ")");
    std::vector<Mask> adj(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        adj[v] = g.row(v).empty() ? 0 : g.row(v)[0];
    return adj;
}

// Smaller set first, then the set whose lowest differing element it owns.
bool set_precedes(Mask a, Mask b)
{
    const int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb)
        return ca < cb;
    const Mask diff = a ^ b;
    return diff != 0 && (a & diff & (~diff + 1)) != 0;
}

struct Best {
    bool found = false;
    Potential value = 0;
    Mask set = 0;

    void offer(Potential v, Mask s)
    {
        if (!found || v < value || (v == value && set_precedes(s, set))) {
            found = true;
            value = v;
            set = s;
        }
    }
};

VertexSet to_set(Mask m)
{
    std::vector<Vertex> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return VertexSet(std::move(out));
}

// Visits every nonempty subset once (Gray-code order), maintaining |E(G[S])| incrementally.
template <class Visit>
void for_each_subset(const std::vector<Mask>& adj, Visit&& visit)
{
    const int n = static_cast<int>(adj.size());
    Mask cur = 0;
    int edges = 0;
    const Mask total = n == 0 ? 0 : (Mask{1} << n);
    for (Mask i = 1; i < total; ++i) {
        const int v = std::countr_zero(i);
        const Mask bit = Mask{1} << v;
        if (cur & bit) {
            cur ^= bit;
            edges -= std::popcount(adj[v] & cur);
        } else {
            edges += std::popcount(adj[v] & cur);
            cur ^= bit;
        }
        visit(cur, std::popcount(cur), edges);
    }
}

} // namespace

PotentialWitness brute_min_potential(const Graph& g, int k, bool restricted)
{
    check_k(k);
    const auto adj = adjacency_masks(g);
    const int n = g.vertex_count();
    Best best;
    for_each_subset(adj, [&](Mask s, int size, int edges) {
        if (restricted && (size < 2 || size > n - 1))
            return;
        best.offer(potential_of(k, size, edges), s);
    });
    if (!best.found)
        throw DomainError(restricted ? "no vertex set with 2 <= |W| <= n-1" : "graph has no vertices");
    return {to_set(best.set), best.value, k};
}

BruteClassification classify_brute(const Graph& g, int k)
{
    check_k(k);
    const auto adj = adjacency_masks(g);
    const int n = g.vertex_count();
    if (n == 0)
        throw DomainError("graph has no vertices");

    const Potential tight = clique_potential(k);
    Best all, restricted, big_tight;
    for_each_subset(adj, [&](Mask s, int size, int edges) {
        const Potential p = potential_of(k, size, edges);
        all.offer(p, s);
        if (size >= 2 && size <= n - 1) {
            restricted.offer(p, s);
            if (p == tight && size >= k)
                big_tight.offer(p, s);
        }
    });

    BruteClassification out;
    out.min_potential = all.value;
    if (restricted.found)
        out.restricted_minimum = restricted.value;

    if (all.value <= witness_threshold(k)) {
        out.tag = R1Tag::S1;
        out.witness = PotentialWitness{to_set(all.set), all.value, k};
    } else if (restricted.found && restricted.value < vertex_potential(k)) {
        out.tag = R1Tag::S2;
        out.witness = PotentialWitness{to_set(restricted.set), restricted.value, k};
    } else if (restricted.found && restricted.value < tight) {
        out.tag = R1Tag::S3;
        out.witness = PotentialWitness{to_set(restricted.set), restricted.value, k};
    } else if (restricted.found && restricted.value == tight && big_tight.found) {
        out.tag = R1Tag::S4;
        out.witness = PotentialWitness{to_set(big_tight.set), big_tight.value, k};
    } else {
        out.tag = R1Tag::S5;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Procedure R1

FlowNetwork build_R1_network(const Graph& g, int k, std::optional<Edge> e0, std::optional<Vertex> v0)
{
    check_k(k);
    if (e0.has_value() != v0.has_value())
        throw DomainError("e0 and v0 must be given together");
    const int n = g.vertex_count();
    const auto edges = g.edges();
    const int m = static_cast<int>(edges.size());
    if (e0) {
        if (*v0 < 0 || *v0 >= n)
            throw DomainError("v0 out of range");
        if (e0->incident(*v0))
            throw DomainError("v0 is an endpoint of e0");
        if (!g.adjacent(e0->u, e0->v))
            throw DomainError("e0 is not an edge of G");
    }

    const R1NodeLayout layout{n, m};
    const Capacity scale = 2 * static_cast<Capacity>(n);
    const bool pair = e0.has_value();
    const Capacity s_base = scale * (k + 1) * (k - 2) - (pair ? 1 : 0);
    const Capacity s_extra = scale * (2 * static_cast<Capacity>(k - 1) * (k - 2) + 1);
    const Capacity t_edge = scale * 2 * (k - 1);
    const Capacity t_e0 = scale * 2 * static_cast<Capacity>(k - 1) * (k - 1);

    Capacity source_total = s_base * n + (pair ? s_extra : 0);
    const Capacity infinity = source_total + 1;

    FlowNetwork net(n + m + 2, layout.source(), layout.sink());
    for (Vertex v = 0; v < n; ++v)
        net.add_arc(layout.source(), layout.vertex_node(v), s_base + (pair && v == *v0 ? s_extra : 0));
    for (int j = 0; j < m; ++j) {
        net.add_arc(layout.vertex_node(edges[j].u), layout.edge_node(j), infinity);
        net.add_arc(layout.vertex_node(edges[j].v), layout.edge_node(j), infinity);
        net.add_arc(layout.edge_node(j), layout.sink(), pair && edges[j] == *e0 ? t_e0 : t_edge);
    }
    return net;
}

namespace {

VertexSet sink_side_vertices(const CutResult& cut, int n)
{
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n; ++v)
        if (!cut.in_source_side(v))
            out.push_back(v);
    return VertexSet(std::move(out));
}

struct PairResult {
    Capacity value = 0;
    std::vector<bool> source_side;
};

struct Pair {
    Edge e0;
    Vertex v0;
};

} // namespace

R1Outcome procedure_R1(const Graph& g, int k, const R1Options& options)
{
    check_k(k);
    const int n = g.vertex_count();
    if (n == 0)
        throw DomainError("procedure R1 needs a nonempty graph");
    const auto edges = g.edges();
    const Capacity m = static_cast<Capacity>(edges.size());

    R1Outcome out;
    auto& audit = out.audit;
    audit.scale = 2 * static_cast<Capacity>(n);
    audit.base = audit.scale * 2 * (k - 1) * m;

    const VertexSet all = VertexSet::range(n);
    if (rho(g, k, all) <= witness_threshold(k)) {
        out.tag = R1Tag::S1;
        out.witness = make_witness(g, k, all);
        audit.direct_whole_graph = true;
        return out;
    }

    {
        const auto cut = max_flow(build_R1_network(g, k));
        audit.plain_flow = cut.flow_value;
        if (cut.flow_value < audit.base) {
            out.tag = R1Tag::S1;
            out.witness = make_witness(g, k, sink_side_vertices(cut, n));
            if (out.witness->rho >= 0)
                throw InternalError("R1: plain cut below 2(k-1)|E| but witness potential is nonnegative");
            return out;
        }
    }

    std::vector<Pair> pairs;
    for (const auto& e : edges)
        for (Vertex v = 0; v < n; ++v)
            if (!e.incident(v))
                pairs.push_back({e, v});
    if (pairs.empty()) {
        out.tag = R1Tag::S5;
        return out;
    }

    const Capacity s1_bound = audit.base + audit.scale * witness_threshold(k);

    // Each worker solves pairs in index order; `stop` marks the first index already certifying S1,
    // so every pair after it is irrelevant to the deterministic result.
    std::vector<std::optional<PairResult>> results(pairs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> stop{pairs.size()};
    auto worker = [&] {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= pairs.size() || idx > stop.load())
                return;
            auto cut = max_flow(build_R1_network(g, k, pairs[idx].e0, pairs[idx].v0));
            const Capacity value = cut.flow_value;
            results[idx] = PairResult{value, std::move(cut.source_side)};
            if (value <= s1_bound) {
                std::size_t cur = stop.load();
                while (idx < cur && !stop.compare_exchange_weak(cur, idx)) {
                }
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(pairs.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
    }

    const std::size_t last = std::min(stop.load(), pairs.size() - 1);
    std::size_t arg = pairs.size();
    for (std::size_t i = 0; i <= last; ++i) {
        if (!results[i])
            throw InternalError("R1: pair result missing");
        ++audit.pairs_solved;
        if (arg == pairs.size() || results[i]->value < results[arg]->value)
            arg = i;
    }

    const Capacity value = results[arg]->value;
    audit.min_pair_flow = value;
    audit.e0 = pairs[arg].e0;
    audit.v0 = pairs[arg].v0;

    const Capacity tight = clique_potential(k);
    if (value <= s1_bound)
        out.tag = R1Tag::S1;
    // A cut through W costs base + 2n*rho(W) - |W|, so rho(W) = (k+1)(k-2) lands just below
    // base + 2n(k+1)(k-2); the S2 band has to stop one potential unit lower.
    else if (value < audit.base + audit.scale * (vertex_potential(k) - 1))
        out.tag = R1Tag::S2;
    else if (value < audit.base + audit.scale * (tight - 1))
        out.tag = R1Tag::S3;
    else if (value < audit.base + audit.scale * tight - (k - 1))
        out.tag = R1Tag::S4;
    else
        out.tag = R1Tag::S5;

    if (out.tag != R1Tag::S5) {
        CutResult cut;
        cut.source_side = results[arg]->source_side;
        out.witness = make_witness(g, k, sink_side_vertices(cut, n));
        const auto& w = *out.witness;
        const bool proper_size = w.set.size() >= 2 && static_cast<int>(w.set.size()) <= n - 1;
        bool ok = true;
        switch (out.tag) {
        case R1Tag::S1: ok = w.rho <= witness_threshold(k); break;
        case R1Tag::S2: ok = proper_size && w.rho > witness_threshold(k) && w.rho < vertex_potential(k); break;
        case R1Tag::S3: ok = proper_size && w.rho < tight; break;
        case R1Tag::S4: ok = proper_size && w.rho == tight && static_cast<int>(w.set.size()) >= k; break;
        case R1Tag::S5: break;
        }
        if (!ok)
            throw InternalError("R1: " + std::string(to_string(out.tag)) + " witness has potential " +
                                std::to_string(w.rho) + " on " + std::to_string(w.set.size()) + " vertices");
    }
    return out;
}

} // namespace kcrit
