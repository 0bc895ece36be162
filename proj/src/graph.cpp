#include "kcrit/graph.hpp"

#include "kcrit/error.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace kcrit {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members))
{
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet VertexSet::range(int n)
{
    std::vector<Vertex> all(std::max(n, 0));
    std::iota(all.begin(), all.end(), 0);
    return VertexSet(std::move(all));
}

bool VertexSet::contains(Vertex v) const
{
    return std::binary_search(members_.begin(), members_.end(), v);
}

Graph::Graph(int n) : n_(n), words_((n + 63) / 64), degree_(n, 0)
{
    if (n < 0)
        throw DomainError("negative vertex count");
    bits_.assign(static_cast<std::size_t>(n) * words_, 0);
}

Graph::Graph(int n, std::span<const Edge> edges) : Graph(n)
{
    for (const auto& e : edges) {
        if (e.u < 0 || e.v >= n)
            throw DomainError("edge endpoint out of range");
        if (e.u == e.v)
            throw DomainError("self-loop");
        auto& w = bits_[static_cast<std::size_t>(e.u) * words_ + (e.v >> 6)];
        const std::uint64_t mask = std::uint64_t{1} << (e.v & 63);
        if (w & mask)
            continue;
        w |= mask;
        bits_[static_cast<std::size_t>(e.v) * words_ + (e.u >> 6)] |= std::uint64_t{1} << (e.u & 63);
        ++degree_[e.u];
        ++degree_[e.v];
        ++m_;
    }
}

int Graph::min_degree() const
{
    return n_ == 0 ? 0 : *std::min_element(degree_.begin(), degree_.end());
}

int Graph::max_degree() const
{
    return n_ == 0 ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

std::vector<Vertex> Graph::neighbors(Vertex v) const
{
    std::vector<Vertex> out;
    out.reserve(degree_[v]);
    const auto r = row(v);
    for (int w = 0; w < words_; ++w) {
        std::uint64_t bits = r[w];
        while (bits) {
            out.push_back(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

std::vector<Edge> Graph::edges() const
{
    std::vector<Edge> out;
    out.reserve(m_);
    for (Vertex u = 0; u < n_; ++u)
        for (Vertex v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

Graph Graph::induced(const VertexSet& s) const
{
    std::vector<int> local(n_, -1);
    for (std::size_t i = 0; i < s.size(); ++i)
        local[s[i]] = static_cast<int>(i);
    std::vector<Edge> es;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (Vertex w : neighbors(s[i]))
            if (local[w] > static_cast<int>(i))
                es.emplace_back(static_cast<int>(i), local[w]);
    Graph out(static_cast<int>(s.size()), es);
    if (!labels_.empty()) {
        std::vector<std::string> ls;
        for (Vertex v : s)
            ls.push_back(labels_[v]);
        out.labels_ = std::move(ls);
    }
    return out;
}

std::size_t Graph::induced_edge_count(const VertexSet& s) const
{
    std::vector<std::uint64_t> mask(words_, 0);
    for (Vertex v : s)
        mask[v >> 6] |= std::uint64_t{1} << (v & 63);
    std::size_t twice = 0;
    for (Vertex v : s) {
        const auto r = row(v);
        for (int w = 0; w < words_; ++w)
            twice += std::popcount(r[w] & mask[w]);
    }
    return twice / 2;
}

void Graph::set_labels(std::vector<std::string> labels)
{
    if (!labels.empty() && static_cast<int>(labels.size()) != n_)
        throw DomainError("label count does not match vertex count");
    labels_ = std::move(labels);
}

GraphBuilder::GraphBuilder(int n)
{
    if (n < 0)
        throw DomainError("negative vertex count");
    adj_.assign(n, std::vector<bool>(n, false));
}

GraphBuilder::GraphBuilder(const Graph& g) : GraphBuilder(g.vertex_count())
{
    for (const auto& e : g.edges())
        add_edge(e.u, e.v);
}

Vertex GraphBuilder::add_vertex()
{
    for (auto& r : adj_)
        r.push_back(false);
    adj_.emplace_back(adj_.size() + 1, false);
    return static_cast<Vertex>(adj_.size() - 1);
}

void GraphBuilder::check(Vertex v) const
{
    if (v < 0 || v >= vertex_count())
        throw DomainError("vertex " + std::to_string(v) + " out of range");
}

void GraphBuilder::add_edge(Vertex u, Vertex v)
{
    check(u);
    check(v);
    if (u == v)
        throw DomainError("self-loop at vertex " + std::to_string(u));
    adj_[u][v] = adj_[v][u] = true;
}

void GraphBuilder::remove_edge(Vertex u, Vertex v)
{
    check(u);
    check(v);
    adj_[u][v] = adj_[v][u] = false;
}

void GraphBuilder::isolate(Vertex v)
{
    check(v);
    for (int w = 0; w < vertex_count(); ++w)
        adj_[v][w] = adj_[w][v] = false;
}

bool GraphBuilder::adjacent(Vertex u, Vertex v) const
{
    check(u);
    check(v);
    return adj_[u][v];
}

Graph GraphBuilder::build() const
{
    std::vector<Edge> es;
    const int n = vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (adj_[u][v])
                es.emplace_back(u, v);
    return Graph(n, es);
}

Graph complete_graph(int n)
{
    std::vector<Edge> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            es.emplace_back(u, v);
    return Graph(n, es);
}

Graph cycle_graph(int n)
{
    if (n < 3)
        throw DomainError("cycle needs at least 3 vertices");
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
        es.emplace_back(i, (i + 1) % n);
    return Graph(n, es);
}

std::vector<VertexSet> components(const Graph& g)
{
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    std::vector<VertexSet> out;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (comp[s] != -1)
            continue;
        const int id = static_cast<int>(out.size());
        std::vector<Vertex> members;
        comp[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (Vertex w : g.neighbors(v))
                if (comp[w] == -1) {
                    comp[w] = id;
                    stack.push_back(w);
                }
        }
        out.emplace_back(std::move(members));
    }
    return out;
}

VertexSet cut_vertices(const Graph& g)
{
    const int n = g.vertex_count();
    std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
    std::vector<bool> is_cut(n, false);
    std::vector<std::vector<Vertex>> adj(n);
    for (Vertex v = 0; v < n; ++v)
        adj[v] = g.neighbors(v);

    // Iterative DFS; `next` holds the position in each adjacency list.
    std::vector<std::size_t> next(n, 0);
    int timer = 0;
    for (Vertex root = 0; root < n; ++root) {
        if (disc[root] != -1)
            continue;
        int root_children = 0;
        std::vector<Vertex> stack{root};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            if (next[v] < adj[v].size()) {
                const Vertex w = adj[v][next[v]++];
                if (disc[w] == -1) {
                    parent[w] = v;
                    disc[w] = low[w] = timer++;
                    if (v == root)
                        ++root_children;
                    stack.push_back(w);
                } else if (w != parent[v]) {
                    low[v] = std::min(low[v], disc[w]);
                }
            } else {
                stack.pop_back();
                const Vertex p = parent[v];
                if (p != -1) {
                    low[p] = std::min(low[p], low[v]);
                    if (p != root && low[v] >= disc[p])
                        is_cut[p] = true;
                }
            }
        }
        if (root_children > 1)
            is_cut[root] = true;
    }
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n; ++v)
        if (is_cut[v])
            out.push_back(v);
    return VertexSet(std::move(out));
}

namespace {

std::vector<std::uint64_t> closed_row(const Graph& g, Vertex v)
{
    const auto r = g.row(v);
    std::vector<std::uint64_t> out(r.begin(), r.end());
    out[v >> 6] |= std::uint64_t{1} << (v & 63);
    return out;
}

} // namespace

bool same_closed_neighborhood(const Graph& g, Vertex u, Vertex v)
{
    if (u == v)
        return true;
    return g.adjacent(u, v) && closed_row(g, u) == closed_row(g, v);
}

std::size_t twin_pair_count(const Graph& g)
{
    std::map<std::vector<std::uint64_t>, std::size_t> classes;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        ++classes[closed_row(g, v)];
    std::size_t pairs = 0;
    for (const auto& [row, count] : classes)
        pairs += count * (count - 1) / 2;
    return pairs;
}

std::vector<Cluster> clusters(const Graph& g, int k)
{
    std::map<std::vector<std::uint64_t>, std::vector<Vertex>> classes;
    std::vector<std::vector<std::uint64_t>> order;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) != k - 1)
            continue;
        auto key = closed_row(g, v);
        auto [it, fresh] = classes.try_emplace(key);
        if (fresh)
            order.push_back(key);
        it->second.push_back(v);
    }
    std::vector<Cluster> out;
    for (const auto& key : order) {
        const auto& members = classes[key];
        auto closed = g.neighbors(members.front());
        closed.push_back(members.front());
        out.push_back({VertexSet(members), VertexSet(std::move(closed))});
    }
    return out;
}

namespace {

bool extend_clique(const Graph& g, const std::vector<Vertex>& candidates, std::size_t from, int need,
                   std::vector<Vertex>& chosen)
{
    if (need == 0)
        return true;
    for (std::size_t i = from; i + need <= candidates.size(); ++i) {
        const Vertex c = candidates[i];
        bool ok = true;
        for (Vertex x : chosen)
            if (!g.adjacent(x, c)) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        chosen.push_back(c);
        if (extend_clique(g, candidates, i + 1, need - 1, chosen))
            return true;
        chosen.pop_back();
    }
    return false;
}

} // namespace

std::optional<VertexSet> find_clique_of(const Graph& g, Vertex v, int size)
{
    if (size <= 0)
        return std::nullopt;
    if (size == 1)
        return VertexSet{v};
    if (g.degree(v) < size - 1)
        return std::nullopt;
    const auto nbrs = g.neighbors(v);
    // Grow a clique among N(v), lowest indices first, then place v.
    std::vector<Vertex> chosen;
    if (!extend_clique(g, nbrs, 0, size - 1, chosen))
        return std::nullopt;
    chosen.push_back(v);
    return VertexSet(std::move(chosen));
}

bool is_clique(const Graph& g, const VertexSet& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (!g.adjacent(s[i], s[j]))
                return false;
    return true;
}

bool is_independent(const Graph& g, const VertexSet& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (g.adjacent(s[i], s[j]))
                return false;
    return true;
}

} // namespace kcrit
