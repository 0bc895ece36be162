#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kcrit {

using Vertex = int;

/// Undirected edge, normalized so that u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    bool incident(Vertex w) const { return w == u || w == v; }
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<Vertex> members);
    VertexSet(std::initializer_list<Vertex> members) : VertexSet(std::vector<Vertex>(members)) {}

    static VertexSet range(int n);

    bool contains(Vertex v) const;
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    Vertex operator[](std::size_t i) const { return members_[i]; }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }
    const std::vector<Vertex>& members() const { return members_; }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::vector<Vertex> members_;
};

class GraphBuilder;

/// Finite simple undirected graph on vertices 0..n-1, stored as packed adjacency rows.
/// Immutable once built; derive new graphs through GraphBuilder or induced().
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, std::span<const Edge> edges);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return m_; }

    bool adjacent(Vertex u, Vertex v) const
    {
        return (bits_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1U;
    }
    int degree(Vertex v) const { return degree_[v]; }
    int min_degree() const;
    int max_degree() const;

    std::vector<Vertex> neighbors(Vertex v) const;
    std::span<const std::uint64_t> row(Vertex v) const
    {
        return {bits_.data() + static_cast<std::size_t>(v) * words_, static_cast<std::size_t>(words_)};
    }
    int words_per_row() const { return words_; }

    /// All edges in lexicographic (u, v) order.
    std::vector<Edge> edges() const;

    /// G[S], with vertices renumbered in ascending order of S.
    Graph induced(const VertexSet& s) const;
    /// |E(G[S])| without materializing the subgraph.
    std::size_t induced_edge_count(const VertexSet& s) const;

    /// Optional per-vertex labels, carried through parsers for round-tripping.
    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    friend class GraphBuilder;

    int n_ = 0;
    int words_ = 0;
    std::size_t m_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degree_;
    std::vector<std::string> labels_;
};

/// Mutable staging area for constructing a Graph.
class GraphBuilder {
public:
    explicit GraphBuilder(int n = 0);
    explicit GraphBuilder(const Graph& g);

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    Vertex add_vertex();

    /// Adds uv; a no-op when present. Self-loops and out-of-range indices throw DomainError.
    void add_edge(Vertex u, Vertex v);
    void remove_edge(Vertex u, Vertex v);
    /// Drops every edge at v; v stays as an isolated vertex.
    void isolate(Vertex v);
    bool adjacent(Vertex u, Vertex v) const;

    Graph build() const;

private:
    void check(Vertex v) const;
    std::vector<std::vector<bool>> adj_;
};

Graph complete_graph(int n);
Graph cycle_graph(int n);

/// Connected components, each sorted, listed by smallest member.
std::vector<VertexSet> components(const Graph& g);

/// Articulation points (DFS low-link).
VertexSet cut_vertices(const Graph& g);

/// N[u] == N[v].
bool same_closed_neighborhood(const Graph& g, Vertex u, Vertex v);

/// Number of unordered pairs {u, v} with N[u] == N[v].
std::size_t twin_pair_count(const Graph& g);

/// Maximal class of degree-(k-1) vertices sharing one closed neighborhood.
struct Cluster {
    VertexSet members;
    VertexSet common_closed_neighborhood;
};

/// Partition of the degree-(k-1) vertices into clusters, ordered by smallest member.
std::vector<Cluster> clusters(const Graph& g, int k);

/// Lexicographically first clique of the given size that contains v, if any.
std::optional<VertexSet> find_clique_of(const Graph& g, Vertex v, int size);

bool is_clique(const Graph& g, const VertexSet& s);
bool is_independent(const Graph& g, const VertexSet& s);

} // namespace kcrit
