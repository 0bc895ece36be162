#pragma once

#include "kcrit/coloring.hpp"
#include "kcrit/error.hpp"
#include "kcrit/graph.hpp"

#include <utility>
#include <vector>

namespace kcrit {

/// Loopless digraph; a bidirected pair is stored as two opposite arcs.
class Digraph {
public:
    explicit Digraph(int n = 0);

    int node_count() const { return static_cast<int>(out_.size()); }
    /// Adds tail->head (no-op when present). Self-arcs and out-of-range nodes throw DomainError.
    void add_arc(int tail, int head);
    void add_bidirected(int a, int b);

    bool has_arc(int tail, int head) const;
    /// Joined by an arc in either direction.
    bool adjacent(int a, int b) const { return has_arc(a, b) || has_arc(b, a); }
    bool bidirected(int a, int b) const { return has_arc(a, b) && has_arc(b, a); }

    const std::vector<int>& out(int v) const { return out_[v]; }
    const std::vector<int>& in(int v) const { return in_[v]; }
    int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
    std::size_t arc_count() const;

    /// D[S], nodes renumbered in ascending order of S.
    Digraph induced(const VertexSet& s) const;

private:
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

/// Per-node admissible colors (each list sorted, duplicate-free, positive).
using ListAssignment = std::vector<std::vector<Color>>;

/// Kernel of D[A ∪ B] for the shape where A is independent and every arc inside B is bidirected.
/// Returned set is independent and every other node of A ∪ B has an out-neighbor in it.
VertexSet find_kernel(const Digraph& d, const VertexSet& a, const VertexSet& b);

/// A set F independent in D[S] such that every node of S − F has an out-neighbor in F.
bool is_kernel(const Digraph& d, const VertexSet& s, const VertexSet& f);

/// Lists must satisfy |L(v)| >= 1 + d+(v); the (independent side, bidirected side) partition is
/// recovered from the arcs. The result uses only list colors and has no monochromatic arc.
ColorAssignment list_color_via_kernels(const Digraph& d, const ListAssignment& lists);

/// Raised when no matching of the split graph covers A; `violator` ⊆ A has fewer split neighbours.
class HallViolation : public DomainError {
public:
    HallViolation(const std::string& what, VertexSet violator, std::size_t neighbourhood)
        : DomainError(what), violator_(std::move(violator)), neighbourhood_(neighbourhood) {}
    const VertexSet& violator() const { return violator_; }
    std::size_t neighbourhood_size() const { return neighbourhood_; }

private:
    VertexSet violator_;
    std::size_t neighbourhood_;
};

/// (a, b) pairs with a ∈ A, b ∈ B.
using Matching = std::vector<std::pair<Vertex, Vertex>>;

/// Splits each b ∈ B into ceil(d_AB(b)/cap) copies of degree <= cap and returns a matching
/// covering A, projected back to B (a vertex b may appear up to ceil(d_AB(b)/cap) times).
Matching split_and_match(const Graph& g, const VertexSet& a, const VertexSet& b, int cap);

/// M must hold each a ∈ A exactly once (B vertices may repeat, as copies of a split vertex).
/// Orientation of G' = G[A ∪ B] (A ∪ B must be all of V(G')): A- or B-internal edges become
/// bidirected pairs, matched edges point b->a, the remaining A-B edges point a->b.
Digraph orient_AB(const Graph& g, const VertexSet& a, const VertexSet& b, const Matching& m);

} // namespace kcrit
