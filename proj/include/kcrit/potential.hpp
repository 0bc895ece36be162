#pragma once

#include "kcrit/graph.hpp"
#include "kcrit/maxflow.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace kcrit {

using Potential = std::int64_t;

/// rho_k(R) = (k-2)(k+1)|R| - 2(k-1)|E(G[R])|, from counts.
constexpr Potential potential_of(int k, std::int64_t vertices, std::int64_t edges)
{
    return static_cast<Potential>(k - 2) * (k + 1) * vertices - static_cast<Potential>(2) * (k - 1) * edges;
}

/// k(k-3): the largest potential a failure certificate may carry.
constexpr Potential witness_threshold(int k) { return static_cast<Potential>(k) * (k - 3); }
/// Potential of a single vertex, (k-2)(k+1).
constexpr Potential vertex_potential(int k) { return static_cast<Potential>(k - 2) * (k + 1); }
/// Potential of K_{k-1}, 2(k-1)(k-2).
constexpr Potential clique_potential(int k) { return static_cast<Potential>(2) * (k - 1) * (k - 2); }

/// A nonempty vertex set together with its k-potential in the host graph.
struct PotentialWitness {
    VertexSet set;
    Potential rho = 0;
    int k = 0;
};

/// k-potential of a nonempty vertex subset. Empty R or k < 4 throws DomainError.
Potential rho(const Graph& g, int k, const VertexSet& r);

/// Builds a witness, recomputing rho from the host graph.
PotentialWitness make_witness(const Graph& g, int k, VertexSet set);

/// True when the witness recomputes to its stated rho and that rho is at most k(k-3).
bool is_valid_failure_witness(const Graph& g, const PotentialWitness& w);

/// Exhaustive minimum of rho over nonempty subsets (or over 2 <= |W| <= n-1 when `restricted`).
/// Ties go to the smaller set, then the lexicographically smaller one. Refuses n > oracle_limit().
PotentialWitness brute_min_potential(const Graph& g, int k, bool restricted);

enum class R1Tag { S1, S2, S3, S4, S5 };

std::string_view to_string(R1Tag tag);

/// Scaled flow values behind an R1 classification, all in units of 1/(2n).
struct R1Audit {
    Capacity scale = 0;           ///< 2n
    Capacity base = 0;            ///< 2n * 2(k-1)|E|
    Capacity plain_flow = 0;      ///< max flow of H
    std::optional<Capacity> min_pair_flow;  ///< M_k(G), when at least one (e0, v0) pair exists
    std::optional<Edge> e0;
    std::optional<Vertex> v0;
    std::size_t pairs_solved = 0;
    bool direct_whole_graph = false;  ///< rho(V) <= k(k-3) was detected before any flow
};

struct R1Outcome {
    R1Tag tag = R1Tag::S5;
    std::optional<PotentialWitness> witness;  ///< present for S1..S4
    R1Audit audit;
};

struct R1Options {
    /// Worker threads for the (e0, v0) sweep; results do not depend on this value.
    int jobs = 1;
};

/// Node layout of the R1 networks: vertex v is node v, the j-th edge in lexicographic order is
/// node n + j, the source is n + m and the sink n + m + 1.
struct R1NodeLayout {
    int n = 0;
    int m = 0;
    int vertex_node(Vertex v) const { return v; }
    int edge_node(int j) const { return n + j; }
    int source() const { return n + m; }
    int sink() const { return n + m + 1; }
};

/// The network H (no e0/v0) or H_{e0,v0}, with every capacity multiplied by 2n.
/// e0 and v0 must be given together and v0 must not be an endpoint of e0.
FlowNetwork build_R1_network(const Graph& g, int k, std::optional<Edge> e0 = std::nullopt,
                             std::optional<Vertex> v0 = std::nullopt);

/// Classifies G into outcomes S1..S5 using min cuts, extracting the sink-side vertex set as witness.
R1Outcome procedure_R1(const Graph& g, int k, const R1Options& options = {});

/// Independent classification by subset enumeration (n <= oracle_limit()).
struct BruteClassification {
    R1Tag tag = R1Tag::S5;
    Potential min_potential = 0;                  ///< P_k(G)
    std::optional<Potential> restricted_minimum;  ///< P~_k(G); absent when n <= 2
    std::optional<PotentialWitness> witness;      ///< S1: P_k minimizer; S2, S3: P~_k minimizer; S4: a tight set of size >= k
};

BruteClassification classify_brute(const Graph& g, int k);

} // namespace kcrit
