#pragma once

#include "kcrit/coloring.hpp"
#include "kcrit/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kcrit {

/// Exact chromatic number by saturation-order branch and bound (n <= oracle_limit()).
int chromatic_number(const Graph& g);

/// A proper coloring with colors 1..colors, or none; exact (n <= oracle_limit()).
std::optional<ColorAssignment> find_coloring(const Graph& g, int colors);

/// chi(G) = k, G has no isolated vertex (unless G = K_1, k = 1) and every G - e is (k-1)-colorable.
bool is_k_critical(const Graph& g, int k);

// Closed forms on edge counts of k-critical graphs. All require k >= 4 (DomainError otherwise).
std::int64_t F(int k, int n);                 ///< ceil(((k+1)(k-2)n - k(k-3)) / (2(k-1)))
std::int64_t gallai_exact(int k, int n);      ///< k+2 <= n <= 2k-1
std::int64_t dirac_lb(int k, int n);          ///< ceil(((k-1)n + k-3)/2)
std::int64_t ks_lb(int k, int n);             ///< ceil(((k-1)n + 2k-6)/2)
std::int64_t ore_upper_step(int k);           ///< (k-2)(k+1)/2
/// Upper bound on the minimum edge count from known values plus Hajós steps; none when n = k+1 or n < k.
std::optional<std::int64_t> ore_upper(int k, int n);

bool dirac_applies(int k, int n);  ///< n >= k+2
bool ks_applies(int k, int n);     ///< n >= k+2 and n != 2k-1

struct BoundReport {
    int k = 0;
    int n = 0;
    std::int64_t F = 0;
    std::optional<std::int64_t> gallai;
    std::int64_t dirac = 0;
    bool dirac_applies = false;
    std::int64_t kostochka_stiebitz = 0;
    bool ks_applies = false;
    std::optional<std::int64_t> ore_upper;
};

BoundReport bound_report(int k, int n);

/// Minimum-degree density k/2 - 1/(k-1) as an exact fraction (numerator, denominator).
std::pair<std::int64_t, std::int64_t> phi_k(int k);

/// Deletes uv from G1 and ab from G2, identifies u with a and adds vb. Vertices of G1 keep their
/// indices; G2's vertices other than a follow in order. Defaults: lexicographically first edges.
Graph hajos_join(const Graph& g1, const Graph& g2, std::optional<Edge> e1 = std::nullopt,
                 std::optional<Edge> e2 = std::nullopt);

/// K_k, then repeated Hajós joins with K_k; element t has k + t(k-1) vertices.
std::vector<Graph> iterate_ore_chain(int k, int steps);

struct CriticalSearchResult {
    enum class Status { found, inconclusive } status = Status::inconclusive;
    std::optional<Graph> graph;
    std::uint64_t candidates = 0;
    std::string description;
};

struct CriticalSearchOptions {
    std::uint64_t budget = 10'000'000;
    int max_removed = 3;  ///< edges deleted from the seed
    int max_added = 3;    ///< non-edges of the seed added
};

/// Looks for a k-critical graph with `vertices` vertices and `edges` edges obtained from an Ore-chain
/// member on vertices-1 vertices by deleting up to max_removed edges, adding a new vertex and adding up
/// to max_added edges. Only candidates with minimum degree >= k-1 reach the criticality test.
CriticalSearchResult search_critical(int k, int vertices, std::int64_t edges, const CriticalSearchOptions& options = {});

/// The odd wheel W_{2j+1}: hub 0 joined to the cycle 1..2j+1.
Graph odd_wheel(int rim);

/// K_j + H (every vertex of K_j joined to every vertex of H); K_j occupies indices 0..j-1.
Graph join_with_clique(int j, const Graph& h);

} // namespace kcrit
