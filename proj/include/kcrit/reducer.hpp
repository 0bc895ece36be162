#pragma once

#include "kcrit/coloring.hpp"
#include "kcrit/graph.hpp"
#include "kcrit/potential.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kcrit {

struct TraceEntry {
    int depth = 0;
    std::string step;   ///< "base", "1.peel", "1.components", "1.cut", "2", "3", "4", "5.1", ... "7", "fallback"
    int vertices = 0;
    std::size_t edges = 0;
    std::size_t twin_pairs = 0;  ///< same-closed-neighborhood pairs of the graph the step ran on
    std::string action;
};

/// Ordered (pre-order) record of fired steps, filled only when tracing is requested. Entries at
/// depth d+1 following an entry at depth d belong to calls made by that step.
struct ReductionTrace {
    std::vector<TraceEntry> entries;
};

struct ReducerStats {
    std::uint64_t calls = 0;            ///< recursive calls past the degenerate base case
    std::uint64_t base_cases = 0;
    std::uint64_t fallbacks = 0;        ///< exact-oracle resolutions
    std::uint64_t failed_rules = 0;     ///< modified-graph rules abandoned because an inner witness did not lift
    std::uint64_t skipped_rules = 0;    ///< rules skipped because the reduced graph was not smaller
    int max_depth = 0;
    std::map<std::string, std::uint64_t> steps;  ///< fired step -> count
};

struct ReducerOptions {
    int jobs = 1;                 ///< forwarded to procedure R1
    bool trace = false;
    bool exact_fallback = true;   ///< resolve otherwise-stuck instances with the exact oracle when n <= oracle_limit()
};

using ColoringResult = std::variant<ColorAssignment, PotentialWitness>;

struct ColoringOutcome {
    ColoringResult result;
    ReducerStats stats;
    ReductionTrace trace;

    bool is_coloring() const { return std::holds_alternative<ColorAssignment>(result); }
    const ColorAssignment& coloring() const { return std::get<ColorAssignment>(result); }
    const PotentialWitness& witness() const { return std::get<PotentialWitness>(result); }
};

/// Either a proper (k-1)-coloring of G or a nonempty W with rho_k(W) <= k(k-3). Both outputs are
/// validated before returning. Throws Error with a diagnostic when no step applies and the exact
/// fallback is unavailable.
ColoringOutcome color_or_witness(const Graph& g, int k, const ReducerOptions& options = {});

/// Y(G, R, phi): vertices 0..n-|R|-1 are V(G)-R in ascending order, followed by x_1..x_{k-1}.
/// phi must be a proper (k-1)-coloring of G[R] indexed by position in R. R = V(G) yields K_{k-1}.
Graph y_gadget(const Graph& g, const VertexSet& r, const ColorAssignment& phi, int k);

/// Weighted vertex (vertex, weight >= 1).
using WeightedSet = std::vector<std::pair<Vertex, int>>;

/// At most i edges on the weighted vertices such that every independent set M with |M| >= 2 leaves
/// weight at least i outside M. Requires 1 <= i <= (k-1)/2 and total weight >= k-1.
std::vector<Edge> lemma4_edges(const WeightedSet& w, int i, int k);

/// The i with 1 + k(k-3) + 2i(k-1) <= rho <= k(k-3) + 2(i+1)(k-1), for k(k-3) < rho <= 2(k-1)(k-2).
/// Returns 0 when rho <= (k+1)(k-2), where no edges are needed.
int choose_i(Potential rho_r, int k);

/// Outcome of steps 3/4 on a caller-supplied R (2 <= |R| <= n-1): recursive coloring of G[R], plus
/// the lemma4_edges additions when i is given, then of the Y-gadget, merged into a coloring of G.
ColoringOutcome collapse_and_recurse(const Graph& g, int k, const VertexSet& r, std::optional<int> i,
                                     const ReducerOptions& options = {});

/// The low/high classes used by step 7 and the residual of the peel.
struct Step7Partition {
    VertexSet low;     ///< L0: degree k-1, every neighbor of degree >= k
    VertexSet high;    ///< H0: degree exactly k
    std::int64_t e0 = 0;          ///< |E(L0, H0)|
    bool dense = false;           ///< e0 >= 2(|L0| + |H0|) and e0 > 0
    VertexSet residual_low;       ///< survivors of the peel, each with >= 3 surviving H0-neighbors
    VertexSet residual_high;      ///< survivors of the peel, each with >= 3 surviving L0-neighbors
    VertexSet residual() const;
};

Step7Partition step7_partition(const Graph& g, int k);

/// `partial` must color every vertex outside the peel residual with 1..k-1. The residual is then
/// list-colored through the split-matching orientation and kernels. With an empty residual the
/// partial coloring is returned as is.
ColorAssignment step7_peel_and_color(const Graph& g, int k, const ColorAssignment& partial);

/// Colors G with colors from a coloring of G[R] and one of G - R when few edges cross: the second
/// side's colors are permuted to avoid every crossing conflict. Requires e(R, V-R) <= palette - 1.
ColorAssignment combine_across_small_cut(const Graph& g, const VertexSet& r, const ColorAssignment& inside,
                                         const ColorAssignment& outside, int palette);

} // namespace kcrit
