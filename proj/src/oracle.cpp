#include "kcrit/oracle.hpp"

#include "kcrit/config.hpp"
#include "kcrit/error.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace kcrit {

namespace {

using Mask = std::uint64_t;

void require_oracle_size(const Graph& g)
{
    const int limit = oracle_limit();
    if (g.vertex_count() > limit)
        throw SizeLimitError("exact coloring refuses n = " + std::to_string(g.vertex_count()) + " (limit " +
                             std::to_string(limit) + ")");
}

class Colorer {
public:
    Colorer(const Graph& g, int colors) : n_(g.vertex_count()), colors_(colors), adj_(n_), color_(n_, 0), class_(colors + 1, 0)
    {
        for (int v = 0; v < n_; ++v)
            adj_[v] = n_ == 0 ? 0 : g.row(v)[0];
    }

    bool solve() { return n_ == 0 || (colors_ >= 1 && search(0, 0)); }
    const std::vector<int>& colors() const { return color_; }

private:
    int saturation(int v) const
    {
        int s = 0;
        for (int c = 1; c <= colors_; ++c)
            s += (class_[c] & adj_[v]) != 0;
        return s;
    }

    bool search(int done, int used)
    {
        if (done == n_)
            return true;
        int pick = -1, best_sat = -1, best_deg = -1;
        for (int v = 0; v < n_; ++v) {
            if (color_[v])
                continue;
            const int sat = saturation(v);
            const int deg = std::popcount(adj_[v] & uncolored_mask());
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                pick = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        if (best_sat >= colors_)
            return false;
        // New colors are interchangeable: only the first unused one is tried.
        const int top = std::min(colors_, used + 1);
        for (int c = 1; c <= top; ++c) {
            if (class_[c] & adj_[pick])
                continue;
            color_[pick] = c;
            class_[c] |= Mask{1} << pick;
            if (search(done + 1, std::max(used, c)))
                return true;
            class_[c] &= ~(Mask{1} << pick);
            color_[pick] = 0;
        }
        return false;
    }

    Mask uncolored_mask() const
    {
        Mask m = 0;
        for (int v = 0; v < n_; ++v)
            if (!color_[v])
                m |= Mask{1} << v;
        return m;
    }

    int n_;
    int colors_;
    std::vector<Mask> adj_;
    std::vector<int> color_;
    std::vector<Mask> class_;
};

// Greedy clique for a lower bound.
int clique_lower_bound(const Graph& g)
{
    int best = g.vertex_count() > 0 ? 1 : 0;
    for (int s = 0; s < g.vertex_count(); ++s) {
        std::vector<Vertex> clique{s};
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (v != s && std::all_of(clique.begin(), clique.end(), [&](Vertex u) { return g.adjacent(u, v); }))
                clique.push_back(v);
        best = std::max(best, static_cast<int>(clique.size()));
    }
    return best;
}

} // namespace

std::optional<ColorAssignment> find_coloring(const Graph& g, int colors)
{
    require_oracle_size(g);
    Colorer c(g, std::max(colors, 0));
    if (!c.solve())
        return std::nullopt;
    ColorAssignment out(g.vertex_count());
    out.colors = c.colors();
    return out;
}

int chromatic_number(const Graph& g)
{
    require_oracle_size(g);
    if (g.vertex_count() == 0)
        return 0;
    for (int c = clique_lower_bound(g);; ++c)
        if (Colorer(g, c).solve())
            return c;
}

bool is_k_critical(const Graph& g, int k)
{
    require_oracle_size(g);
    if (k < 1)
        throw DomainError("k must be positive");
    if (k == 1)
        return g.vertex_count() == 1;
    if (g.vertex_count() == 0 || g.min_degree() == 0)
        return false;
    if (find_coloring(g, k - 1) || !find_coloring(g, k))
        return false;
    for (const auto& e : g.edges()) {
        GraphBuilder b(g);
        b.remove_edge(e.u, e.v);
        if (!find_coloring(b.build(), k - 1))
            return false;
    }
    return true;
}

namespace {

void check_k(int k)
{
    if (k < 4)
        throw DomainError("k must be at least 4, got " + std::to_string(k));
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b)
{
    // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

} // namespace

std::int64_t F(int k, int n)
{
    check_k(k);
    if (n < 0)
        throw DomainError("vertex count must be nonnegative");
    const std::int64_t num = static_cast<std::int64_t>(k + 1) * (k - 2) * n - static_cast<std::int64_t>(k) * (k - 3);
    return ceil_div(num, 2 * static_cast<std::int64_t>(k - 1));
}

std::int64_t gallai_exact(int k, int n)
{
    check_k(k);
    if (n < k + 2 || n > 2 * k - 1)
        throw DomainError("Gallai's formula needs k+2 <= n <= 2k-1, got k=" + std::to_string(k) + ", n=" +
                          std::to_string(n));
    const std::int64_t twice = static_cast<std::int64_t>(k - 1) * n + static_cast<std::int64_t>(n - k) * (2 * k - n);
    if (twice % 2 != 0)
        throw InternalError("Gallai expression is odd");
    return twice / 2 - 1;
}

std::int64_t dirac_lb(int k, int n)
{
    check_k(k);
    return ceil_div(static_cast<std::int64_t>(k - 1) * n + k - 3, 2);
}

std::int64_t ks_lb(int k, int n)
{
    check_k(k);
    return ceil_div(static_cast<std::int64_t>(k - 1) * n + 2 * k - 6, 2);
}

std::int64_t ore_upper_step(int k)
{
    check_k(k);
    return static_cast<std::int64_t>(k - 2) * (k + 1) / 2;
}

bool dirac_applies(int k, int n) { return n >= k + 2; }
bool ks_applies(int k, int n) { return n >= k + 2 && n != 2 * k - 1; }

std::optional<std::int64_t> ore_upper(int k, int n)
{
    check_k(k);
    if (n == k)
        return static_cast<std::int64_t>(k) * (k - 1) / 2;
    if (n < k + 2)
        return std::nullopt;
    // Residues mod k-1 are covered by k+2..2k exactly once.
    int n0 = n;
    while (n0 > 2 * k)
        n0 -= k - 1;
    const std::int64_t base = n0 == 2 * k ? static_cast<std::int64_t>(k) * k - 3 : gallai_exact(k, n0);
    return base + static_cast<std::int64_t>((n - n0) / (k - 1)) * ore_upper_step(k);
}

BoundReport bound_report(int k, int n)
{
    BoundReport r;
    r.k = k;
    r.n = n;
    r.F = F(k, n);
    if (n >= k + 2 && n <= 2 * k - 1)
        r.gallai = gallai_exact(k, n);
    r.dirac = dirac_lb(k, n);
    r.dirac_applies = dirac_applies(k, n);
    r.kostochka_stiebitz = ks_lb(k, n);
    r.ks_applies = ks_applies(k, n);
    r.ore_upper = ore_upper(k, n);
    return r;
}

std::pair<std::int64_t, std::int64_t> phi_k(int k)
{
    check_k(k);
    // k/2 - 1/(k-1) = (k(k-1) - 2) / (2(k-1))
    std::int64_t num = static_cast<std::int64_t>(k) * (k - 1) - 2;
    std::int64_t den = 2 * static_cast<std::int64_t>(k - 1);
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

Graph hajos_join(const Graph& g1, const Graph& g2, std::optional<Edge> e1, std::optional<Edge> e2)
{
    if (!e1) {
        if (g1.edge_count() == 0)
            throw DomainError("first operand has no edge");
        e1 = g1.edges().front();
    }
    if (!e2) {
        if (g2.edge_count() == 0)
            throw DomainError("second operand has no edge");
        e2 = g2.edges().front();
    }
    if (e1->v >= g1.vertex_count() || !g1.adjacent(e1->u, e1->v))
        throw DomainError("e1 is not an edge of G1");
    if (e2->v >= g2.vertex_count() || !g2.adjacent(e2->u, e2->v))
        throw DomainError("e2 is not an edge of G2");

    const int n1 = g1.vertex_count();
    const Vertex a = e2->u, b = e2->v;
    std::vector<Vertex> map(g2.vertex_count());
    int next = n1;
    for (Vertex x = 0; x < g2.vertex_count(); ++x)
        map[x] = x == a ? e1->u : next++;

    GraphBuilder out(next);
    for (const auto& e : g1.edges())
        if (e != *e1)
            out.add_edge(e.u, e.v);
    for (const auto& e : g2.edges())
        if (e != *e2)
            out.add_edge(map[e.u], map[e.v]);
    out.add_edge(e1->v, map[b]);
    return out.build();
}

std::vector<Graph> iterate_ore_chain(int k, int steps)
{
    check_k(k);
    if (steps < 0)
        throw DomainError("steps must be nonnegative");
    std::vector<Graph> chain{complete_graph(k)};
    for (int t = 0; t < steps; ++t)
        chain.push_back(hajos_join(chain.back(), complete_graph(k)));
    return chain;
}

Graph odd_wheel(int rim)
{
    if (rim < 3 || rim % 2 == 0)
        throw DomainError("odd wheel needs an odd rim of length >= 3");
    GraphBuilder b(rim + 1);
    for (int i = 1; i <= rim; ++i) {
        b.add_edge(0, i);
        b.add_edge(i, i % rim + 1);
    }
    return b.build();
}

Graph join_with_clique(int j, const Graph& h)
{
    GraphBuilder b(j + h.vertex_count());
    for (int u = 0; u < j; ++u) {
        for (int v = u + 1; v < j; ++v)
            b.add_edge(u, v);
        for (int v = 0; v < h.vertex_count(); ++v)
            b.add_edge(u, j + v);
    }
    for (const auto& e : h.edges())
        b.add_edge(j + e.u, j + e.v);
    return b.build();
}

namespace {

// Visits the r-subsets of 0..n-1 in lexicographic order; stops when `f` returns false.
template <class F>
bool for_each_combination(int n, int r, F&& f)
{
    if (r > n)
        return true;
    std::vector<int> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (!f(idx))
            return false;
        int i = r - 1;
        while (i >= 0 && idx[i] == n - r + i)
            --i;
        if (i < 0)
            return true;
        ++idx[i];
        for (int j = i + 1; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

CriticalSearchResult search_critical(int k, int vertices, std::int64_t edges, const CriticalSearchOptions& options)
{
    check_k(k);
    CriticalSearchResult result;
    const auto chain = iterate_ore_chain(k, std::max(0, (vertices - 1 - k) / (k - 1)) + 1);
    const Graph* seed = nullptr;
    for (const auto& g : chain)
        if (g.vertex_count() == vertices - 1)
            seed = &g;
    if (!seed) {
        result.description = "no Ore-chain member on " + std::to_string(vertices - 1) + " vertices";
        return result;
    }
    const int n0 = seed->vertex_count();
    const auto seed_edges = seed->edges();
    std::vector<Edge> non_edges;
    for (Vertex u = 0; u < n0; ++u)
        for (Vertex v = u + 1; v < n0; ++v)
            if (!seed->adjacent(u, v))
                non_edges.push_back({u, v});
    const auto m0 = static_cast<std::int64_t>(seed_edges.size());

    bool stop = false;
    for (int r = 0; r <= options.max_removed && !stop; ++r)
        for (int a = 0; a <= options.max_added && !stop; ++a) {
            const std::int64_t d = edges - (m0 - r + a);
            if (d < k - 1 || d > n0)
                continue;
            for_each_combination(static_cast<int>(seed_edges.size()), r, [&](const std::vector<int>& del) {
                return for_each_combination(static_cast<int>(non_edges.size()), a, [&](const std::vector<int>& add) {
                    GraphBuilder base(*seed);
                    for (int i : del)
                        base.remove_edge(seed_edges[i].u, seed_edges[i].v);
                    for (int i : add)
                        base.add_edge(non_edges[i].u, non_edges[i].v);
                    const Vertex x = base.add_vertex();
                    return for_each_combination(n0, static_cast<int>(d), [&](const std::vector<int>& nb) {
                        if (result.candidates >= options.budget) {
                            stop = true;
                            return false;
                        }
                        ++result.candidates;
                        GraphBuilder cand = base;
                        for (int v : nb)
                            cand.add_edge(x, v);
                        const Graph g = cand.build();
                        if (g.min_degree() < k - 1 || !is_k_critical(g, k))
                            return true;
                        result.status = CriticalSearchResult::Status::found;
                        result.graph = g;
                        result.description = "seed n=" + std::to_string(n0) + ", removed " + std::to_string(r) +
                                             ", added " + std::to_string(a) + ", new vertex degree " + std::to_string(d);
                        stop = true;
                        return false;
                    });
                });
            });
        }
    if (result.status == CriticalSearchResult::Status::inconclusive && result.description.empty())
        result.description = "budget " + (stop ? std::string("exhausted") : std::string("not exhausted; neighbourhood searched")) +
                             " after " + std::to_string(result.candidates) + " candidates";
    return result;
}

} // namespace kcrit
