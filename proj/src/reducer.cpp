#include "kcrit/reducer.hpp"

#include "kcrit/config.hpp"
#include "kcrit/error.hpp"
#include "kcrit/kernel.hpp"
#include "kcrit/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

namespace kcrit {

namespace {

// Recursive calls must strictly decrease (|E|, -twin pairs, |V|) lexicographically.
using Measure = std::tuple<std::size_t, std::int64_t, int>;

Measure measure_of(const Graph& g)
{
    return {g.edge_count(), -static_cast<std::int64_t>(twin_pair_count(g)), g.vertex_count()};
}

VertexSet complement(int n, const VertexSet& s)
{
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n; ++v)
        if (!s.contains(v))
            out.push_back(v);
    return VertexSet(std::move(out));
}

VertexSet set_union(const VertexSet& a, const VertexSet& b)
{
    std::vector<Vertex> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return VertexSet(std::move(out));
}

// Copies a coloring of G[S] (indexed by position in S) onto the members of S.
void scatter(ColorAssignment& dst, const VertexSet& s, const ColorAssignment& src)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        dst[s[i]] = src[static_cast<Vertex>(i)];
}

VertexSet map_positions(const VertexSet& s, const VertexSet& positions)
{
    std::vector<Vertex> out;
    out.reserve(positions.size());
    for (Vertex p : positions)
        out.push_back(s[p]);
    return VertexSet(std::move(out));
}

// Backtracking completion of a handful of uncolored vertices.
bool complete_small(const Graph& g, ColorAssignment& c, const std::vector<Vertex>& verts, std::size_t at, int palette)
{
    if (at == verts.size())
        return true;
    const Vertex v = verts[at];
    for (Color col = 1; col <= palette; ++col) {
        bool ok = true;
        for (Vertex u : g.neighbors(v))
            if (c[u] == col) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        c[v] = col;
        if (complete_small(g, c, verts, at + 1, palette))
            return true;
    }
    c[v] = kUncolored;
    return false;
}

Color smallest_missing(const std::vector<Color>& used, int palette)
{
    for (Color col = 1; col <= palette; ++col)
        if (std::find(used.begin(), used.end(), col) == used.end())
            return col;
    return kUncolored;
}

// A graph derived from G by a local rewrite, plus what is needed to translate results back.
struct Rewrite {
    const char* step = "";
    std::string action;
    Graph reduced;
    std::vector<std::vector<Vertex>> image;  // reduced vertex -> vertices of G it stands for
    std::vector<Vertex> extras;              // G vertices tried on top of a mapped witness
    std::function<ColorAssignment(const ColorAssignment&)> lift;
};

// Deletes `removed` from a staged graph; image maps survivors back to their G indices.
void finish_by_removal(Rewrite& rw, const GraphBuilder& b, const VertexSet& removed)
{
    const Graph staged = b.build();
    const VertexSet kept = complement(staged.vertex_count(), removed);
    rw.reduced = staged.induced(kept);
    rw.image.assign(kept.size(), {});
    for (std::size_t i = 0; i < kept.size(); ++i)
        rw.image[i] = {kept[i]};
}

// Colors of the survivors of a removal rewrite, placed at their G indices.
ColorAssignment expand_kept(int n, const VertexSet& removed, const ColorAssignment& reduced)
{
    ColorAssignment c(n);
    scatter(c, complement(n, removed), reduced);
    return c;
}

class Reducer {
public:
    Reducer(int k, const ReducerOptions& options, ReducerStats& stats, ReductionTrace& trace, int depth_cap)
        : k_(k), palette_(k - 1), options_(options), stats_(stats), trace_(trace), depth_cap_(depth_cap)
    {
    }

    ColoringResult solve(const Graph& g, int depth)
    {
        if (depth > depth_cap_)
            throw InternalError("recursion depth exceeded " + std::to_string(depth_cap_));
        stats_.max_depth = std::max(stats_.max_depth, depth);
        const int n = g.vertex_count();
        if (n == 0)
            return ColorAssignment(0);

        if (2 * g.edge_count() <= static_cast<std::size_t>(k_) * k_)
            if (auto r = base_case(g, depth))
                return *r;

        ++stats_.calls;
        if (auto r = step1(g, depth))
            return *r;

        const R1Outcome r1 = procedure_R1(g, k_, R1Options{options_.jobs});
        switch (r1.tag) {
        case R1Tag::S1:
            note(depth, "2", g, "S1: witness of potential " + std::to_string(r1.witness->rho));
            return *r1.witness;
        case R1Tag::S2:
            if (auto r = collapse(g, r1.witness->set, 0, "3", depth))
                return *r;
            return fallback(g, depth, "collapse of an S2 set did not resolve");
        case R1Tag::S3:
        case R1Tag::S4: {
            const int i = choose_i(r1.witness->rho, k_);
            if (auto r = collapse(g, r1.witness->set, i, "4", depth))
                return *r;
            return fallback(g, depth, "collapse of an S3/S4 set did not resolve");
        }
        case R1Tag::S5:
            break;
        }

        for (auto rule : {&Reducer::step51, &Reducer::step52, &Reducer::step53, &Reducer::small_k_extras,
                          &Reducer::step61, &Reducer::step62, &Reducer::step7})
            if (auto r = (this->*rule)(g, depth))
                return *r;
        return fallback(g, depth, "no step applies");
    }

private:
    Potential threshold() const { return witness_threshold(k_); }

    void note(int depth, const char* step, const Graph& g, std::string action)
    {
        ++stats_.steps[step];
        if (options_.trace)
            trace_.entries.push_back(
                {depth, step, g.vertex_count(), g.edge_count(), twin_pair_count(g), std::move(action)});
    }

    // ---- base case: at most k^2/2 edges ----------------------------------------------------

    struct Peel {
        std::vector<Vertex> order;  // removal order
        VertexSet core;
    };

    Peel peel(const Graph& g) const
    {
        const int n = g.vertex_count();
        std::vector<int> deg(n);
        std::vector<bool> gone(n, false);
        std::vector<Vertex> stack;
        for (Vertex v = 0; v < n; ++v) {
            deg[v] = g.degree(v);
            if (deg[v] <= k_ - 2) {
                gone[v] = true;
                stack.push_back(v);
            }
        }
        Peel p;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            p.order.push_back(v);
            for (Vertex u : g.neighbors(v))
                if (!gone[u] && --deg[u] <= k_ - 2) {
                    gone[u] = true;
                    stack.push_back(u);
                }
        }
        std::vector<Vertex> core;
        for (Vertex v = 0; v < n; ++v)
            if (!gone[v])
                core.push_back(v);
        p.core = VertexSet(std::move(core));
        return p;
    }

    // Peeled vertices had at most k-2 later neighbors, so the reverse order colors greedily.
    void color_peeled(const Graph& g, ColorAssignment& c, const Peel& p) const
    {
        std::vector<Vertex> order(p.order.rbegin(), p.order.rend());
        if (!greedy_extend(g, c, order, palette_))
            throw InternalError("greedy extension over a (k-2)-degenerate part failed");
    }

    std::optional<ColoringResult> base_case(const Graph& g, int depth)
    {
        const Peel p = peel(g);
        ColorAssignment c(g.vertex_count());
        const Graph core = g.induced(p.core);
        const int s = core.vertex_count();
        if (s == k_ && core.edge_count() == static_cast<std::size_t>(k_) * (k_ - 1) / 2) {
            ++stats_.base_cases;
            note(depth, "base", g, "K_k core");
            return make_witness(g, k_, p.core);
        }
        if (s == k_ + 1 && core.min_degree() >= k_ - 1) {
            // K_{k+1} minus a matching of size >= 2: matched pairs share a color.
            Color next = 1;
            std::vector<Color> local(s, kUncolored);
            for (Vertex v = 0; v < s; ++v) {
                if (local[v] != kUncolored)
                    continue;
                local[v] = next;
                for (Vertex u = v + 1; u < s; ++u)
                    if (!core.adjacent(u, v) && local[u] == kUncolored) {
                        local[u] = next;
                        break;
                    }
                ++next;
            }
            if (next - 1 > palette_)
                return std::nullopt;
            for (Vertex v = 0; v < s; ++v)
                c[p.core[v]] = local[v];
        } else if (s != 0) {
            return std::nullopt;
        }
        color_peeled(g, c, p);
        ++stats_.base_cases;
        note(depth, "base", g, s == 0 ? "degenerate" : "K_{k+1} minus a matching core");
        return c;
    }

    // ---- step 1: low degree, disconnected, cut vertex --------------------------------------

    ColoringResult solve_induced(const Graph& g, const VertexSet& s, int depth, ColorAssignment& into, bool& is_witness,
                                 PotentialWitness& witness)
    {
        ColoringResult r = solve(g.induced(s), depth + 1);
        if (auto* w = std::get_if<PotentialWitness>(&r)) {
            is_witness = true;
            witness = make_witness(g, k_, map_positions(s, w->set));
        } else {
            scatter(into, s, std::get<ColorAssignment>(r));
        }
        return r;
    }

    std::optional<ColoringResult> step1(const Graph& g, int depth)
    {
        const int n = g.vertex_count();
        ColorAssignment c(n);
        bool is_witness = false;
        PotentialWitness w;

        const Peel p = peel(g);
        if (p.core.size() < static_cast<std::size_t>(n)) {
            note(depth, "1.peel", g, "removed " + std::to_string(p.order.size()) + " vertices of degree <= k-2");
            if (!p.core.empty()) {
                solve_induced(g, p.core, depth, c, is_witness, w);
                if (is_witness)
                    return w;
            }
            color_peeled(g, c, p);
            return c;
        }

        const auto comps = components(g);
        if (comps.size() > 1) {
            note(depth, "1.components", g, std::to_string(comps.size()) + " components");
            for (const auto& comp : comps) {
                solve_induced(g, comp, depth, c, is_witness, w);
                if (is_witness)
                    return w;
            }
            return c;
        }

        const VertexSet cuts = cut_vertices(g);
        if (!cuts.empty()) {
            const Vertex cv = cuts[0];
            const VertexSet rest = complement(n, VertexSet{cv});
            const auto parts = components(g.induced(rest));
            const VertexSet first = map_positions(rest, parts.front());
            const VertexSet side1 = set_union(first, VertexSet{cv});
            const VertexSet side2 = complement(n, first);
            note(depth, "1.cut", g, "cut vertex " + std::to_string(cv));
            ColorAssignment c1(n), c2(n);
            solve_induced(g, side1, depth, c1, is_witness, w);
            if (is_witness)
                return w;
            solve_induced(g, side2, depth, c2, is_witness, w);
            if (is_witness)
                return w;
            // Swap two colors on side 2 so the cut vertex agrees.
            const Color want = c1[cv], have = c2[cv];
            for (Vertex v : side2) {
                Color col = c2[v];
                if (col == have)
                    col = want;
                else if (col == want)
                    col = have;
                c1[v] = col;
            }
            return c1;
        }
        return std::nullopt;
    }

public:
    // ---- steps 3 and 4: collapse a low-potential set R --------------------------------------

    // `require_smaller` guards the recursion; a direct caller may collapse a set (such as a
    // K_{k-1}) whose gadget is no smaller than G, since solve() never picks one itself.
    std::optional<ColoringResult> collapse(const Graph& g, const VertexSet& r, int i, const char* step, int depth,
                                           bool require_smaller = true)
    {
        const int n = g.vertex_count();
        const VertexSet outside = complement(n, r);
        std::size_t crossing = 0;
        std::vector<int> weight(r.size(), 0);
        for (std::size_t p = 0; p < r.size(); ++p)
            for (Vertex u : g.neighbors(r[p]))
                if (!r.contains(u)) {
                    ++weight[p];
                    ++crossing;
                }

        ColorAssignment inside_col;
        bool is_witness = false;
        PotentialWitness w;

        if (crossing <= static_cast<std::size_t>(k_ - 2)) {
            note(depth, step, g, "R of size " + std::to_string(r.size()) + " behind a cut of " +
                                     std::to_string(crossing) + " edges");
            ColorAssignment c(n);
            solve_induced(g, r, depth, c, is_witness, w);
            if (is_witness)
                return w;
            solve_induced(g, outside, depth, c, is_witness, w);
            if (is_witness)
                return w;
            ColorAssignment a(static_cast<int>(r.size())), b(static_cast<int>(outside.size()));
            for (std::size_t p = 0; p < r.size(); ++p)
                a[static_cast<Vertex>(p)] = c[r[p]];
            for (std::size_t p = 0; p < outside.size(); ++p)
                b[static_cast<Vertex>(p)] = c[outside[p]];
            return combine_across_small_cut(g, r, a, b, palette_);
        }

        // Color G[R], with the lemma4_edges set E0 added when i > 0.
        Graph h = g.induced(r);
        if (i > 0) {
            WeightedSet ws;
            for (std::size_t p = 0; p < r.size(); ++p)
                if (weight[p] > 0)
                    ws.emplace_back(static_cast<Vertex>(p), weight[p]);
            GraphBuilder b(h);
            for (const Edge& e : lemma4_edges(ws, i, k_))
                b.add_edge(e.u, e.v);
            h = b.build();
        }
        note(depth, step, g, "R of size " + std::to_string(r.size()) + ", i = " + std::to_string(i));
        if (require_smaller && !(measure_of(h) < measure_of(g))) {
            ++stats_.skipped_rules;
            return std::nullopt;
        }
        ColoringResult hr = solve(h, depth + 1);
        if (auto* hw = std::get_if<PotentialWitness>(&hr)) {
            PotentialWitness mapped = make_witness(g, k_, map_positions(r, hw->set));
            if (mapped.rho <= threshold())
                return mapped;
            ++stats_.failed_rules;
            note(depth, step, g, "abandoned: witness of G[R]+E0 does not lift");
            return std::nullopt;
        }
        inside_col = std::get<ColorAssignment>(hr);

        const Graph y = y_gadget(g, r, inside_col, k_);
        if (require_smaller && !(measure_of(y) < measure_of(g))) {
            ++stats_.skipped_rules;
            return std::nullopt;
        }
        ColoringResult yr = solve(y, depth + 1);
        const int base = static_cast<int>(outside.size());
        if (auto* yw = std::get_if<PotentialWitness>(&yr)) {
            std::vector<Vertex> base_set;
            std::vector<Color> hit;
            for (Vertex v : yw->set) {
                if (v < base)
                    base_set.push_back(outside[v]);
                else
                    hit.push_back(v - base + 1);
            }
            std::vector<VertexSet> candidates;
            const VertexSet bs(base_set);
            if (!bs.empty())
                candidates.push_back(bs);
            candidates.push_back(set_union(bs, r));
            for (Color col : hit) {
                std::vector<Vertex> cls;
                for (std::size_t p = 0; p < r.size(); ++p)
                    if (inside_col[static_cast<Vertex>(p)] == col)
                        cls.push_back(r[p]);
                if (!cls.empty())
                    candidates.push_back(set_union(bs, VertexSet(cls)));
            }
            std::optional<PotentialWitness> best;
            for (auto& cand : candidates) {
                PotentialWitness pw = make_witness(g, k_, cand);
                if (!best || pw.rho < best->rho)
                    best = std::move(pw);
            }
            if (best->rho <= threshold())
                return *best;
            ++stats_.failed_rules;
            note(depth, step, g, "abandoned: witness of Y does not lift");
            return std::nullopt;
        }
        const ColorAssignment& yc = std::get<ColorAssignment>(yr);
        // Rename Y's colors so that x_i receives color i, then merge with the coloring of R.
        std::vector<Color> rename(palette_ + 1, kUncolored);
        for (int x = 0; x < palette_; ++x)
            rename[yc[base + x]] = x + 1;
        ColorAssignment c(n);
        scatter(c, r, inside_col);
        for (int p = 0; p < base; ++p)
            c[outside[p]] = rename[yc[p]];
        return c;
    }

private:
    // ---- steps 5 and 6: local rewrites --------------------------------------------------------

    std::optional<ColoringResult> attempt(const Graph& g, Rewrite& rw, int depth)
    {
        if (!(measure_of(rw.reduced) < measure_of(g))) {
            ++stats_.skipped_rules;
            return std::nullopt;
        }
        note(depth, rw.step, g, rw.action);
        ColoringResult r = solve(rw.reduced, depth + 1);
        if (auto* c = std::get_if<ColorAssignment>(&r)) {
            ColorAssignment full = rw.lift(*c);
            const std::string defect = coloring_defect(g, full, palette_);
            if (!defect.empty())
                throw InternalError(std::string("step ") + rw.step + " lift: " + defect);
            return full;
        }
        const auto& w = std::get<PotentialWitness>(r);
        std::vector<Vertex> base;
        for (Vertex v : w.set)
            base.insert(base.end(), rw.image[v].begin(), rw.image[v].end());
        const VertexSet bs(base);
        const std::size_t e = std::min<std::size_t>(rw.extras.size(), 12);
        std::optional<PotentialWitness> best;
        for (std::uint32_t mask = 0; mask < (1U << e); ++mask) {
            std::vector<Vertex> cand(bs.begin(), bs.end());
            for (std::size_t j = 0; j < e; ++j)
                if (mask >> j & 1U)
                    cand.push_back(rw.extras[j]);
            if (cand.empty())
                continue;
            PotentialWitness pw = make_witness(g, k_, VertexSet(std::move(cand)));
            if (!best || pw.rho < best->rho)
                best = std::move(pw);
        }
        if (best && best->rho <= threshold())
            return *best;
        ++stats_.failed_rules;
        note(depth, rw.step, g, "abandoned: inner witness does not lift");
        return std::nullopt;
    }

    struct CliqueInfo {
        VertexSet clique;  // K(v), size k-1
        Vertex outer = -1; // a_v
    };

    std::optional<CliqueInfo> clique_info(const Graph& g, Vertex v) const
    {
        if (g.degree(v) != k_ - 1)
            return std::nullopt;
        auto k = find_clique_of(g, v, k_ - 1);
        if (!k)
            return std::nullopt;
        CliqueInfo ci{*k, -1};
        for (Vertex u : g.neighbors(v))
            if (!k->contains(u))
                ci.outer = u;
        return ci;
    }

    // Neighbor of w outside K, for a degree-(k-1) member w of K.
    static Vertex outer_neighbor(const Graph& g, const VertexSet& k, Vertex w)
    {
        for (Vertex u : g.neighbors(w))
            if (!k.contains(u))
                return u;
        return -1;
    }

    std::optional<ColoringResult> step51(const Graph& g, int depth)
    {
        const int n = g.vertex_count();
        for (Vertex v = 0; v < n; ++v) {
            const auto ci = clique_info(g, v);
            if (!ci)
                continue;
            for (Vertex w : ci->clique) {
                if (w == v || g.degree(w) != k_ - 1)
                    continue;
                const Vertex av = ci->outer, aw = outer_neighbor(g, ci->clique, w);
                if (aw == av)
                    continue;
                Rewrite rw;
                rw.step = "5.1";
                rw.action = "delete " + std::to_string(v) + "," + std::to_string(w) + "; join " +
                            std::to_string(av) + "-" + std::to_string(aw);
                GraphBuilder b(g);
                b.add_edge(av, aw);
                const VertexSet removed{v, w};
                finish_by_removal(rw, b, removed);
                rw.extras = {v, w};
                rw.lift = [this, &g, n, removed, v, w](const ColorAssignment& red) {
                    ColorAssignment c = expand_kept(n, removed, red);
                    if (!complete_small(g, c, {v, w}, 0, palette_))
                        throw InternalError("step 5.1: no completion for the deleted pair");
                    return c;
                };
                if (auto r = attempt(g, rw, depth))
                    return r;
            }
        }
        return std::nullopt;
    }

    // G - x + twin of the cluster T (in x's slot); T is recolored around x.
    Rewrite twin_for_big_neighbor(const Graph& g, const char* step, const VertexSet& t, Vertex x)
    {
        const Vertex v = t[0];
        Rewrite rw;
        rw.step = step;
        rw.action = "replace " + std::to_string(x) + " by a twin of " + std::to_string(v);
        GraphBuilder b(g);
        b.isolate(x);
        b.add_edge(x, v);
        for (Vertex u : g.neighbors(v))
            if (u != x)
                b.add_edge(x, u);
        rw.reduced = b.build();
        rw.image.assign(g.vertex_count(), {});
        for (Vertex u = 0; u < g.vertex_count(); ++u)
            if (u != x)
                rw.image[u] = {u};
        rw.extras = {x};
        rw.lift = [this, &g, t, x](const ColorAssignment& red) {
            ColorAssignment c = red;
            std::vector<Color> pool{red[x]};
            for (Vertex u : t)
                pool.push_back(red[u]);
            std::vector<Color> around;
            for (Vertex u : g.neighbors(x))
                if (!t.contains(u))
                    around.push_back(red[u]);
            const Color cx = smallest_missing(around, palette_);
            if (cx == kUncolored)
                throw InternalError(std::string("no color left for the replaced vertex"));
            c[x] = cx;
            std::size_t next = 0;
            std::sort(pool.begin(), pool.end());
            for (Vertex u : t) {
                while (next < pool.size() && pool[next] == cx)
                    ++next;
                c[u] = pool[next++];
            }
            return c;
        };
        return rw;
    }

    VertexSet twins_in(const Graph& g, const VertexSet& s, Vertex v) const
    {
        std::vector<Vertex> t;
        for (Vertex u : s)
            if (g.degree(u) == k_ - 1 && same_closed_neighborhood(g, u, v))
                t.push_back(u);
        return VertexSet(std::move(t));
    }

    std::optional<ColoringResult> step52(const Graph& g, int depth)
    {
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            const auto ci = clique_info(g, v);
            if (!ci)
                continue;
            const VertexSet t = twins_in(g, ci->clique, v);
            if (t.size() < 2 || t[0] != v)
                continue;
            for (Vertex x : ci->clique) {
                if (g.degree(x) == k_ - 1 || g.degree(x) < k_ ||
                    g.degree(x) > k_ - 2 + static_cast<int>(t.size()))
                    continue;
                Rewrite rw = twin_for_big_neighbor(g, "5.2", t, x);
                if (auto r = attempt(g, rw, depth))
                    return r;
            }
        }
        return std::nullopt;
    }

    std::optional<ColoringResult> step53(const Graph& g, int depth)
    {
        const int n = g.vertex_count();
        for (Vertex v = 0; v < n; ++v) {
            const auto ci = clique_info(g, v);
            if (!ci)
                continue;
            int heavy = 0, light = 0;
            for (Vertex u : ci->clique) {
                if (g.degree(u) == k_ - 1)
                    ++light;
                if (g.degree(u) == k_)
                    ++heavy;
            }
            if (light != 1 || 2 * heavy < k_ - 2)
                continue;
            const Vertex a = ci->outer;
            for (Vertex x : ci->clique) {
                if (x == v || g.degree(x) != k_ || g.adjacent(x, a))
                    continue;
                std::vector<Vertex> out;
                for (Vertex u : g.neighbors(x))
                    if (!ci->clique.contains(u))
                        out.push_back(u);
                if (out.size() != 2)
                    continue;
                Rewrite rw;
                rw.step = "5.3";
                rw.action = "delete " + std::to_string(v) + "; join " + std::to_string(a) + " to " +
                            std::to_string(out[0]) + "," + std::to_string(out[1]);
                GraphBuilder b(g);
                b.add_edge(a, out[0]);
                b.add_edge(a, out[1]);
                const VertexSet removed{v};
                finish_by_removal(rw, b, removed);
                rw.extras = {v, x};
                const VertexSet clique = ci->clique;
                rw.lift = [this, &g, n, removed, clique, v, x, a](const ColorAssignment& red) {
                    ColorAssignment c = expand_kept(n, removed, red);
                    bool used = false;
                    for (Vertex u : clique)
                        if (u != v && u != x && c[u] == c[a])
                            used = true;
                    if (!used)
                        c[x] = c[a];
                    if (!complete_small(g, c, {v}, 0, palette_))
                        throw InternalError("step 5.3: no color for the deleted vertex");
                    return c;
                };
                if (auto r = attempt(g, rw, depth))
                    return r;
            }
        }
        return std::nullopt;
    }

    // Deletes `gone`, merges `from` into `into`; the merged slot stands for both.
    Rewrite glue(const Graph& g, const char* step, const VertexSet& gone, Vertex from, Vertex into)
    {
        const int n = g.vertex_count();
        Rewrite rw;
        rw.step = step;
        rw.action = "delete";
        for (Vertex u : gone)
            rw.action += " " + std::to_string(u);
        rw.action += "; glue " + std::to_string(from) + " into " + std::to_string(into);
        GraphBuilder b(g);
        for (Vertex u : g.neighbors(from))
            if (u != into)
                b.add_edge(into, u);
        b.isolate(from);
        const VertexSet removed = set_union(gone, VertexSet{from});
        finish_by_removal(rw, b, removed);
        const VertexSet kept = complement(n, removed);
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (kept[i] == into)
                rw.image[i].push_back(from);
        rw.lift = [this, &g, n, removed, gone, from, into](const ColorAssignment& red) {
            ColorAssignment c = expand_kept(n, removed, red);
            c[from] = c[into];
            if (!complete_small(g, c, gone.members(), 0, palette_))
                throw InternalError("glue rewrite: no completion for the deleted vertices");
            return c;
        };
        return rw;
    }

    std::optional<ColoringResult> small_k_extras(const Graph& g, int depth)
    {
        const int n = g.vertex_count();
        if (k_ == 4) {
            // A 4-set spanning 5 edges has potential at most 10: collapse it.
            for (const Edge& e : g.edges()) {
                std::vector<Vertex> common;
                for (Vertex u : g.neighbors(e.u))
                    if (u != e.v && g.adjacent(u, e.v))
                        common.push_back(u);
                if (common.size() < 2)
                    continue;
                const VertexSet r{e.u, e.v, common[0], common[1]};
                if (static_cast<int>(r.size()) == n)
                    continue;
                const Potential pr = rho(g, k_, r);
                if (pr <= threshold())
                    return make_witness(g, k_, r);
                if (auto res = collapse(g, r, choose_i(pr, k_), "extra.k4", depth))
                    return res;
            }
            return std::nullopt;
        }
        if (k_ == 5) {
            for (const auto& cl : clusters(g, k_)) {
                if (cl.members.size() < 2)
                    continue;
                const Vertex x = cl.members[0], y = cl.members[1];
                std::vector<Vertex> others;
                for (Vertex u : g.neighbors(x))
                    if (u != y)
                        others.push_back(u);
                for (std::size_t i = 0; i < others.size(); ++i)
                    for (std::size_t j = i + 1; j < others.size(); ++j) {
                        if (g.adjacent(others[i], others[j]))
                            continue;
                        Rewrite rw = glue(g, "extra.k5", VertexSet{x, y}, others[j], others[i]);
                        rw.extras = {x, y};
                        if (auto r = attempt(g, rw, depth))
                            return r;
                    }
            }
            return std::nullopt;
        }
        if (k_ == 6) {
            for (const auto& cl : clusters(g, k_)) {
                if (cl.members.size() != 2)
                    continue;
                const Vertex v1 = cl.members[0], v2 = cl.members[1];
                const auto x = find_clique_of(g, v1, k_ - 1);
                if (!x || !x->contains(v2))
                    continue;
                Vertex y = -1;
                for (Vertex u : g.neighbors(v1))
                    if (!x->contains(u))
                        y = u;
                for (Vertex u : *x) {
                    if (cl.members.contains(u) || g.adjacent(u, y))
                        continue;
                    Rewrite rw = glue(g, "extra.k6", cl.members, u, y);
                    for (Vertex z : *x)
                        if (z != u)
                            rw.extras.push_back(z);
                    if (auto r = attempt(g, rw, depth))
                        return r;
                }
            }
        }
        return std::nullopt;
    }

    bool in_big_clique(const Graph& g, Vertex v) const { return find_clique_of(g, v, k_ - 1).has_value(); }

    const Cluster* cluster_of(const std::vector<Cluster>& cls, Vertex v) const
    {
        for (const auto& c : cls)
            if (c.members.contains(v))
                return &c;
        return nullptr;
    }

    std::optional<ColoringResult> step61(const Graph& g, int depth)
    {
        const auto cls = clusters(g, k_);
        for (const auto& cl : cls) {
            if (cl.members.size() < 2 || in_big_clique(g, cl.members[0]))
                continue;
            const int cs = static_cast<int>(cl.members.size());
            for (Vertex x : g.neighbors(cl.members[0])) {
                if (cl.members.contains(x) || g.degree(x) < k_ || g.degree(x) > k_ - 2 + cs)
                    continue;
                Rewrite rw = twin_for_big_neighbor(g, "6.1", cl.members, x);
                if (auto r = attempt(g, rw, depth))
                    return r;
            }
        }
        return std::nullopt;
    }

    std::optional<ColoringResult> step62(const Graph& g, int depth)
    {
        const auto cls = clusters(g, k_);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (g.degree(v) != k_ - 1 || in_big_clique(g, v))
                continue;
            const Cluster* cv = cluster_of(cls, v);
            for (Vertex w : g.neighbors(v)) {
                if (g.degree(w) != k_ - 1 || cv->members.contains(w))
                    continue;
                const Cluster* cw = cluster_of(cls, w);
                if (cw->members.size() > cv->members.size())
                    continue;
                Rewrite rw;
                rw.step = "6.2";
                rw.action = "replace " + std::to_string(w) + " by a twin of " + std::to_string(v);
                GraphBuilder b(g);
                b.isolate(w);
                b.add_edge(w, v);
                for (Vertex u : g.neighbors(v))
                    if (u != w)
                        b.add_edge(w, u);
                rw.reduced = b.build();
                rw.image.assign(g.vertex_count(), {});
                for (Vertex u = 0; u < g.vertex_count(); ++u)
                    if (u != w)
                        rw.image[u] = {u};
                rw.extras = {w};
                rw.lift = [this, &g, v, w](const ColorAssignment& red) {
                    ColorAssignment c = red;
                    std::vector<Color> around;
                    for (Vertex u : g.neighbors(w))
                        if (u != v)
                            around.push_back(red[u]);
                    c[w] = smallest_missing(around, palette_);
                    c[v] = red[v] != c[w] ? red[v] : red[w];
                    return c;
                };
                if (auto r = attempt(g, rw, depth))
                    return r;
            }
        }
        return std::nullopt;
    }

    // ---- step 7: list-color the residual of the low/high peel -------------------------------

    std::optional<ColoringResult> step7(const Graph& g, int depth)
    {
        const Step7Partition part = step7_partition(g, k_);
        const VertexSet hs = part.residual();
        if (!part.dense || hs.empty())
            return std::nullopt;
        note(depth, "7", g, "list-color " + std::to_string(part.residual_low.size()) + "+" +
                                std::to_string(part.residual_high.size()) + " vertices, e0 = " + std::to_string(part.e0));
        ColorAssignment c(g.vertex_count());
        bool is_witness = false;
        PotentialWitness w;
        const VertexSet rest = complement(g.vertex_count(), hs);
        if (!rest.empty()) {
            solve_induced(g, rest, depth, c, is_witness, w);
            if (is_witness)
                return w;
        }
        return step7_peel_and_color(g, k_, c);
    }

    // ---- exact fallback -------------------------------------------------------------------

    ColoringResult fallback(const Graph& g, int depth, const std::string& why)
    {
        if (!options_.exact_fallback || g.vertex_count() > oracle_limit())
            throw Error("reduction stuck on a graph with " + std::to_string(g.vertex_count()) + " vertices and " +
                        std::to_string(g.edge_count()) + " edges (" + why + "); exact fallback unavailable");
        ++stats_.fallbacks;
        note(depth, "fallback", g, why);
        if (auto c = find_coloring(g, palette_))
            return *c;
        PotentialWitness w = brute_min_potential(g, k_, false);
        if (w.rho > threshold())
            throw InternalError("graph is not (k-1)-colorable but has potential above k(k-3)");
        return w;
    }

    int k_;
    int palette_;
    const ReducerOptions& options_;
    ReducerStats& stats_;
    ReductionTrace& trace_;
    int depth_cap_;
};

} // namespace

int choose_i(Potential rho_r, int k)
{
    if (k < 4)
        throw DomainError("choose_i needs k >= 4");
    const Potential low = witness_threshold(k);
    if (rho_r <= low || rho_r > clique_potential(k))
        throw DomainError("choose_i needs k(k-3) < rho <= 2(k-1)(k-2)");
    const Potential step = 2 * static_cast<Potential>(k - 1);
    return static_cast<int>((rho_r - low + step - 1) / step - 1);
}

std::vector<Edge> lemma4_edges(const WeightedSet& w, int i, int k)
{
    if (i < 1 || 2 * i > k - 1)
        throw DomainError("lemma4_edges needs 1 <= i <= (k-1)/2");
    std::int64_t total = 0;
    for (const auto& [v, wt] : w) {
        if (wt < 1)
            throw DomainError("lemma4_edges weights must be positive");
        total += wt;
    }
    if (total < k - 1)
        throw DomainError("lemma4_edges needs total weight >= k-1");

    auto u = w;
    std::stable_sort(u.begin(), u.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    const int s = static_cast<int>(u.size());
    std::vector<std::int64_t> suffix(s + 1, 0);  // suffix[j] = w_j + ... over 0-based j
    for (int j = s - 1; j >= 0; --j)
        suffix[j] = suffix[j + 1] + u[j].second;

    std::set<Edge> edges;
    if (suffix[1] <= i) {
        for (int j = 1; j < s; ++j)
            edges.insert(Edge(u[0].first, u[j].first));
        return {edges.begin(), edges.end()};
    }
    int j = 1;
    while (j + 1 < s && suffix[j + 1] >= i)
        ++j;
    const std::int64_t alpha = i - suffix[j + 1];
    edges.insert(Edge(u[0].first, u[j].first));
    std::vector<std::int64_t> cap(j + 1);
    for (int h = 0; h <= j; ++h)
        cap[h] = u[h].second;
    cap[0] -= alpha;
    cap[j] -= alpha;
    for (int t = j + 1; t < s; ++t)
        for (int rep = 0; rep < u[t].second; ++rep) {
            const int h = static_cast<int>(std::max_element(cap.begin(), cap.end()) - cap.begin());
            if (cap[h] <= 0)
                throw InternalError("lemma4_edges ran out of head capacity");
            --cap[h];
            edges.insert(Edge(u[h].first, u[t].first));
        }
    return {edges.begin(), edges.end()};
}

Graph y_gadget(const Graph& g, const VertexSet& r, const ColorAssignment& phi, int k)
{
    const int n = g.vertex_count();
    if (r.empty())
        throw DomainError("y_gadget needs a nonempty R");
    for (Vertex v : r)
        if (v < 0 || v >= n)
            throw DomainError("y_gadget: R has an out-of-range vertex");
    if (phi.size() != static_cast<int>(r.size()))
        throw DomainError("y_gadget coloring must be indexed by position in R");
    const std::string defect = coloring_defect(g.induced(r), phi, k - 1);
    if (!defect.empty())
        throw DomainError("y_gadget needs a proper (k-1)-coloring of G[R]: " + defect);

    const VertexSet outside = complement(n, r);
    const int base = static_cast<int>(outside.size());
    GraphBuilder b(base + k - 1);
    std::vector<int> pos(n, -1);
    for (int p = 0; p < base; ++p)
        pos[outside[p]] = p;
    for (int p = 0; p < base; ++p)
        for (Vertex u : g.neighbors(outside[p])) {
            if (pos[u] >= 0)
                b.add_edge(p, pos[u]);
        }
    for (int x = 0; x < k - 1; ++x)
        for (int y = x + 1; y < k - 1; ++y)
            b.add_edge(base + x, base + y);
    for (std::size_t p = 0; p < r.size(); ++p)
        for (Vertex u : g.neighbors(r[p]))
            if (pos[u] >= 0)
                b.add_edge(pos[u], base + phi[static_cast<Vertex>(p)] - 1);
    return b.build();
}

ColorAssignment combine_across_small_cut(const Graph& g, const VertexSet& r, const ColorAssignment& inside,
                                         const ColorAssignment& outside, int palette)
{
    const int n = g.vertex_count();
    const VertexSet rest = complement(n, r);
    // forbidden[c2][c1]: outside color c2 may not become inside color c1.
    std::vector<std::vector<bool>> forbidden(palette + 1, std::vector<bool>(palette + 1, false));
    std::size_t crossing = 0;
    for (std::size_t p = 0; p < r.size(); ++p)
        for (Vertex u : g.neighbors(r[p])) {
            if (r.contains(u))
                continue;
            ++crossing;
            const auto q = std::lower_bound(rest.begin(), rest.end(), u) - rest.begin();
            forbidden[outside[static_cast<Vertex>(q)]][inside[static_cast<Vertex>(p)]] = true;
        }
    if (crossing + 1 > static_cast<std::size_t>(palette))
        throw DomainError("combine_across_small_cut needs fewer crossing edges than colors");

    // Perfect matching of colors avoiding forbidden pairs (augmenting paths).
    std::vector<int> match_in(palette + 1, 0);
    std::function<bool(int, std::vector<bool>&)> augment = [&](int c2, std::vector<bool>& seen) {
        for (int c1 = 1; c1 <= palette; ++c1) {
            if (forbidden[c2][c1] || seen[c1])
                continue;
            seen[c1] = true;
            if (match_in[c1] == 0 || augment(match_in[c1], seen)) {
                match_in[c1] = c2;
                return true;
            }
        }
        return false;
    };
    for (int c2 = 1; c2 <= palette; ++c2) {
        std::vector<bool> seen(palette + 1, false);
        if (!augment(c2, seen))
            throw InternalError("no conflict-free color permutation across the cut");
    }
    std::vector<Color> perm(palette + 1, kUncolored);
    for (int c1 = 1; c1 <= palette; ++c1)
        perm[match_in[c1]] = c1;

    ColorAssignment c(n);
    scatter(c, r, inside);
    for (std::size_t q = 0; q < rest.size(); ++q)
        c[rest[q]] = perm[outside[static_cast<Vertex>(q)]];
    return c;
}

namespace {

int depth_cap(const Graph& g)
{
    return static_cast<int>(g.edge_count()) + g.vertex_count();
}

void validate_outcome(const Graph& g, int k, ColoringOutcome& out)
{
    if (auto* c = std::get_if<ColorAssignment>(&out.result)) {
        const std::string defect = coloring_defect(g, *c, k - 1);
        if (!defect.empty())
            throw InternalError("reducer returned an improper coloring: " + defect);
    } else {
        auto& w = std::get<PotentialWitness>(out.result);
        w = make_witness(g, k, w.set);
        if (!is_valid_failure_witness(g, w))
            throw InternalError("reducer returned a witness of potential " + std::to_string(w.rho));
    }
}

} // namespace

ColoringOutcome color_or_witness(const Graph& g, int k, const ReducerOptions& options)
{
    if (k < 4)
        throw DomainError("color_or_witness needs k >= 4");
    ColoringOutcome out{ColorAssignment(0), {}, {}};
    Reducer reducer(k, options, out.stats, out.trace, depth_cap(g));
    out.result = reducer.solve(g, 0);
    validate_outcome(g, k, out);
    return out;
}

ColoringOutcome collapse_and_recurse(const Graph& g, int k, const VertexSet& r, std::optional<int> i,
                                     const ReducerOptions& options)
{
    if (k < 4)
        throw DomainError("collapse_and_recurse needs k >= 4");
    if (r.size() < 2 || r.size() >= static_cast<std::size_t>(g.vertex_count()))
        throw DomainError("collapse_and_recurse needs 2 <= |R| <= n-1");
    for (Vertex v : r)
        if (v < 0 || v >= g.vertex_count())
            throw DomainError("collapse_and_recurse: R has an out-of-range vertex");
    ColoringOutcome out{ColorAssignment(0), {}, {}};
    Reducer reducer(k, options, out.stats, out.trace, depth_cap(g));
    auto res = reducer.collapse(g, r, i.value_or(0), i ? "4" : "3", 0, false);
    if (!res)
        throw Error("collapse did not resolve: an inner witness does not lift to G");
    out.result = *res;
    validate_outcome(g, k, out);
    return out;
}

VertexSet Step7Partition::residual() const
{
    return set_union(residual_low, residual_high);
}

Step7Partition step7_partition(const Graph& g, int k)
{
    if (k < 4)
        throw DomainError("step7_partition needs k >= 4");
    const int n = g.vertex_count();
    std::vector<bool> l0(n, false), h0(n, false);
    std::vector<Vertex> low, high;
    for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) == k) {
            h0[v] = true;
            high.push_back(v);
        } else if (g.degree(v) == k - 1) {
            bool all_high = true;
            for (Vertex u : g.neighbors(v))
                if (g.degree(u) < k)
                    all_high = false;
            if (all_high) {
                l0[v] = true;
                low.push_back(v);
            }
        }
    }
    Step7Partition part;
    for (Vertex v : low)
        for (Vertex u : g.neighbors(v))
            part.e0 += h0[u];
    part.low = VertexSet(low);
    part.high = VertexSet(high);
    part.dense = part.e0 > 0 && part.e0 >= 2 * static_cast<std::int64_t>(low.size() + high.size());

    // Peel vertices with at most two surviving neighbors on the other side.
    std::vector<bool> alive(n);
    for (Vertex v = 0; v < n; ++v)
        alive[v] = l0[v] || h0[v];
    for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < n; ++v) {
            if (!alive[v])
                continue;
            int across = 0;
            for (Vertex u : g.neighbors(v))
                if (alive[u] && (l0[v] ? h0[u] : l0[u]))
                    ++across;
            if (across <= 2) {
                alive[v] = false;
                changed = true;
            }
        }
    }
    std::vector<Vertex> ra, rb;
    for (Vertex v = 0; v < n; ++v)
        if (alive[v])
            (l0[v] ? ra : rb).push_back(v);
    part.residual_low = VertexSet(std::move(ra));
    part.residual_high = VertexSet(std::move(rb));
    return part;
}

ColorAssignment step7_peel_and_color(const Graph& g, int k, const ColorAssignment& partial)
{
    const int n = g.vertex_count();
    if (partial.size() != n)
        throw DomainError("step7_peel_and_color: partial coloring has the wrong size");
    const Step7Partition part = step7_partition(g, k);
    const VertexSet hs = part.residual();
    const Graph outer = g.induced(complement(n, hs));
    ColorAssignment c = partial;
    for (Vertex v : hs)
        c[v] = kUncolored;
    {
        ColorAssignment oc(outer.vertex_count());
        const VertexSet rest = complement(n, hs);
        for (std::size_t p = 0; p < rest.size(); ++p)
            oc[static_cast<Vertex>(p)] = c[rest[p]];
        const std::string defect = coloring_defect(outer, oc, k - 1);
        if (!defect.empty())
            throw DomainError("step7_peel_and_color: outer region not properly colored: " + defect);
    }
    if (hs.empty())
        return c;

    // The residual's low side is independent: its members only see degree >= k vertices.
    const Graph gh = g.induced(hs);
    std::vector<Vertex> la, lb;
    for (std::size_t p = 0; p < hs.size(); ++p)
        (part.residual_low.contains(hs[p]) ? la : lb).push_back(static_cast<Vertex>(p));
    const VertexSet a(la), b(lb);
    const Matching m = split_and_match(gh, a, b, 3);
    const Digraph d = orient_AB(gh, a, b, m);
    ListAssignment lists(hs.size());
    for (std::size_t p = 0; p < hs.size(); ++p) {
        std::vector<bool> banned(k, false);
        for (Vertex u : g.neighbors(hs[p]))
            if (!hs.contains(u))
                banned[c[u]] = true;
        for (Color col = 1; col <= k - 1; ++col)
            if (!banned[col])
                lists[p].push_back(col);
        if (static_cast<int>(lists[p].size()) < 1 + d.out_degree(static_cast<int>(p)))
            throw InternalError("step 7: list of vertex " + std::to_string(hs[p]) + " is too short");
    }
    const ColorAssignment inner = list_color_via_kernels(d, lists);
    for (std::size_t p = 0; p < hs.size(); ++p)
        c[hs[p]] = inner[static_cast<Vertex>(p)];
    const std::string defect = coloring_defect(g, c, k - 1);
    if (!defect.empty())
        throw InternalError("step 7 produced an improper coloring: " + defect);
    return c;
}

} // namespace kcrit
