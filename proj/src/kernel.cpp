#include "kcrit/kernel.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

namespace kcrit {

Digraph::Digraph(int n) : out_(std::max(n, 0)), in_(std::max(n, 0)) {}

void Digraph::add_arc(int tail, int head)
{
    if (tail < 0 || head < 0 || tail >= node_count() || head >= node_count())
        throw DomainError("arc endpoint out of range");
    if (tail == head)
        throw DomainError("self-arc at node " + std::to_string(tail));
    auto& o = out_[tail];
    const auto it = std::lower_bound(o.begin(), o.end(), head);
    if (it != o.end() && *it == head)
        return;
    o.insert(it, head);
    auto& i = in_[head];
    i.insert(std::lower_bound(i.begin(), i.end(), tail), tail);
}

void Digraph::add_bidirected(int a, int b)
{
    add_arc(a, b);
    add_arc(b, a);
}

bool Digraph::has_arc(int tail, int head) const
{
    return std::binary_search(out_[tail].begin(), out_[tail].end(), head);
}

std::size_t Digraph::arc_count() const
{
    std::size_t c = 0;
    for (const auto& o : out_)
        c += o.size();
    return c;
}

Digraph Digraph::induced(const VertexSet& s) const
{
    std::vector<int> index(node_count(), -1);
    for (std::size_t i = 0; i < s.size(); ++i)
        index[s[i]] = static_cast<int>(i);
    Digraph out(static_cast<int>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (int h : out_[s[i]])
            if (index[h] >= 0)
                out.add_arc(static_cast<int>(i), index[h]);
    return out;
}

namespace {

// Kernel recursion on the live nodes. `in_a` flags the independent side.
std::vector<int> kernel_of(const Digraph& d, std::vector<char> alive, const std::vector<char>& in_a)
{
    std::vector<int> kernel;
    const int n = d.node_count();
    while (true) {
        int chosen = -1;
        for (int v = 0; v < n && chosen < 0; ++v) {
            if (!alive[v] || in_a[v])
                continue;
            const bool reaches_a = std::any_of(d.out(v).begin(), d.out(v).end(),
                                               [&](int h) { return alive[h] && in_a[h]; });
            if (!reaches_a)
                chosen = v;
        }
        if (chosen < 0) {
            for (int v = 0; v < n; ++v)
                if (alive[v] && in_a[v])
                    kernel.push_back(v);
            break;
        }
        // Every live neighbour of `chosen` is an in-neighbour; they are dominated by it.
        kernel.push_back(chosen);
        alive[chosen] = 0;
        for (int u : d.in(chosen))
            alive[u] = 0;
    }
    std::sort(kernel.begin(), kernel.end());
    return kernel;
}

void require_shape(const Digraph& d, const std::vector<char>& member, const std::vector<char>& in_a)
{
    const int n = d.node_count();
    for (int v = 0; v < n; ++v) {
        if (!member[v])
            continue;
        for (int h : d.out(v)) {
            if (!member[h])
                continue;
            if (in_a[v] && in_a[h])
                throw DomainError("A is not independent: arc " + std::to_string(v) + "->" + std::to_string(h));
            if (!in_a[v] && !in_a[h] && !d.has_arc(h, v))
                throw DomainError("arc " + std::to_string(v) + "->" + std::to_string(h) +
                                  " inside B is not bidirected");
        }
    }
}

} // namespace

bool is_kernel(const Digraph& d, const VertexSet& s, const VertexSet& f)
{
    std::vector<char> in_s(d.node_count(), 0), in_f(d.node_count(), 0);
    for (Vertex v : s)
        in_s[v] = 1;
    for (Vertex v : f) {
        if (!in_s[v])
            return false;
        in_f[v] = 1;
    }
    for (Vertex v : f)
        for (int h : d.out(v))
            if (in_f[h])
                return false;
    for (Vertex v : s) {
        if (in_f[v])
            continue;
        if (std::none_of(d.out(v).begin(), d.out(v).end(), [&](int h) { return in_f[h] != 0; }))
            return false;
    }
    return true;
}

VertexSet find_kernel(const Digraph& d, const VertexSet& a, const VertexSet& b)
{
    const int n = d.node_count();
    std::vector<char> member(n, 0), in_a(n, 0);
    for (Vertex v : a) {
        if (v < 0 || v >= n)
            throw DomainError("A contains a node outside the digraph");
        member[v] = in_a[v] = 1;
    }
    for (Vertex v : b) {
        if (v < 0 || v >= n)
            throw DomainError("B contains a node outside the digraph");
        if (in_a[v])
            throw DomainError("A and B overlap at node " + std::to_string(v));
        member[v] = 1;
    }
    require_shape(d, member, in_a);
    VertexSet kernel(kernel_of(d, member, in_a));

    std::vector<Vertex> all;
    for (int v = 0; v < n; ++v)
        if (member[v])
            all.push_back(v);
    if (!is_kernel(d, VertexSet(std::move(all)), kernel))
        throw InternalError("kernel recursion produced a non-kernel");
    return kernel;
}

namespace {

// Independent side of an A/B-shaped digraph: nodes touching a bidirected pair go to B, single
// arcs must join the two sides.
std::vector<char> infer_independent_side(const Digraph& d)
{
    const int n = d.node_count();
    std::vector<int> side(n, -1);  // 1 = independent side A, 0 = B
    std::vector<std::vector<int>> single(n);
    for (int v = 0; v < n; ++v)
        for (int h : d.out(v)) {
            if (d.has_arc(h, v)) {
                side[v] = 0;
            } else {
                single[v].push_back(h);
                single[h].push_back(v);
            }
        }
    auto fail = [] { throw DomainError("digraph is not of the independent-set/bidirected shape"); };
    std::vector<char> done(n, 0);
    // Components anchored at a bidirected node first, then free components (root on A).
    for (int pass = 0; pass < 2; ++pass)
        for (int r = 0; r < n; ++r) {
            if (done[r] || (pass == 0 && side[r] != 0))
                continue;
            if (side[r] < 0)
                side[r] = 1;
            std::deque<int> q{r};
            done[r] = 1;
            while (!q.empty()) {
                const int v = q.front();
                q.pop_front();
                for (int u : single[v]) {
                    if (side[u] == side[v])
                        fail();
                    if (side[u] < 0)
                        side[u] = 1 - side[v];
                    if (!done[u]) {
                        done[u] = 1;
                        q.push_back(u);
                    }
                }
            }
        }
    std::vector<char> in_a(n);
    for (int v = 0; v < n; ++v)
        in_a[v] = side[v] == 1;
    return in_a;
}

} // namespace

ColorAssignment list_color_via_kernels(const Digraph& d, const ListAssignment& lists)
{
    const int n = d.node_count();
    if (static_cast<int>(lists.size()) != n)
        throw DomainError("list assignment size does not match the digraph");
    for (int v = 0; v < n; ++v) {
        if (static_cast<int>(lists[v].size()) < 1 + d.out_degree(v))
            throw DomainError("list of node " + std::to_string(v) + " has " + std::to_string(lists[v].size()) +
                              " colors but out-degree is " + std::to_string(d.out_degree(v)));
        if (!std::is_sorted(lists[v].begin(), lists[v].end()) ||
            std::adjacent_find(lists[v].begin(), lists[v].end()) != lists[v].end() ||
            (!lists[v].empty() && lists[v].front() < 1))
            throw DomainError("list of node " + std::to_string(v) + " must be sorted, distinct and positive");
    }
    const auto in_a = infer_independent_side(d);

    ColorAssignment out(n);
    ListAssignment left = lists;
    std::vector<char> uncolored(n, 1);
    int remaining = n;
    while (remaining > 0) {
        Color alpha = std::numeric_limits<Color>::max();
        for (int v = 0; v < n; ++v)
            if (uncolored[v] && !left[v].empty())
                alpha = std::min(alpha, left[v].front());
        if (alpha == std::numeric_limits<Color>::max())
            throw InternalError("list coloring ran out of colors");
        std::vector<char> holder(n, 0);
        for (int v = 0; v < n; ++v)
            holder[v] = uncolored[v] && !left[v].empty() && left[v].front() == alpha;
        for (int v : kernel_of(d, holder, in_a)) {
            out[v] = alpha;
            uncolored[v] = 0;
            --remaining;
        }
        for (int v = 0; v < n; ++v)
            if (uncolored[v] && !left[v].empty() && left[v].front() == alpha)
                left[v].erase(left[v].begin());
    }

    for (int v = 0; v < n; ++v) {
        if (!std::binary_search(lists[v].begin(), lists[v].end(), out[v]))
            throw InternalError("list coloring left the list of node " + std::to_string(v));
        for (int h : d.out(v))
            if (out[h] == out[v])
                throw InternalError("list coloring produced a monochromatic arc");
    }
    return out;
}

namespace {

// Hopcroft-Karp on left 0..nl-1, right 0..nr-1.
class BipartiteMatcher {
public:
    BipartiteMatcher(int nl, int nr, std::vector<std::vector<int>> adj)
        : nl_(nl), adj_(std::move(adj)), match_l_(nl, -1), match_r_(nr, -1), dist_(nl)
    {
    }

    int run()
    {
        int size = 0;
        while (bfs())
            for (int u = 0; u < nl_; ++u)
                if (match_l_[u] < 0 && dfs(u))
                    ++size;
        return size;
    }

    const std::vector<int>& match_left() const { return match_l_; }
    const std::vector<int>& match_right() const { return match_r_; }
    const std::vector<std::vector<int>>& adj() const { return adj_; }

private:
    static constexpr int kInf = std::numeric_limits<int>::max();

    bool bfs()
    {
        std::queue<int> q;
        bool found = false;
        for (int u = 0; u < nl_; ++u) {
            dist_[u] = match_l_[u] < 0 ? 0 : kInf;
            if (dist_[u] == 0)
                q.push(u);
        }
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int r : adj_[u]) {
                const int w = match_r_[r];
                if (w < 0)
                    found = true;
                else if (dist_[w] == kInf) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(int u)
    {
        for (int r : adj_[u]) {
            const int w = match_r_[r];
            if (w < 0 || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_l_[u] = r;
                match_r_[r] = u;
                return true;
            }
        }
        dist_[u] = kInf;
        return false;
    }

    int nl_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_, dist_;
};

} // namespace

Matching split_and_match(const Graph& g, const VertexSet& a, const VertexSet& b, int cap)
{
    if (cap != 2 && cap != 3)
        throw DomainError("split cap must be 2 or 3");
    const int n = g.vertex_count();
    std::vector<int> a_index(n, -1), b_index(n, -1);
    for (std::size_t i = 0; i < a.size(); ++i)
        a_index[a[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (a_index[b[i]] >= 0)
            throw DomainError("A and B overlap");
        b_index[b[i]] = static_cast<int>(i);
    }

    // Copy c of b takes b's A-neighbours with positions [cap*c, cap*c + cap) in ascending order.
    std::vector<Vertex> copy_owner;
    std::vector<std::vector<int>> adj(a.size());
    for (Vertex bv : b) {
        int seen = 0;
        int copy = -1;
        for (Vertex av : g.neighbors(bv)) {
            if (a_index[av] < 0)
                continue;
            if (seen % cap == 0) {
                copy = static_cast<int>(copy_owner.size());
                copy_owner.push_back(bv);
            }
            adj[a_index[av]].push_back(copy);
            ++seen;
        }
    }
    BipartiteMatcher hk(static_cast<int>(a.size()), static_cast<int>(copy_owner.size()), adj);
    const int size = hk.run();

    if (size < static_cast<int>(a.size())) {
        // König: A-vertices reachable from an unmatched one by alternating paths violate Hall.
        const auto& ml = hk.match_left();
        const auto& mr = hk.match_right();
        int root = 0;
        while (ml[root] >= 0)
            ++root;
        std::vector<char> seen_l(a.size(), 0), seen_r(copy_owner.size(), 0);
        std::queue<int> q;
        q.push(root);
        seen_l[root] = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int r : adj[u]) {
                if (seen_r[r])
                    continue;
                seen_r[r] = 1;
                if (mr[r] >= 0 && !seen_l[mr[r]]) {
                    seen_l[mr[r]] = 1;
                    q.push(mr[r]);
                }
            }
        }
        std::vector<Vertex> violator;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (seen_l[i])
                violator.push_back(a[i]);
        const auto nb = static_cast<std::size_t>(std::count(seen_r.begin(), seen_r.end(), 1));
        const std::string what = "no matching covers A: " + std::to_string(violator.size()) +
                                 " vertices of A see only " + std::to_string(nb) + " split vertices";
        throw HallViolation(what, VertexSet(std::move(violator)), nb);
    }

    Matching out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.emplace_back(a[i], copy_owner[hk.match_left()[i]]);
    return out;
}

Digraph orient_AB(const Graph& g, const VertexSet& a, const VertexSet& b, const Matching& m)
{
    const int n = g.vertex_count();
    std::vector<int> side(n, -1);  // 1 = A, 0 = B
    for (Vertex v : a)
        side[v] = 1;
    for (Vertex v : b) {
        if (side[v] == 1)
            throw DomainError("A and B overlap");
        side[v] = 0;
    }
    if (std::find(side.begin(), side.end(), -1) != side.end())
        throw DomainError("A and B must partition the vertices of G'");
    if (!is_independent(g, a) && !is_independent(g, b))
        throw DomainError("neither A nor B is independent");

    // M lives in the split graph: each a once, a vertex of B possibly several times.
    std::vector<Vertex> partner(n, -1);
    for (auto [av, bv] : m) {
        if (av < 0 || av >= n || bv < 0 || bv >= n || side[av] != 1 || side[bv] != 0 || !g.adjacent(av, bv))
            throw DomainError("matching pair is not an A-B edge");
        if (partner[av] >= 0)
            throw DomainError("vertex " + std::to_string(av) + " of A is matched twice");
        partner[av] = bv;
    }
    for (Vertex av : a)
        if (partner[av] < 0)
            throw DomainError("matching does not cover vertex " + std::to_string(av) + " of A");

    Digraph d(n);
    for (const auto& e : g.edges()) {
        if (side[e.u] == side[e.v]) {
            d.add_bidirected(e.u, e.v);
            continue;
        }
        const Vertex av = side[e.u] == 1 ? e.u : e.v;
        const Vertex bv = av == e.u ? e.v : e.u;
        if (partner[av] == bv)
            d.add_arc(bv, av);
        else
            d.add_arc(av, bv);
    }
    return d;
}

} // namespace kcrit
