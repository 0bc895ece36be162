#include "kcrit/maxflow.hpp"

#include "kcrit/error.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace kcrit {

FlowNetwork::FlowNetwork(int nodes, int source, int sink) : nodes_(nodes), source_(source), sink_(sink)
{
    if (nodes < 2 || source < 0 || sink < 0 || source >= nodes || sink >= nodes)
        throw DomainError("flow network needs distinct in-range source and sink");
    if (source == sink)
        throw DomainError("source equals sink");
}

int FlowNetwork::add_arc(int tail, int head, Capacity capacity)
{
    if (tail < 0 || head < 0 || tail >= nodes_ || head >= nodes_)
        throw DomainError("arc endpoint out of range");
    if (capacity < 0)
        throw DomainError("negative capacity");
    constexpr Capacity limit = std::numeric_limits<Capacity>::max() / 4;
    if (capacity > limit - total_)
        throw DomainError("total capacity would overflow the flow integer width");
    total_ += capacity;
    arcs_.push_back({tail, head, capacity});
    return static_cast<int>(arcs_.size() - 1);
}

namespace {

struct Residual {
    struct Arc {
        int head;
        Capacity residual;
    };
    std::vector<Arc> arcs;               // arc 2i is forward copy of input arc i, 2i+1 its reverse
    std::vector<std::vector<int>> out;   // arc ids leaving each node

    explicit Residual(const FlowNetwork& net) : out(net.node_count())
    {
        arcs.reserve(net.arcs().size() * 2);
        for (const auto& a : net.arcs()) {
            out[a.tail].push_back(static_cast<int>(arcs.size()));
            arcs.push_back({a.head, a.capacity});
            out[a.head].push_back(static_cast<int>(arcs.size()));
            arcs.push_back({a.tail, 0});
        }
    }
};

class Dinic {
public:
    explicit Dinic(const FlowNetwork& net)
        : net_(net), r_(net), level_(net.node_count()), next_(net.node_count())
    {
    }

    Capacity run()
    {
        Capacity total = 0;
        while (bfs()) {
            std::fill(next_.begin(), next_.end(), 0);
            while (Capacity pushed = augment())
                total += pushed;
        }
        return total;
    }

    const Residual& residual() const { return r_; }

private:
    bool bfs()
    {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[net_.source()] = 0;
        q.push(net_.source());
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int id : r_.out[v]) {
                const auto& a = r_.arcs[id];
                if (a.residual > 0 && level_[a.head] < 0) {
                    level_[a.head] = level_[v] + 1;
                    q.push(a.head);
                }
            }
        }
        return level_[net_.sink()] >= 0;
    }

    // One augmenting path in the level graph, found by an explicit-stack DFS.
    Capacity augment()
    {
        std::vector<int> path;
        int v = net_.source();
        while (true) {
            if (v == net_.sink()) {
                Capacity bottleneck = std::numeric_limits<Capacity>::max();
                for (int id : path)
                    bottleneck = std::min(bottleneck, r_.arcs[id].residual);
                for (int id : path) {
                    r_.arcs[id].residual -= bottleneck;
                    r_.arcs[id ^ 1].residual += bottleneck;
                }
                return bottleneck;
            }
            bool advanced = false;
            for (auto& i = next_[v]; i < r_.out[v].size(); ++i) {
                const int id = r_.out[v][i];
                const auto& a = r_.arcs[id];
                if (a.residual > 0 && level_[a.head] == level_[v] + 1) {
                    path.push_back(id);
                    v = a.head;
                    advanced = true;
                    break;
                }
            }
            if (advanced)
                continue;
            // Dead end: prune v from the level graph and retreat.
            level_[v] = -1;
            if (path.empty())
                return 0;
            const int back = path.back();
            path.pop_back();
            v = r_.arcs[back ^ 1].head;
            ++next_[v];
        }
    }

    const FlowNetwork& net_;
    Residual r_;
    std::vector<int> level_;
    std::vector<std::size_t> next_;
};

} // namespace

CutResult max_flow(const FlowNetwork& net)
{
    Dinic solver(net);
    CutResult out;
    out.flow_value = solver.run();

    const auto& r = solver.residual();
    out.arc_flow.resize(net.arcs().size());
    for (std::size_t i = 0; i < net.arcs().size(); ++i)
        out.arc_flow[i] = net.arcs()[i].capacity - r.arcs[2 * i].residual;

    out.source_side.assign(net.node_count(), false);
    std::queue<int> q;
    out.source_side[net.source()] = true;
    q.push(net.source());
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int id : r.out[v]) {
            const auto& a = r.arcs[id];
            if (a.residual > 0 && !out.source_side[a.head]) {
                out.source_side[a.head] = true;
                q.push(a.head);
            }
        }
    }
    if (out.source_side[net.sink()])
        throw InternalError("residual path to sink remains after max flow");
    return out;
}

Capacity cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side)
{
    Capacity c = 0;
    for (const auto& a : net.arcs())
        if (source_side[a.tail] && !source_side[a.head])
            c += a.capacity;
    return c;
}

} // namespace kcrit
