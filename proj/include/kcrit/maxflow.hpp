#pragma once

#include <cstdint>
#include <vector>

namespace kcrit {

using Capacity = std::int64_t;

struct FlowArc {
    int tail = 0;
    int head = 0;
    Capacity capacity = 0;
};

/// Integer-capacity directed network with a designated source and sink.
class FlowNetwork {
public:
    FlowNetwork(int nodes, int source, int sink);

    /// Returns the arc index. Negative capacities and totals that could overflow throw DomainError.
    int add_arc(int tail, int head, Capacity capacity);

    int node_count() const { return nodes_; }
    int source() const { return source_; }
    int sink() const { return sink_; }
    const std::vector<FlowArc>& arcs() const { return arcs_; }
    Capacity total_capacity() const { return total_; }

private:
    int nodes_;
    int source_;
    int sink_;
    Capacity total_ = 0;
    std::vector<FlowArc> arcs_;
};

struct CutResult {
    Capacity flow_value = 0;
    /// Nodes reachable from the source in the final residual network (the canonical minimum cut).
    std::vector<bool> source_side;
    /// Flow on each input arc, index-aligned with FlowNetwork::arcs().
    std::vector<Capacity> arc_flow;

    bool in_source_side(int node) const { return source_side[node]; }
};

/// Exact maximum flow by blocking flows on BFS level graphs.
CutResult max_flow(const FlowNetwork& net);

/// Capacity of the cut defined by `source_side`, recomputed from the arc list.
Capacity cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side);

} // namespace kcrit
