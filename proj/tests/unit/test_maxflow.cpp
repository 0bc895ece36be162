#include "kcrit/error.hpp"
#include "kcrit/maxflow.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace kcrit;

namespace {

// Minimum over all s-t cuts by enumeration.
Capacity brute_min_cut(const FlowNetwork& net)
{
    const int n = net.node_count();
    Capacity best = -1;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (!((mask >> net.source()) & 1) || ((mask >> net.sink()) & 1))
            continue;
        std::vector<bool> side(n);
        for (int v = 0; v < n; ++v)
            side[v] = (mask >> v) & 1;
        const Capacity c = cut_capacity(net, side);
        if (best < 0 || c < best)
            best = c;
    }
    return best;
}

FlowNetwork random_network(std::mt19937_64& rng, int n, int arcs)
{
    FlowNetwork net(n, 0, n - 1);
    for (int i = 0; i < arcs; ++i) {
        const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
        if (a != b)
            net.add_arc(a, b, static_cast<Capacity>(rng() % 20));
    }
    return net;
}

void check_flow_invariants(const FlowNetwork& net, const CutResult& r)
{
    std::vector<Capacity> balance(net.node_count(), 0);
    for (std::size_t i = 0; i < net.arcs().size(); ++i) {
        const auto& a = net.arcs()[i];
        CHECK(r.arc_flow[i] >= 0);
        CHECK(r.arc_flow[i] <= a.capacity);
        balance[a.tail] -= r.arc_flow[i];
        balance[a.head] += r.arc_flow[i];
    }
    for (int v = 0; v < net.node_count(); ++v)
        if (v != net.source() && v != net.sink())
            CHECK(balance[v] == 0);
    CHECK(balance[net.sink()] == r.flow_value);
    CHECK(r.source_side[net.source()]);
    CHECK_FALSE(r.source_side[net.sink()]);
    CHECK(cut_capacity(net, r.source_side) == r.flow_value);
}

} // namespace

TEST_CASE("small networks")
{
    FlowNetwork one(2, 0, 1);
    one.add_arc(0, 1, 7);
    const auto r = max_flow(one);
    CHECK(r.flow_value == 7);
    CHECK(r.source_side == std::vector<bool>{true, false});

    FlowNetwork two(4, 0, 3);
    two.add_arc(0, 1, 3);
    two.add_arc(0, 2, 3);
    two.add_arc(1, 3, 2);
    two.add_arc(2, 3, 2);
    const auto r2 = max_flow(two);
    CHECK(r2.flow_value == 4);
    check_flow_invariants(two, r2);
}

TEST_CASE("construction errors")
{
    CHECK_THROWS_AS(FlowNetwork(2, 0, 0), DomainError);
    FlowNetwork net(2, 0, 1);
    CHECK_THROWS_AS(net.add_arc(0, 1, -1), DomainError);
    net.add_arc(0, 1, std::numeric_limits<Capacity>::max() / 4);
    CHECK_THROWS_AS(net.add_arc(0, 1, 1), DomainError);
}

TEST_CASE("max flow equals brute-force min cut and is order independent")
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const auto net = random_network(rng, n, static_cast<int>(rng() % 30));
        const auto r = max_flow(net);
        check_flow_invariants(net, r);
        CHECK(r.flow_value == brute_min_cut(net));

        auto arcs = net.arcs();
        std::shuffle(arcs.begin(), arcs.end(), rng);
        FlowNetwork shuffled(n, 0, n - 1);
        for (const auto& a : arcs)
            shuffled.add_arc(a.tail, a.head, a.capacity);
        const auto rs = max_flow(shuffled);
        CHECK(rs.flow_value == r.flow_value);
        // The residual-reachable side of a minimum cut is the unique minimal source side.
        CHECK(rs.source_side == r.source_side);
    }
}
