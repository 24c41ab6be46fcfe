#include "doctest.h"

#include <random>

#include "atkc/flow.hpp"
#include "oracle.hpp"

using namespace atkc::flow;

namespace {

Network diamond() {
    // s=0 -> {1,2} -> t=3; max flow 4 limited by the 2-capacity arcs.
    Network net;
    net.vertex_count = 4;
    net.source = 0;
    net.sink = 3;
    net.arcs = {{0, 1, 3, 1}, {0, 2, 2, 4}, {1, 3, 2, 1}, {2, 3, 3, 1}};
    return net;
}

Network random_network(std::mt19937& rng) {
    std::uniform_int_distribution<int> nd(4, 8);
    Network net;
    net.vertex_count = nd(rng);
    net.source = 0;
    net.sink = net.vertex_count - 1;
    std::uniform_int_distribution<int> md(3, 10);
    std::uniform_int_distribution<int> vd(0, net.vertex_count - 1);
    std::uniform_int_distribution<int> capd(1, 5);
    std::uniform_int_distribution<int> costd(0, 9);
    int m = md(rng);
    for (int i = 0; i < m; ++i) {
        int from = vd(rng);
        int to = vd(rng);
        if (from == to || from == net.sink || to == net.source) continue;
        net.arcs.push_back({from, to, capd(rng), costd(rng)});
    }
    return net;
}

} // namespace

TEST_CASE("fixed-point helpers") {
    CHECK(scale(1.4124) == 1412);
    CHECK(scale(0.0289) == 29);
    CHECK(scale(-0.0015) == -2);
    CHECK(unscale(1412) == doctest::Approx(1.412));
    CHECK(resistance(10.0) == 0);
    CHECK(resistance(0.0) == 1000);
    CHECK(resistance(1.8345766) == 817);
}

TEST_CASE("single arc network") {
    Network net;
    net.vertex_count = 2;
    net.source = 0;
    net.sink = 1;
    net.arcs = {{0, 1, 7, 3}};
    auto a = max_flow(net);
    CHECK(a.total_value == 7);
    CHECK(a.total_cost == 21);
    CHECK(a.flow == std::vector<std::int64_t>{7});
}

TEST_CASE("diamond max flow") {
    auto a = max_flow(diamond());
    CHECK(a.total_value == 4);
}

TEST_CASE("disconnected sink yields zero flow") {
    Network net;
    net.vertex_count = 3;
    net.source = 0;
    net.sink = 2;
    net.arcs = {{0, 1, 5, 1}};
    CHECK(max_flow(net).total_value == 0);
    CHECK(min_cost_max_flow(net).total_value == 0);
    CHECK_THROWS_AS(min_cost_flow(net, 1), InfeasibleFlow);
}

TEST_CASE("min cost flow prefers the cheap parallel arc") {
    Network net;
    net.vertex_count = 2;
    net.source = 0;
    net.sink = 1;
    net.arcs = {{0, 1, 2, 5}, {0, 1, 2, 1}};
    auto a = min_cost_flow(net, 3);
    CHECK(a.total_value == 3);
    CHECK(a.total_cost == 2 * 1 + 1 * 5);
    CHECK(a.flow[1] == 2);
    CHECK(a.flow[0] == 1);
}

TEST_CASE("min cost flow of a partial requirement matches the oracle") {
    auto a = min_cost_flow(diamond(), 3);
    CHECK(a.total_value == 3);
    CHECK(a.total_cost == oracle::min_cost_value(diamond(), 3));
}

TEST_CASE("infeasible requirement reports the feasible maximum") {
    auto net = diamond();
    try {
        min_cost_flow(net, 5);
        FAIL("expected InfeasibleFlow");
    } catch (const InfeasibleFlow& e) {
        CHECK(e.requested == 5);
        CHECK(e.feasible == 4);
    }
}

TEST_CASE("min cost max flow matches max flow value at oracle cost") {
    auto net = diamond();
    auto a = min_cost_max_flow(net);
    CHECK(a.total_value == 4);
    CHECK(a.total_cost == oracle::min_cost_value(net, 4));
}

TEST_CASE("check_feasible rejects corrupted assignments") {
    auto net = diamond();
    auto a = max_flow(net);
    CHECK_NOTHROW(check_feasible(net, a));
    auto broken = a;
    broken.flow[0] += 1;
    CHECK_THROWS_AS(check_feasible(net, broken), std::logic_error);
    broken = a;
    broken.flow[2] = net.arcs[2].capacity + 1;
    CHECK_THROWS_AS(check_feasible(net, broken), std::logic_error);
}

TEST_CASE("decomposition of the diamond covers the assignment") {
    auto net = diamond();
    auto a = max_flow(net);
    auto paths = decompose(net, a);
    std::int64_t total = 0;
    for (const auto& p : paths) {
        CHECK(p.vertices.front() == net.source);
        CHECK(p.vertices.back() == net.sink);
        total += p.amount;
    }
    CHECK(total == a.total_value);
    // The optimum splits evenly across the two branches.
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].amount == 2);
    CHECK(paths[1].amount == 2);
    // Ranked by flow descending.
    for (std::size_t i = 1; i < paths.size(); ++i) CHECK(paths[i - 1].amount >= paths[i].amount);
}

TEST_CASE("randomized agreement with brute-force oracles") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        auto net = random_network(rng);
        std::int64_t want = oracle::max_flow_value(net);
        auto mf = max_flow(net);
        REQUIRE(mf.total_value == want);
        auto mcmf = min_cost_max_flow(net);
        REQUIRE(mcmf.total_value == want);
        REQUIRE(mcmf.total_cost == oracle::min_cost_value(net, want));
        if (want > 0) {
            auto partial = min_cost_flow(net, want / 2 + 1);
            REQUIRE(partial.total_cost == oracle::min_cost_value(net, want / 2 + 1));
        }
    }
}
