#include "atkc/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace atkc::flow {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Residual graph: arc k maps to edges 2k (forward) and 2k+1 (backward).
struct Residual {
    std::vector<int> head;
    std::vector<std::int64_t> cap;
    std::vector<std::int64_t> cost;
    std::vector<std::vector<int>> adj;

    explicit Residual(const Network& net) : adj(net.vertex_count) {
        for (const Arc& a : net.arcs) {
            adj[a.from].push_back(static_cast<int>(head.size()));
            head.push_back(a.to);
            cap.push_back(a.capacity);
            cost.push_back(a.cost);
            adj[a.to].push_back(static_cast<int>(head.size()));
            head.push_back(a.from);
            cap.push_back(0);
            cost.push_back(-a.cost);
        }
    }

    std::int64_t flow_on(int arc_index) const { return cap[2 * arc_index + 1]; }
};

Assignment collect(const Network& net, const Residual& r) {
    Assignment a;
    a.flow.resize(net.arcs.size());
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        a.flow[k] = r.flow_on(static_cast<int>(k));
        a.total_cost += a.flow[k] * net.arcs[k].cost;
    }
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        if (net.arcs[k].from == net.source) a.total_value += a.flow[k];
        if (net.arcs[k].to == net.source) a.total_value -= a.flow[k];
    }
    check_feasible(net, a);
    return a;
}

// Successive shortest paths with vertex potentials; augments until `limit`
// units are shipped or the sink becomes unreachable. Returns units shipped.
std::int64_t ssp(const Network& net, Residual& r, std::int64_t limit) {
    const int n = net.vertex_count;
    std::vector<std::int64_t> potential(n, 0);
    std::int64_t shipped = 0;
    while (shipped < limit) {
        std::vector<std::int64_t> dist(n, kInf);
        std::vector<int> parent_edge(n, -1);
        using Item = std::pair<std::int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
        dist[net.source] = 0;
        queue.push({0, net.source});
        while (!queue.empty()) {
            auto [d, u] = queue.top();
            queue.pop();
            if (d > dist[u]) continue;
            for (int e : r.adj[u]) {
                if (r.cap[e] <= 0) continue;
                int v = r.head[e];
                std::int64_t nd = d + r.cost[e] + potential[u] - potential[v];
                if (nd < dist[v]) {
                    dist[v] = nd;
                    parent_edge[v] = e;
                    queue.push({nd, v});
                }
            }
        }
        if (dist[net.sink] >= kInf) break;
        for (int v = 0; v < n; ++v)
            if (dist[v] < kInf) potential[v] += dist[v];

        std::int64_t bottleneck = limit - shipped;
        for (int v = net.sink; v != net.source;) {
            int e = parent_edge[v];
            bottleneck = std::min(bottleneck, r.cap[e]);
            v = r.head[e ^ 1];
        }
        for (int v = net.sink; v != net.source;) {
            int e = parent_edge[v];
            r.cap[e] -= bottleneck;
            r.cap[e ^ 1] += bottleneck;
            v = r.head[e ^ 1];
        }
        shipped += bottleneck;
    }
    return shipped;
}

} // namespace

std::int64_t scale(double weight) {
    return static_cast<std::int64_t>(std::llround(weight * static_cast<double>(kScale)));
}

double unscale(std::int64_t fixed) {
    return static_cast<double>(fixed) / static_cast<double>(kScale);
}

std::int64_t resistance(double exploitability_weight) {
    return static_cast<std::int64_t>(std::llround(kScale * (1.0 - exploitability_weight / 10.0)));
}

Assignment max_flow(const Network& net) {
    Residual r(net);
    // Edmonds-Karp: BFS shortest augmenting paths, edges scanned in input order.
    while (true) {
        std::vector<int> parent_edge(net.vertex_count, -1);
        std::vector<bool> seen(net.vertex_count, false);
        std::queue<int> queue;
        queue.push(net.source);
        seen[net.source] = true;
        while (!queue.empty() && !seen[net.sink]) {
            int u = queue.front();
            queue.pop();
            for (int e : r.adj[u]) {
                int v = r.head[e];
                if (r.cap[e] > 0 && !seen[v]) {
                    seen[v] = true;
                    parent_edge[v] = e;
                    queue.push(v);
                }
            }
        }
        if (!seen[net.sink]) break;
        std::int64_t bottleneck = kInf;
        for (int v = net.sink; v != net.source;) {
            int e = parent_edge[v];
            bottleneck = std::min(bottleneck, r.cap[e]);
            v = r.head[e ^ 1];
        }
        for (int v = net.sink; v != net.source;) {
            int e = parent_edge[v];
            r.cap[e] -= bottleneck;
            r.cap[e ^ 1] += bottleneck;
            v = r.head[e ^ 1];
        }
    }
    return collect(net, r);
}

Assignment min_cost_flow(const Network& net, std::int64_t required) {
    Residual r(net);
    std::int64_t shipped = ssp(net, r, required);
    if (shipped < required) throw InfeasibleFlow(required, shipped);
    return collect(net, r);
}

Assignment min_cost_max_flow(const Network& net) {
    Residual r(net);
    ssp(net, r, kInf);
    return collect(net, r);
}

void check_feasible(const Network& net, const Assignment& assignment) {
    if (assignment.flow.size() != net.arcs.size())
        throw std::logic_error("flow assignment size mismatch");
    std::vector<std::int64_t> balance(net.vertex_count, 0);
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        std::int64_t f = assignment.flow[k];
        if (f < 0 || f > net.arcs[k].capacity)
            throw std::logic_error("arc flow outside [0, capacity]");
        balance[net.arcs[k].from] += f;
        balance[net.arcs[k].to] -= f;
    }
    for (int v = 0; v < net.vertex_count; ++v) {
        if (v == net.source || v == net.sink) continue;
        if (balance[v] != 0) throw std::logic_error("flow conservation violated at vertex " + std::to_string(v));
    }
    if (balance[net.source] != assignment.total_value)
        throw std::logic_error("total_value inconsistent with source balance");
}

std::vector<PathFlow> decompose(const Network& net, const Assignment& assignment) {
    std::vector<std::int64_t> remaining = assignment.flow;
    std::vector<std::vector<std::size_t>> out(net.vertex_count);
    for (std::size_t k = 0; k < net.arcs.size(); ++k) out[net.arcs[k].from].push_back(k);

    std::vector<PathFlow> paths;
    while (true) {
        // Greedy walk from source along positive-flow arcs, lowest arc index
        // first. Visited marking guards against zero-contribution cycles.
        std::vector<std::size_t> trail;
        std::vector<bool> visited(net.vertex_count, false);
        int u = net.source;
        visited[u] = true;
        while (u != net.sink) {
            bool advanced = false;
            for (std::size_t k : out[u]) {
                if (remaining[k] > 0 && !visited[net.arcs[k].to]) {
                    trail.push_back(k);
                    u = net.arcs[k].to;
                    visited[u] = true;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
        if (u != net.sink || trail.empty()) break;

        PathFlow p;
        p.amount = kInf;
        for (std::size_t k : trail) p.amount = std::min(p.amount, remaining[k]);
        p.vertices.push_back(net.source);
        for (std::size_t k : trail) {
            p.vertices.push_back(net.arcs[k].to);
            p.cost += net.arcs[k].cost;
            remaining[k] -= p.amount;
        }
        paths.push_back(std::move(p));
    }
    std::stable_sort(paths.begin(), paths.end(), [](const PathFlow& a, const PathFlow& b) {
        if (a.amount != b.amount) return a.amount > b.amount;
        return a.cost < b.cost;
    });
    return paths;
}

} // namespace atkc::flow
