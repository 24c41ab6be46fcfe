#ifndef ATKC_FLOW_HPP
#define ATKC_FLOW_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace atkc::flow {

// Real-valued edge weights are carried as fixed-point integers
// (weight * kScale, rounded half away from zero), so flow conservation
// checks are exact.
constexpr std::int64_t kScale = 1000;

struct InfeasibleFlow : std::runtime_error {
    InfeasibleFlow(std::int64_t requested, std::int64_t feasible)
        : std::runtime_error("required flow " + std::to_string(requested) +
                             " exceeds maximum feasible value " + std::to_string(feasible)),
          requested(requested),
          feasible(feasible) {}
    std::int64_t requested;
    std::int64_t feasible;
};

struct Arc {
    int from = 0;
    int to = 0;
    std::int64_t capacity = 0;
    std::int64_t cost = 0;
};

struct Network {
    int vertex_count = 0;
    std::vector<Arc> arcs;
    int source = 0;
    int sink = 0;
};

struct Assignment {
    std::vector<std::int64_t> flow; // parallel to Network::arcs
    std::int64_t total_value = 0;
    std::int64_t total_cost = 0;
};

std::int64_t scale(double weight);
double unscale(std::int64_t fixed);

// Edge cost as inverse exploitability: round(kScale * (1 - weight/10)),
// with the weight on the CVSS exploitability axis [0, 10].
std::int64_t resistance(double exploitability_weight);

// Shortest-augmenting-path maximum flow. Deterministic; an unreachable sink
// yields value 0.
Assignment max_flow(const Network& net);

// Ships exactly `required` units at minimum cost (successive shortest paths
// with vertex potentials). Throws InfeasibleFlow when required exceeds the
// maximum flow value.
Assignment min_cost_flow(const Network& net, std::int64_t required);

// Maximum flow value; among all maximum flows, minimum total cost.
Assignment min_cost_max_flow(const Network& net);

// Asserts capacity and conservation constraints; throws std::logic_error on
// violation. Every solver calls this before returning.
void check_feasible(const Network& net, const Assignment& assignment);

struct PathFlow {
    std::vector<int> vertices;
    std::int64_t amount = 0;
    std::int64_t cost = 0;
};

// Standard flow decomposition into at most |arcs| source-to-sink paths,
// ranked by flow descending then cost ascending.
std::vector<PathFlow> decompose(const Network& net, const Assignment& assignment);

} // namespace atkc::flow

#endif
