#ifndef ATKC_SCORING_HPP
#define ATKC_SCORING_HPP

#include <map>
#include <string>
#include <vector>

#include "atkc/circuit.hpp"
#include "atkc/flow.hpp"
#include "atkc/traffic.hpp"

namespace atkc::scoring {

enum class FlowProblem { MaxFlow, MinCostMaxFlow };

struct Config {
    double dampener = 0.1; // couples neighboring CVEs' contributions
    double vn1 = 100.0;    // exploitability normalizer (used as a divisor)
    double vn2 = 100.0;    // impact normalizer
    double vn3 = 100.0;    // confidentiality risk normalizer
    double vn4 = 100.0;    // integrity risk normalizer
    double vn5 = 100.0;    // availability risk normalizer
    double match_threshold = 0.5;
    double nu_always = 1.6, nu_frequent = 1.4, nu_rare = 1.07, nu_never = 1.0;
    double en_encrypted = 1.0, en_unencrypted = 1.5;
    double ip_hit = 2.0, ip_clean = 1.0;
    // Which flow problem feeds the compositional and risk sums.
    FlowProblem scoring_flow = FlowProblem::MinCostMaxFlow;
    // Required flow for the exploitability (min-cost) problem; <0 means the
    // max-flow value.
    double required_flow = -1.0;
};

double nu_for(const Config& cfg, traffic::UptimeClass c);

// Sigmoidal normalizer into [0, 1).
double sigmoid(double x);

struct Compositional {
    double ec = 0.0;
    double ic = 0.0;
};

struct RiskTriple {
    double conf = 0.0;
    double integ = 0.0;
    double avail = 0.0;
};

struct PathEntry {
    std::vector<std::string> vertices;
    double flow = 0.0;
    double cost = 0.0;
};

// Flow networks derived from a circuit, all reduced to single source/sink
// via a super-source and super-sink. Arcs parallel the circuit's edge order;
// structural arcs (attacker-side in the impact/risk networks, target-side in
// the exploitability network) are uncapacitated conduits.
struct CircuitNetwork {
    flow::Network net;
    std::vector<std::size_t> arc_to_edge; // net arc index -> circuit edge index (or npos)
};

CircuitNetwork impact_network(const circuit::AttackCircuit& c);
CircuitNetwork exploitability_network(const circuit::AttackCircuit& c);
CircuitNetwork risk_network(const circuit::AttackCircuit& c);

// Per-circuit-edge flow in real units, derived from a solved assignment.
std::vector<double> edge_flows(const circuit::AttackCircuit& c, const CircuitNetwork& cn,
                               const flow::Assignment& assignment);

// Compositional device scores: each CVE contributes its base subscores plus
// a dampened, flow-weighted sum over its cross-circuit neighbors.
std::map<std::string, Compositional> compositional(
    const circuit::AttackCircuit& c,
    const std::map<std::string, cvss::BaseScores>& base_scores_by_cve,
    const std::vector<double>& flows_per_edge, const Config& cfg);

// (E_d, I_d): sigmoid-normalized compositional scores with the device's
// activity multipliers applied.
std::pair<double, double> final_scores(double ec, double ic, const traffic::Profile& profile,
                                       const Config& cfg);

// Per-device risk triples from flow through each CVE weighted by its CVSS
// impact metrics; ".network" aggregates over every device's CVEs.
struct RiskResult {
    std::map<std::string, RiskTriple> per_device;
    RiskTriple network;
};

RiskResult risk_triple(const circuit::AttackCircuit& c,
                       const std::map<std::string, cvss::BaseScores>& base_scores_by_cve,
                       const std::vector<double>& flows_per_edge, const Config& cfg);

std::vector<PathEntry> path_report(const circuit::AttackCircuit& c, const CircuitNetwork& cn,
                                   const flow::Assignment& assignment);

} // namespace atkc::scoring

#endif
