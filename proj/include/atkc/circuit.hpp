#ifndef ATKC_CIRCUIT_HPP
#define ATKC_CIRCUIT_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "atkc/cvss.hpp"
#include "atkc/nvd.hpp"
#include "atkc/text.hpp"

namespace atkc::circuit {

struct DegenerateCircuit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class VertexKind { Attacker, Cve, Input, Output, Target };

struct Vertex {
    VertexKind kind;
    std::string label; // unique; vertex order is lexicographic by label
    std::string cve_id;    // Cve/Input/Output vertices
    std::string device_id; // Cve/Target vertices
    std::string phrase;    // Input/Output vertices

    bool operator==(const Vertex&) const = default;
};

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double exploitability = 0.0;
    double impact = 0.0;

    bool operator==(const Edge&) const = default;
};

struct BuildReport {
    std::vector<std::string> dropped_cycle_edges; // "from -> to"
    std::vector<std::string> unreachable_cves;    // CveNode labels off every attacker->target path
};

struct AttackCircuit {
    std::vector<Vertex> vertices; // sorted by label
    std::vector<Edge> edges;      // sorted by (from, to)
    std::map<std::string, std::vector<std::size_t>> cves_by_device;
    std::vector<std::size_t> sources; // Attacker vertices
    std::vector<std::size_t> sinks;   // Target vertices
    BuildReport report;

    std::size_t index_of(const std::string& label) const;
};

enum class Metric { Exploitability, Impact, Risk };

struct BuildOptions {
    double match_threshold = 0.5;
    bool attacker_per_device = false; // insider-threat placement
};

// Jaccard similarity of the Porter-stemmed token sets of two phrases.
double phrase_match(const std::string& output_phrase, const std::string& input_phrase);

AttackCircuit build(const std::map<std::string, std::vector<nvd::CveRecord>>& records_by_device,
                    const std::map<std::string, std::vector<text::IoPair>>& io_pairs_by_cve,
                    const std::map<std::string, cvss::BaseScores>& base_scores_by_cve,
                    const BuildOptions& opts = {});

// DOT digraph with vertices colored by rank quintile of the selected metric
// (green lowest through yellow, orange, red, purple) and edges labeled with
// the selected weight. Byte-deterministic for identical circuits.
std::string to_dot(const AttackCircuit& circuit, Metric metric);

std::string to_json(const AttackCircuit& circuit);
AttackCircuit from_json(const std::string& raw_json);

Metric parse_metric(const std::string& name); // throws std::invalid_argument

} // namespace atkc::circuit

#endif
