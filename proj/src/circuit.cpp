#include "atkc/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace atkc::circuit {

namespace {

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", w);
    return buf;
}

const char* kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Attacker: return "attacker";
        case VertexKind::Cve: return "cve";
        case VertexKind::Input: return "input";
        case VertexKind::Output: return "output";
        case VertexKind::Target: return "target";
    }
    return "?";
}

VertexKind kind_from_name(const std::string& name) {
    if (name == "attacker") return VertexKind::Attacker;
    if (name == "cve") return VertexKind::Cve;
    if (name == "input") return VertexKind::Input;
    if (name == "output") return VertexKind::Output;
    if (name == "target") return VertexKind::Target;
    throw std::invalid_argument("unknown vertex kind " + name);
}

// Label-keyed circuit under construction.
struct Builder {
    std::map<std::string, Vertex> vertices;
    std::map<std::pair<std::string, std::string>, Edge> edges; // weights in Edge, indices unset

    void add_vertex(Vertex v) { vertices.emplace(v.label, std::move(v)); }

    void add_edge(const std::string& from, const std::string& to, double exploitability, double impact) {
        edges.emplace(std::make_pair(from, to), Edge{0, 0, exploitability, impact});
    }

    bool reaches(const std::string& from, const std::string& to) const {
        std::vector<std::string> stack{from};
        std::set<std::string> seen{from};
        while (!stack.empty()) {
            std::string u = stack.back();
            stack.pop_back();
            if (u == to) return true;
            for (const auto& [key, e] : edges) {
                if (key.first == u && !seen.count(key.second)) {
                    seen.insert(key.second);
                    stack.push_back(key.second);
                }
            }
        }
        return false;
    }
};

} // namespace

std::size_t AttackCircuit::index_of(const std::string& label) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), label,
                               [](const Vertex& v, const std::string& l) { return v.label < l; });
    if (it == vertices.end() || it->label != label)
        throw std::out_of_range("no vertex labeled " + label);
    return static_cast<std::size_t>(it - vertices.begin());
}

double phrase_match(const std::string& output_phrase, const std::string& input_phrase) {
    auto a = text::stemmed_token_set(output_phrase);
    auto b = text::stemmed_token_set(input_phrase);
    if (a.empty() && b.empty()) return 0.0;
    std::size_t intersection = 0;
    for (const auto& s : a)
        if (b.count(s)) ++intersection;
    std::size_t unions = a.size() + b.size() - intersection;
    return unions == 0 ? 0.0 : static_cast<double>(intersection) / static_cast<double>(unions);
}

AttackCircuit build(const std::map<std::string, std::vector<nvd::CveRecord>>& records_by_device,
                    const std::map<std::string, std::vector<text::IoPair>>& io_pairs_by_cve,
                    const std::map<std::string, cvss::BaseScores>& base_scores_by_cve,
                    const BuildOptions& opts) {
    Builder b;

    struct CveInfo {
        std::set<std::string> devices;
        std::set<std::string> inputs;
        std::set<std::string> outputs;
        cvss::BaseScores scores;
    };
    std::map<std::string, CveInfo> cves;

    for (const auto& [device, records] : records_by_device) {
        for (const auto& r : records) {
            auto it = base_scores_by_cve.find(r.cve_id);
            if (it == base_scores_by_cve.end())
                throw std::invalid_argument("missing base scores for " + r.cve_id);
            auto& info = cves[r.cve_id];
            info.devices.insert(device);
            info.scores = it->second;
            auto pit = io_pairs_by_cve.find(r.cve_id);
            if (pit != io_pairs_by_cve.end()) {
                for (const auto& pair : pit->second) {
                    info.inputs.insert(pair.input);
                    info.outputs.insert(pair.output);
                }
            }
        }
    }

    // Per-CVE skeleton: Input -> CveNode -> Output, weighted with the CVE's
    // own base scores.
    for (const auto& [cve_id, info] : cves) {
        for (const auto& device : info.devices) {
            std::string cve_label = "cve:" + cve_id + "@" + device;
            b.add_vertex({VertexKind::Cve, cve_label, cve_id, device, ""});
            for (const auto& phrase : info.inputs) {
                std::string in_label = "in:" + phrase + "@" + cve_id;
                b.add_vertex({VertexKind::Input, in_label, cve_id, "", phrase});
                b.add_edge(in_label, cve_label, info.scores.exploitability, info.scores.impact);
            }
            for (const auto& phrase : info.outputs) {
                std::string out_label = "out:" + phrase + "@" + cve_id;
                b.add_vertex({VertexKind::Output, out_label, cve_id, "", phrase});
                b.add_edge(cve_label, out_label, info.scores.exploitability, info.scores.impact);
            }
        }
    }

    // Cross-CVE edges: an output phrase of one CVE that matches an input
    // phrase of another enables that step. Weighted with the exploitability
    // of the enabled CVE and the impact of the enabling one. Candidates are
    // added in lexicographic order; an edge that would close a cycle is
    // dropped and logged.
    BuildReport report;
    std::vector<std::tuple<std::string, std::string, double, double>> candidates;
    for (const auto& [c1, info1] : cves) {
        for (const auto& [c2, info2] : cves) {
            if (c1 == c2) continue;
            for (const auto& out_phrase : info1.outputs) {
                for (const auto& in_phrase : info2.inputs) {
                    if (phrase_match(out_phrase, in_phrase) >= opts.match_threshold) {
                        candidates.emplace_back("out:" + out_phrase + "@" + c1,
                                                "in:" + in_phrase + "@" + c2,
                                                info2.scores.exploitability,
                                                info1.scores.impact);
                    }
                }
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [from, to, eb, ib] : candidates) {
        if (b.reaches(to, from)) {
            report.dropped_cycle_edges.push_back(from + " -> " + to);
            continue;
        }
        b.add_edge(from, to, eb, ib);
    }

    std::set<std::string> has_incoming, has_outgoing;
    for (const auto& [key, e] : b.edges) {
        has_outgoing.insert(key.first);
        has_incoming.insert(key.second);
    }

    // Entry points: inputs no other CVE produces get fed by the attacker.
    // Terminal outputs sink into their owning devices' targets.
    std::size_t attacker_out_degree = 0;
    std::vector<Vertex> io_vertices;
    for (const auto& [label, v] : b.vertices) io_vertices.push_back(v);
    for (const auto& v : io_vertices) {
        if (v.kind == VertexKind::Input && !has_incoming.count(v.label)) {
            const CveInfo& info = cves.at(v.cve_id);
            for (const auto& device : info.devices) {
                std::string attacker_label = opts.attacker_per_device ? "attacker@" + device : "attacker";
                b.add_vertex({VertexKind::Attacker, attacker_label, "", opts.attacker_per_device ? device : "", ""});
                b.add_edge(attacker_label, v.label, info.scores.exploitability, 0.0);
                ++attacker_out_degree;
                if (!opts.attacker_per_device) break;
            }
        }
        if (v.kind == VertexKind::Output && !has_outgoing.count(v.label)) {
            const CveInfo& info = cves.at(v.cve_id);
            for (const auto& device : info.devices) {
                std::string target_label = "target:" + device;
                b.add_vertex({VertexKind::Target, target_label, "", device, ""});
                b.add_edge(v.label, target_label, 0.0, info.scores.impact);
            }
        }
    }

    if (attacker_out_degree == 0)
        throw DegenerateCircuit("degenerate circuit: no entry points (attacker out-degree 0)");
    bool any_target = std::any_of(b.vertices.begin(), b.vertices.end(),
                                  [](const auto& kv) { return kv.second.kind == VertexKind::Target; });
    if (!any_target) throw DegenerateCircuit("degenerate circuit: no sinks");

    AttackCircuit circuit;
    circuit.report = std::move(report);
    std::map<std::string, std::size_t> index;
    for (const auto& [label, v] : b.vertices) {
        index[label] = circuit.vertices.size();
        circuit.vertices.push_back(v);
    }
    for (const auto& [key, e] : b.edges)
        circuit.edges.push_back({index[key.first], index[key.second], e.exploitability, e.impact});
    std::sort(circuit.edges.begin(), circuit.edges.end(), [](const Edge& a, const Edge& b2) {
        return std::tie(a.from, a.to) < std::tie(b2.from, b2.to);
    });

    for (std::size_t i = 0; i < circuit.vertices.size(); ++i) {
        const Vertex& v = circuit.vertices[i];
        if (v.kind == VertexKind::Attacker) circuit.sources.push_back(i);
        if (v.kind == VertexKind::Target) circuit.sinks.push_back(i);
        if (v.kind == VertexKind::Cve) circuit.cves_by_device[v.device_id].push_back(i);
    }

    // Flag CVE vertices that sit on no attacker-to-target path.
    std::vector<std::vector<std::size_t>> fwd(circuit.vertices.size()), rev(circuit.vertices.size());
    for (const auto& e : circuit.edges) {
        fwd[e.from].push_back(e.to);
        rev[e.to].push_back(e.from);
    }
    auto sweep = [&](const std::vector<std::size_t>& seeds, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(circuit.vertices.size(), false);
        std::vector<std::size_t> stack(seeds.begin(), seeds.end());
        for (std::size_t s : seeds) seen[s] = true;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        return seen;
    };
    auto from_attacker = sweep(circuit.sources, fwd);
    auto to_target = sweep(circuit.sinks, rev);
    for (std::size_t i = 0; i < circuit.vertices.size(); ++i)
        if (circuit.vertices[i].kind == VertexKind::Cve && (!from_attacker[i] || !to_target[i]))
            circuit.report.unreachable_cves.push_back(circuit.vertices[i].label);

    return circuit;
}

std::string to_dot(const AttackCircuit& circuit, Metric metric) {
    auto edge_weight = [&](const Edge& e) {
        switch (metric) {
            case Metric::Exploitability: return e.exploitability;
            case Metric::Impact: return e.impact;
            case Metric::Risk: return e.exploitability * e.impact / 10.0;
        }
        return 0.0;
    };

    // Vertex score: strongest incident edge under the selected metric.
    std::vector<double> score(circuit.vertices.size(), 0.0);
    for (const auto& e : circuit.edges) {
        double w = edge_weight(e);
        score[e.from] = std::max(score[e.from], w);
        score[e.to] = std::max(score[e.to], w);
    }
    std::vector<std::size_t> order(circuit.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    static const char* colors[5] = {"green", "yellow", "orange", "red", "purple"};
    std::vector<const char*> color(circuit.vertices.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        color[order[rank]] = colors[rank * 5 / order.size()];

    std::string dot = "digraph attack_circuit {\n";
    for (const auto& v : circuit.vertices) {
        dot += "  \"" + v.label + "\" [kind=" + kind_name(v.kind) + ", color=" +
               color[&v - circuit.vertices.data()] + "];\n";
    }
    for (const auto& e : circuit.edges) {
        dot += "  \"" + circuit.vertices[e.from].label + "\" -> \"" + circuit.vertices[e.to].label +
               "\" [label=\"" + format_weight(edge_weight(e)) + "\"];\n";
    }
    dot += "}\n";
    return dot;
}

std::string to_json(const AttackCircuit& circuit) {
    ordered_json doc;
    doc["vertices"] = ordered_json::array();
    for (const auto& v : circuit.vertices) {
        ordered_json obj;
        obj["label"] = v.label;
        obj["kind"] = kind_name(v.kind);
        obj["cve_id"] = v.cve_id;
        obj["device_id"] = v.device_id;
        obj["phrase"] = v.phrase;
        doc["vertices"].push_back(obj);
    }
    doc["edges"] = ordered_json::array();
    for (const auto& e : circuit.edges) {
        ordered_json obj;
        obj["from"] = circuit.vertices[e.from].label;
        obj["to"] = circuit.vertices[e.to].label;
        obj["exploitability_weight"] = e.exploitability;
        obj["impact_weight"] = e.impact;
        doc["edges"].push_back(obj);
    }
    return doc.dump(2) + "\n";
}

AttackCircuit from_json(const std::string& raw_json) {
    json doc = json::parse(raw_json);
    AttackCircuit circuit;
    for (const auto& obj : doc.at("vertices")) {
        circuit.vertices.push_back({kind_from_name(obj.at("kind").get<std::string>()),
                                    obj.at("label").get<std::string>(),
                                    obj.value("cve_id", ""),
                                    obj.value("device_id", ""),
                                    obj.value("phrase", "")});
    }
    std::sort(circuit.vertices.begin(), circuit.vertices.end(),
              [](const Vertex& a, const Vertex& b) { return a.label < b.label; });
    for (const auto& obj : doc.at("edges")) {
        circuit.edges.push_back({circuit.index_of(obj.at("from").get<std::string>()),
                                 circuit.index_of(obj.at("to").get<std::string>()),
                                 obj.at("exploitability_weight").get<double>(),
                                 obj.at("impact_weight").get<double>()});
    }
    std::sort(circuit.edges.begin(), circuit.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    for (std::size_t i = 0; i < circuit.vertices.size(); ++i) {
        const Vertex& v = circuit.vertices[i];
        if (v.kind == VertexKind::Attacker) circuit.sources.push_back(i);
        if (v.kind == VertexKind::Target) circuit.sinks.push_back(i);
        if (v.kind == VertexKind::Cve) circuit.cves_by_device[v.device_id].push_back(i);
    }
    return circuit;
}

Metric parse_metric(const std::string& name) {
    if (name == "exploitability") return Metric::Exploitability;
    if (name == "impact") return Metric::Impact;
    if (name == "risk") return Metric::Risk;
    throw std::invalid_argument("unknown metric \"" + name + "\" (expected exploitability, impact or risk)");
}

} // namespace atkc::circuit
