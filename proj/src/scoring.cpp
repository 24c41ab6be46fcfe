#include "atkc/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atkc::scoring {

namespace {

constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

enum class NetKind { Impact, Exploitability, Risk };

CircuitNetwork make_network(const circuit::AttackCircuit& c, NetKind kind) {
    CircuitNetwork cn;
    const int n = static_cast<int>(c.vertices.size());
    cn.net.vertex_count = n + 2;
    cn.net.source = n;
    cn.net.sink = n + 1;

    std::int64_t finite_total = 0;
    for (const auto& e : c.edges)
        finite_total += flow::scale(kind == NetKind::Exploitability ? e.exploitability : e.impact);
    const std::int64_t uncapped = finite_total + 10 * flow::kScale + 1;

    for (std::size_t k = 0; k < c.edges.size(); ++k) {
        const auto& e = c.edges[k];
        flow::Arc arc;
        arc.from = static_cast<int>(e.from);
        arc.to = static_cast<int>(e.to);
        bool structural = false;
        if (kind == NetKind::Exploitability) {
            // Target-side edges carry no exploitability of their own; they
            // are conduits into the sink.
            structural = c.vertices[e.to].kind == circuit::VertexKind::Target;
            arc.capacity = structural ? uncapped : flow::scale(e.exploitability);
            arc.cost = flow::resistance(e.exploitability);
        } else {
            // Attacker-side edges carry no impact of their own.
            structural = c.vertices[e.from].kind == circuit::VertexKind::Attacker;
            arc.capacity = structural ? uncapped : flow::scale(e.impact);
            arc.cost = kind == NetKind::Risk ? flow::resistance(e.exploitability) : 0;
        }
        cn.net.arcs.push_back(arc);
        cn.arc_to_edge.push_back(k);
    }
    for (std::size_t s : c.sources) {
        cn.net.arcs.push_back({cn.net.source, static_cast<int>(s), uncapped, 0});
        cn.arc_to_edge.push_back(kNoEdge);
    }
    for (std::size_t t : c.sinks) {
        cn.net.arcs.push_back({static_cast<int>(t), cn.net.sink, uncapped, 0});
        cn.arc_to_edge.push_back(kNoEdge);
    }
    return cn;
}

} // namespace

double nu_for(const Config& cfg, traffic::UptimeClass c) {
    switch (c) {
        case traffic::UptimeClass::AlwaysOnline: return cfg.nu_always;
        case traffic::UptimeClass::FrequentlyOnline: return cfg.nu_frequent;
        case traffic::UptimeClass::RarelyOnline: return cfg.nu_rare;
        case traffic::UptimeClass::NeverOnline: return cfg.nu_never;
    }
    return cfg.nu_never;
}

double sigmoid(double x) {
    return std::tanh(x);
}

CircuitNetwork impact_network(const circuit::AttackCircuit& c) {
    return make_network(c, NetKind::Impact);
}

CircuitNetwork exploitability_network(const circuit::AttackCircuit& c) {
    return make_network(c, NetKind::Exploitability);
}

CircuitNetwork risk_network(const circuit::AttackCircuit& c) {
    return make_network(c, NetKind::Risk);
}

std::vector<double> edge_flows(const circuit::AttackCircuit& c, const CircuitNetwork& cn,
                               const flow::Assignment& assignment) {
    std::vector<double> flows(c.edges.size(), 0.0);
    for (std::size_t a = 0; a < cn.arc_to_edge.size(); ++a)
        if (cn.arc_to_edge[a] != kNoEdge)
            flows[cn.arc_to_edge[a]] += flow::unscale(assignment.flow[a]);
    return flows;
}

std::map<std::string, Compositional> compositional(
    const circuit::AttackCircuit& c,
    const std::map<std::string, cvss::BaseScores>& base_scores_by_cve,
    const std::vector<double>& flows_per_edge, const Config& cfg) {
    // Flow-weighted coupling over cross-CVE edges (output of one CVE feeding
    // an input of another).
    std::map<std::string, double> in_sum;  // cve -> sum f * upstream EB
    std::map<std::string, double> out_sum; // cve -> sum f * downstream IB
    for (std::size_t k = 0; k < c.edges.size(); ++k) {
        const auto& e = c.edges[k];
        const auto& from = c.vertices[e.from];
        const auto& to = c.vertices[e.to];
        if (from.kind != circuit::VertexKind::Output || to.kind != circuit::VertexKind::Input) continue;
        double f = flows_per_edge[k];
        in_sum[to.cve_id] += f * base_scores_by_cve.at(from.cve_id).exploitability;
        out_sum[from.cve_id] += f * base_scores_by_cve.at(to.cve_id).impact;
    }

    std::map<std::string, Compositional> result;
    for (const auto& [device, cve_vertices] : c.cves_by_device) {
        Compositional comp;
        for (std::size_t vi : cve_vertices) {
            const std::string& cve_id = c.vertices[vi].cve_id;
            const auto& base = base_scores_by_cve.at(cve_id);
            auto in_it = in_sum.find(cve_id);
            auto out_it = out_sum.find(cve_id);
            comp.ec += base.exploitability + cfg.dampener * (in_it == in_sum.end() ? 0.0 : in_it->second);
            comp.ic += base.impact + cfg.dampener * (out_it == out_sum.end() ? 0.0 : out_it->second);
        }
        result[device] = comp;
    }
    return result;
}

std::pair<double, double> final_scores(double ec, double ic, const traffic::Profile& profile,
                                       const Config& cfg) {
    double e = sigmoid(ec * profile.nu * profile.en / cfg.vn1);
    double i = sigmoid(ic * profile.ip / cfg.vn2);
    return {e, i};
}

RiskResult risk_triple(const circuit::AttackCircuit& c,
                       const std::map<std::string, cvss::BaseScores>& base_scores_by_cve,
                       const std::vector<double>& flows_per_edge, const Config& cfg) {
    // Flow through a CVE vertex = its total inbound flow.
    std::vector<double> inflow(c.vertices.size(), 0.0);
    for (std::size_t k = 0; k < c.edges.size(); ++k)
        inflow[c.edges[k].to] += flows_per_edge[k];

    RiskResult result;
    double net_conf = 0.0, net_integ = 0.0, net_avail = 0.0;
    for (const auto& [device, cve_vertices] : c.cves_by_device) {
        double conf = 0.0, integ = 0.0, avail = 0.0;
        for (std::size_t vi : cve_vertices) {
            const auto& base = base_scores_by_cve.at(c.vertices[vi].cve_id);
            conf += base.conf_metric * inflow[vi];
            integ += base.integ_metric * inflow[vi];
            avail += base.avail_metric * inflow[vi];
        }
        result.per_device[device] = {sigmoid(conf / cfg.vn3), sigmoid(integ / cfg.vn4),
                                     sigmoid(avail / cfg.vn5)};
        net_conf += conf;
        net_integ += integ;
        net_avail += avail;
    }
    result.network = {sigmoid(net_conf / cfg.vn3), sigmoid(net_integ / cfg.vn4),
                      sigmoid(net_avail / cfg.vn5)};
    return result;
}

std::vector<PathEntry> path_report(const circuit::AttackCircuit& c, const CircuitNetwork& cn,
                                   const flow::Assignment& assignment) {
    auto decomposed = flow::decompose(cn.net, assignment);
    std::vector<PathEntry> entries;
    for (const auto& p : decomposed) {
        PathEntry entry;
        for (int v : p.vertices)
            if (v < static_cast<int>(c.vertices.size())) entry.vertices.push_back(c.vertices[v].label);
        entry.flow = flow::unscale(p.amount);
        entry.cost = flow::unscale(p.cost);
        entries.push_back(std::move(entry));
    }
    return entries;
}

} // namespace atkc::scoring
