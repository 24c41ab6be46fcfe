#include "atkc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

using nlohmann::ordered_json;

namespace atkc::report {

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace

ScoreReport score_all(const std::map<std::string, std::vector<nvd::CveRecord>>& records_by_device,
                      const std::map<std::string, std::vector<text::IoPair>>& io_pairs_by_cve,
                      const std::map<std::string, traffic::Profile>& profiles,
                      const scoring::Config& cfg, const circuit::BuildOptions& build_opts) {
    ScoreReport r;
    r.config = cfg;
    r.notes.push_back("EN and IP multiplier tables are engine defaults, not published values");

    std::map<std::string, cvss::BaseScores> base_by_cve;
    for (const auto& [device, records] : records_by_device)
        for (const auto& rec : records)
            base_by_cve.emplace(rec.cve_id, cvss::base_scores(rec.vector));
    r.cves = base_by_cve;

    circuit::BuildOptions opts = build_opts;
    opts.match_threshold = cfg.match_threshold;
    auto circ = circuit::build(records_by_device, io_pairs_by_cve, base_by_cve, opts);
    r.dropped_cycle_edges = circ.report.dropped_cycle_edges;
    r.unreachable_cves = circ.report.unreachable_cves;

    // One shared flow solve feeds the compositional and risk sums.
    auto risk_net = scoring::risk_network(circ);
    flow::Assignment risk_assignment = cfg.scoring_flow == scoring::FlowProblem::MaxFlow
                                           ? flow::max_flow(risk_net.net)
                                           : flow::min_cost_max_flow(risk_net.net);
    auto flows = scoring::edge_flows(circ, risk_net, risk_assignment);

    auto comp = scoring::compositional(circ, base_by_cve, flows, cfg);
    auto risks = scoring::risk_triple(circ, base_by_cve, flows, cfg);

    bool used_defaults = false;
    double e_arg_total = 0.0;
    for (const auto& [device, records] : records_by_device) {
        DeviceRow row;
        traffic::Profile profile;
        auto pit = profiles.find(device);
        if (pit != profiles.end()) {
            profile = pit->second;
        } else {
            profile = traffic::default_profile(device);
            used_defaults = true;
        }
        // Multiplier tables are config-driven; the profile carries classes.
        profile.nu = scoring::nu_for(cfg, profile.uptime);
        profile.en = profile.encrypted_fraction >= 0.5 ? cfg.en_encrypted : cfg.en_unencrypted;
        profile.ip = profile.blacklist_hits > 0 ? cfg.ip_hit : cfg.ip_clean;

        auto cit = comp.find(device);
        if (cit != comp.end()) {
            row.ec = cit->second.ec;
            row.ic = cit->second.ic;
        }
        std::tie(row.e, row.i) = scoring::final_scores(row.ec, row.ic, profile, cfg);
        auto rit = risks.per_device.find(device);
        if (rit != risks.per_device.end()) row.risk = rit->second;
        row.nu = profile.nu;
        row.en = profile.en;
        row.ip = profile.ip;
        row.uptime_class = traffic::uptime_class_name(profile.uptime);
        e_arg_total += row.ec * profile.nu * profile.en / cfg.vn1;
        r.devices[device] = row;
    }
    if (used_defaults) r.notes.push_back("static profile defaults applied (no traffic data for some devices)");

    // Network scores: devices' pre-sigmoid exploitability arguments summed,
    // normalized once; impact from the max flow of the impact-weighted circuit.
    r.e_network = scoring::sigmoid(e_arg_total);
    auto imp_net = scoring::impact_network(circ);
    auto imp_assignment = flow::max_flow(imp_net.net);
    r.i_network = scoring::sigmoid(flow::unscale(imp_assignment.total_value) / cfg.vn2);
    r.risk_network = risks.network;

    r.paths["impact"] = scoring::path_report(circ, imp_net, imp_assignment);
    auto exp_net = scoring::exploitability_network(circ);
    std::int64_t required = cfg.required_flow < 0 ? flow::max_flow(exp_net.net).total_value
                                                  : flow::scale(cfg.required_flow);
    r.paths["exploitability"] = scoring::path_report(circ, exp_net, flow::min_cost_flow(exp_net.net, required));
    r.paths["risk"] = scoring::path_report(circ, risk_net, risk_assignment);
    return r;
}

std::string to_json(const ScoreReport& r) {
    ordered_json doc;
    ordered_json cfg;
    cfg["dampener"] = r.config.dampener;
    cfg["vn1"] = r.config.vn1;
    cfg["vn2"] = r.config.vn2;
    cfg["vn3"] = r.config.vn3;
    cfg["vn4"] = r.config.vn4;
    cfg["vn5"] = r.config.vn5;
    cfg["match_threshold"] = r.config.match_threshold;
    cfg["sigmoid"] = "tanh";
    cfg["nu_table"] = {{"always_online", r.config.nu_always},
                       {"frequently_online", r.config.nu_frequent},
                       {"rarely_online", r.config.nu_rare},
                       {"never_online", r.config.nu_never}};
    cfg["en_table"] = {{"encrypted_majority", r.config.en_encrypted},
                       {"unencrypted_majority", r.config.en_unencrypted}};
    cfg["ip_table"] = {{"blacklist_hit", r.config.ip_hit}, {"clean", r.config.ip_clean}};
    cfg["scoring_flow"] =
        r.config.scoring_flow == scoring::FlowProblem::MaxFlow ? "max_flow" : "min_cost_max_flow";
    doc["config"] = cfg;
    doc["notes"] = r.notes;

    ordered_json cves;
    for (const auto& [id, b] : r.cves) {
        ordered_json obj;
        obj["eb"] = b.exploitability;
        obj["ib"] = b.impact;
        obj["isc_base"] = b.isc_base;
        obj["impact_metrics"] = {{"conf", b.conf_metric}, {"integ", b.integ_metric}, {"avail", b.avail_metric}};
        cves[id] = obj;
    }
    doc["cves"] = cves;

    ordered_json devices;
    for (const auto& [id, d] : r.devices) {
        ordered_json obj;
        obj["ec"] = d.ec;
        obj["ic"] = d.ic;
        obj["e"] = d.e;
        obj["i"] = d.i;
        obj["r_conf"] = d.risk.conf;
        obj["r_integ"] = d.risk.integ;
        obj["r_avail"] = d.risk.avail;
        obj["multipliers"] = {{"nu", d.nu}, {"en", d.en}, {"ip", d.ip}, {"uptime_class", d.uptime_class}};
        devices[id] = obj;
    }
    doc["devices"] = devices;

    ordered_json network;
    network["e_n"] = r.e_network;
    network["i_n"] = r.i_network;
    network["r_conf"] = r.risk_network.conf;
    network["r_integ"] = r.risk_network.integ;
    network["r_avail"] = r.risk_network.avail;
    ordered_json paths;
    for (const auto& [metric, entries] : r.paths) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : entries) {
            ordered_json obj;
            obj["vertices"] = p.vertices;
            obj["flow"] = p.flow;
            obj["cost"] = p.cost;
            arr.push_back(obj);
        }
        paths[metric] = arr;
    }
    network["paths"] = paths;
    doc["network"] = network;

    doc["dropped_cycle_edges"] = r.dropped_cycle_edges;
    doc["unreachable_cves"] = r.unreachable_cves;
    return doc.dump(2) + "\n";
}

std::string to_table(const ScoreReport& r) {
    std::size_t width = std::string("Network R_Integ").size();
    for (const auto& [id, d] : r.devices) width = std::max(width, id.size() + 8);

    std::string out;
    auto row = [&](const std::string& name, double value) {
        out += name;
        out.append(width + 2 - name.size(), ' ');
        out += fixed4(value);
        out += '\n';
    };
    for (const auto& [id, d] : r.devices) {
        row("E_" + id, d.e);
        row("I_" + id, d.i);
        row(id + " R_Conf", d.risk.conf);
        row(id + " R_Integ", d.risk.integ);
        row(id + " R_Avail", d.risk.avail);
    }
    row("E_Network", r.e_network);
    row("I_Network", r.i_network);
    row("Network R_Conf", r.risk_network.conf);
    row("Network R_Integ", r.risk_network.integ);
    row("Network R_Avail", r.risk_network.avail);
    return out;
}

} // namespace atkc::report
