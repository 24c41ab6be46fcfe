#ifndef ATKC_REPORT_HPP
#define ATKC_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "atkc/circuit.hpp"
#include "atkc/nvd.hpp"
#include "atkc/scoring.hpp"
#include "atkc/text.hpp"
#include "atkc/traffic.hpp"

namespace atkc::report {

struct DeviceRow {
    double ec = 0.0, ic = 0.0;
    double e = 0.0, i = 0.0;
    scoring::RiskTriple risk;
    double nu = 1.0, en = 1.5, ip = 1.0;
    std::string uptime_class = "rarely_online";
};

struct ScoreReport {
    scoring::Config config;
    std::map<std::string, cvss::BaseScores> cves;
    std::map<std::string, DeviceRow> devices;
    double e_network = 0.0;
    double i_network = 0.0;
    scoring::RiskTriple risk_network;
    std::map<std::string, std::vector<scoring::PathEntry>> paths; // keyed by metric name
    std::vector<std::string> notes;
    std::vector<std::string> dropped_cycle_edges;
    std::vector<std::string> unreachable_cves;
};

// Full build -> solve -> score pass over already-extracted inputs. Devices
// without a traffic profile get the static defaults and a report note.
ScoreReport score_all(const std::map<std::string, std::vector<nvd::CveRecord>>& records_by_device,
                      const std::map<std::string, std::vector<text::IoPair>>& io_pairs_by_cve,
                      const std::map<std::string, traffic::Profile>& profiles,
                      const scoring::Config& cfg, const circuit::BuildOptions& build_opts = {});

std::string to_json(const ScoreReport& r);

// Text table: E, I and the three risk components per device, then the
// network rows.
std::string to_table(const ScoreReport& r);

} // namespace atkc::report

#endif
