#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "atkc/circuit.hpp"
#include "atkc/nvd.hpp"
#include "atkc/report.hpp"
#include "atkc/scoring.hpp"
#include "atkc/text.hpp"
#include "atkc/traffic.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

struct Options {
    std::vector<std::string> nvd_paths;
    std::string catalog_path;
    std::string traffic_path;
    std::string blacklist_path;
    std::string config_path;
    std::string circuit_path;
    std::string out_dir = ".";
    std::string metric = "risk";
    std::string format = "dot";
    double window_seconds = 600.0;
    std::size_t max_inputs = 2;
    std::size_t max_outputs = 4;
    bool attacker_per_device = false;
    bool parallel = true;
    bool verbose = false;
    atkc::scoring::Config scoring;
};

void apply_config_file(Options& opts, const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            auto& cfg = opts.scoring;
            if (key == "dampener") cfg.dampener = std::stod(value);
            else if (key == "vn1") cfg.vn1 = std::stod(value);
            else if (key == "vn2") cfg.vn2 = std::stod(value);
            else if (key == "vn3") cfg.vn3 = std::stod(value);
            else if (key == "vn4") cfg.vn4 = std::stod(value);
            else if (key == "vn5") cfg.vn5 = std::stod(value);
            else if (key == "match_threshold") cfg.match_threshold = std::stod(value);
            else if (key == "nu_always") cfg.nu_always = std::stod(value);
            else if (key == "nu_frequent") cfg.nu_frequent = std::stod(value);
            else if (key == "nu_rare") cfg.nu_rare = std::stod(value);
            else if (key == "nu_never") cfg.nu_never = std::stod(value);
            else if (key == "en_encrypted") cfg.en_encrypted = std::stod(value);
            else if (key == "en_unencrypted") cfg.en_unencrypted = std::stod(value);
            else if (key == "ip_hit") cfg.ip_hit = std::stod(value);
            else if (key == "ip_clean") cfg.ip_clean = std::stod(value);
            else if (key == "required_flow") cfg.required_flow = std::stod(value);
            else if (key == "scoring_flow")
                cfg.scoring_flow = value == "max_flow" ? atkc::scoring::FlowProblem::MaxFlow
                                                       : atkc::scoring::FlowProblem::MinCostMaxFlow;
            else if (key == "window_seconds") opts.window_seconds = std::stod(value);
            else if (key == "max_inputs") opts.max_inputs = std::stoul(value);
            else if (key == "max_outputs") opts.max_outputs = std::stoul(value);
            else if (key == "attacker") opts.attacker_per_device = (value == "per_device");
            else throw DataError("config " + path + ": unknown key \"" + key + "\"");
        } catch (const std::invalid_argument&) {
            throw DataError("config " + path + " line " + std::to_string(line_no) + ": bad value for " + key);
        }
    }
}

// Everything the pipeline derives from the raw inputs.
struct Pipeline {
    atkc::nvd::DeviceCatalog catalog;
    std::map<std::string, std::vector<atkc::nvd::CveRecord>> records_by_device;
    std::vector<std::string> unresolved;
    int skipped = 0;
    std::map<std::string, std::vector<atkc::text::IoPair>> io_pairs;
    std::map<std::string, atkc::traffic::Profile> profiles;
};

Pipeline run_extraction(const Options& opts) {
    if (opts.nvd_paths.empty()) throw DataError("no NVD feed given (--nvd)");
    if (opts.catalog_path.empty()) throw DataError("no device catalog given (--catalog)");

    Pipeline p;
    p.catalog = atkc::nvd::load_catalog(read_file(opts.catalog_path));
    if (p.catalog.entries.empty()) throw DataError("no devices in catalog " + opts.catalog_path);

    std::vector<atkc::nvd::FeedRecord> feed;
    for (const auto& path : opts.nvd_paths) {
        auto result = atkc::nvd::parse_feed(read_file(path));
        p.skipped += result.skipped;
        feed.insert(feed.end(), result.records.begin(), result.records.end());
    }

    auto joined = atkc::nvd::join_catalog(feed, p.catalog);
    p.records_by_device = std::move(joined.by_device);
    p.unresolved = std::move(joined.unresolved);

    // One corpus over the distinct CVEs of the whole catalog.
    std::map<std::string, std::string> descriptions;
    for (const auto& [device, records] : p.records_by_device)
        for (const auto& r : records) descriptions.emplace(r.cve_id, r.description);
    std::vector<std::pair<std::string, std::string>> raw(descriptions.begin(), descriptions.end());

    atkc::text::ExtractOptions eopts;
    eopts.max_inputs = opts.max_inputs;
    eopts.max_outputs = opts.max_outputs;
    p.io_pairs = atkc::text::run_pipeline(raw, eopts, opts.parallel);

    // An output phrase naming a device other than the CVE's own is not a
    // self-targeted state.
    std::map<std::string, std::set<std::string>> owners;
    for (const auto& [device, records] : p.records_by_device)
        for (const auto& r : records) owners[r.cve_id].insert(device);
    for (auto& [cve_id, pairs] : p.io_pairs) {
        for (auto& pair : pairs) {
            auto stems = atkc::text::stemmed_token_set(pair.output);
            bool foreign = false;
            for (const auto& entry : p.catalog.entries) {
                if (owners[cve_id].count(entry.device_id)) continue;
                for (const auto& s : atkc::text::stemmed_token_set(entry.device_name))
                    if (stems.count(s)) foreign = true;
            }
            pair.self_target = !foreign;
        }
    }

    if (!opts.traffic_path.empty()) {
        std::set<std::string> blacklist;
        if (!opts.blacklist_path.empty())
            blacklist = atkc::traffic::load_blacklist(read_file(opts.blacklist_path));
        auto log = atkc::traffic::parse_log(read_file(opts.traffic_path), p.catalog);
        p.profiles = atkc::traffic::profile_all(log, p.catalog, blacklist, opts.window_seconds,
                                                opts.parallel);
    }
    return p;
}

std::string processed_cve_json(const Pipeline& p, const atkc::nvd::CatalogEntry& entry) {
    ordered_json entries = ordered_json::array();
    auto it = p.records_by_device.find(entry.device_id);
    if (it != p.records_by_device.end()) {
        for (const auto& r : it->second) {
            ordered_json obj;
            obj["description"] = r.description;
            obj["id"] = r.cve_id;
            ordered_json io = ordered_json::array();
            auto pit = p.io_pairs.find(r.cve_id);
            if (pit != p.io_pairs.end())
                for (const auto& pair : pit->second) io.push_back(pair.serialized());
            obj["i/o"] = io;
            entries.push_back(obj);
        }
    }
    ordered_json doc;
    doc[entry.device_name] = entries;
    return doc.dump(2) + "\n";
}

atkc::circuit::AttackCircuit build_circuit(const Pipeline& p, const Options& opts) {
    std::map<std::string, atkc::cvss::BaseScores> base;
    for (const auto& [device, records] : p.records_by_device)
        for (const auto& r : records) base.emplace(r.cve_id, atkc::cvss::base_scores(r.vector));
    atkc::circuit::BuildOptions bopts;
    bopts.match_threshold = opts.scoring.match_threshold;
    bopts.attacker_per_device = opts.attacker_per_device;
    return atkc::circuit::build(p.records_by_device, p.io_pairs, base, bopts);
}

int cmd_extract(const Options& opts) {
    Pipeline p = run_extraction(opts);
    std::vector<fs::path> written;
    try {
        for (const auto& entry : p.catalog.entries) {
            fs::path path = fs::path(opts.out_dir) / (entry.device_id + ".json");
            write_file(path, processed_cve_json(p, entry));
            written.push_back(path);
            fs::path cache = fs::path(opts.out_dir) / "cache" / (entry.device_id + ".json");
            write_file(cache, atkc::nvd::cache_to_json(p.records_by_device.at(entry.device_id)));
            written.push_back(cache);
        }
    } catch (...) {
        for (const auto& path : written) fs::remove(path);
        throw;
    }
    if (p.skipped > 0) std::cerr << "warning: skipped " << p.skipped << " feed items without CVSS v3 or description\n";
    for (const auto& id : p.unresolved) std::cerr << "warning: " << id << " not found in any feed\n";
    bool any = false;
    for (const auto& [device, records] : p.records_by_device) any = any || !records.empty();
    if (!any) std::cerr << "warning: no catalog CVEs present in the feeds; i/o files are empty\n";
    std::cout << "wrote " << written.size() << " files to " << opts.out_dir << "\n";
    return 0;
}

int cmd_build(const Options& opts) {
    Pipeline p = run_extraction(opts);
    auto circuit = build_circuit(p, opts);
    write_file(fs::path(opts.out_dir) / "circuit.json", atkc::circuit::to_json(circuit));
    std::cout << "circuit: " << circuit.vertices.size() << " vertices, " << circuit.edges.size()
              << " edges\n";
    for (const auto& e : circuit.report.dropped_cycle_edges)
        std::cerr << "dropped cycle-closing edge: " << e << "\n";
    for (const auto& c : circuit.report.unreachable_cves) std::cerr << "unreachable: " << c << "\n";
    return 0;
}

atkc::report::ScoreReport make_report(Pipeline& p, const Options& opts) {
    atkc::circuit::BuildOptions bopts;
    bopts.attacker_per_device = opts.attacker_per_device;
    auto r = atkc::report::score_all(p.records_by_device, p.io_pairs, p.profiles, opts.scoring, bopts);
    if (p.profiles.empty()) {
        // already noted by score_all; surface on stderr too
        std::cerr << "note: static profile defaults in effect (no traffic data)\n";
    }
    return r;
}

int cmd_score(const Options& opts) {
    Pipeline p = run_extraction(opts);
    auto r = make_report(p, opts);
    write_file(fs::path(opts.out_dir) / "report.json", atkc::report::to_json(r));
    std::string table = atkc::report::to_table(r);
    write_file(fs::path(opts.out_dir) / "table.txt", table);
    std::cout << table;
    return 0;
}

int cmd_paths(const Options& opts) {
    atkc::circuit::parse_metric(opts.metric); // validated by CLI11 already
    Pipeline p = run_extraction(opts);
    auto r = make_report(p, opts);
    const auto& entries = r.paths.at(opts.metric);
    if (entries.empty()) {
        std::cout << "no " << opts.metric << " paths (zero flow)\n";
        return 0;
    }
    int rank = 1;
    for (const auto& e : entries) {
        std::cout << rank++ << ". flow=" << e.flow << " cost=" << e.cost << "  ";
        for (std::size_t i = 0; i < e.vertices.size(); ++i) {
            if (i) std::cout << " -> ";
            std::cout << e.vertices[i];
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_export(const Options& opts) {
    atkc::circuit::AttackCircuit circuit;
    if (!opts.circuit_path.empty()) {
        circuit = atkc::circuit::from_json(read_file(opts.circuit_path));
    } else if (!opts.nvd_paths.empty() && !opts.catalog_path.empty()) {
        Pipeline p = run_extraction(opts);
        circuit = build_circuit(p, opts);
    } else {
        throw DataError("no circuit: pass --circuit <circuit.json> or --nvd/--catalog inputs");
    }
    auto metric = atkc::circuit::parse_metric(opts.metric);
    if (opts.format == "dot") {
        write_file(fs::path(opts.out_dir) / "circuit.dot", atkc::circuit::to_dot(circuit, metric));
        std::cout << "wrote " << (fs::path(opts.out_dir) / "circuit.dot").string() << "\n";
    } else {
        write_file(fs::path(opts.out_dir) / "circuit.json", atkc::circuit::to_json(circuit));
        std::cout << "wrote " << (fs::path(opts.out_dir) / "circuit.json").string() << "\n";
    }
    return 0;
}

int cmd_report(const Options& opts) {
    int rc = cmd_extract(opts);
    if (rc != 0) return rc;
    Pipeline p = run_extraction(opts);
    auto circuit = build_circuit(p, opts);
    write_file(fs::path(opts.out_dir) / "circuit.json", atkc::circuit::to_json(circuit));
    auto r = make_report(p, opts);
    write_file(fs::path(opts.out_dir) / "report.json", atkc::report::to_json(r));
    std::string table = atkc::report::to_table(r);
    write_file(fs::path(opts.out_dir) / "table.txt", table);
    std::cout << table;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attack-circuit security scoring for IoT networks"};
    app.require_subcommand(1);

    Options opts;
    auto add_common = [&](CLI::App* cmd, bool needs_inputs) {
        cmd->add_option("--nvd", opts.nvd_paths, "NVD JSON feed file(s)")->required(needs_inputs);
        cmd->add_option("--catalog", opts.catalog_path, "device catalog JSON")->required(needs_inputs);
        cmd->add_option("--traffic", opts.traffic_path, "packet log CSV");
        cmd->add_option("--blacklist", opts.blacklist_path, "IP blacklist file");
        cmd->add_option("--config", opts.config_path, "key=value config file");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--match-threshold", opts.scoring.match_threshold,
                        "i/o phrase match threshold");
        cmd->add_flag("--serial", [&](std::int64_t) { opts.parallel = false; },
                      "disable OpenMP parallelism");
        cmd->add_flag("-v,--verbose", opts.verbose, "verbose output");
    };

    auto* extract = app.add_subcommand("extract", "parse feeds and emit processed per-device CVE JSON");
    add_common(extract, true);
    auto* build = app.add_subcommand("build", "build the attack circuit and write its JSON adjacency");
    add_common(build, true);
    auto* score = app.add_subcommand("score", "score devices and network; write report JSON and table");
    add_common(score, true);
    auto* paths = app.add_subcommand("paths", "list optimal attack paths for a metric");
    add_common(paths, true);
    paths->add_option("--metric", opts.metric, "exploitability | impact | risk")
        ->check(CLI::IsMember({"exploitability", "impact", "risk"}));
    auto* exp = app.add_subcommand("export", "export the circuit as DOT or JSON");
    add_common(exp, false);
    exp->add_option("--circuit", opts.circuit_path, "previously built circuit.json");
    exp->add_option("--metric", opts.metric, "exploitability | impact | risk")
        ->check(CLI::IsMember({"exploitability", "impact", "risk"}));
    exp->add_option("--format", opts.format, "dot | json")->check(CLI::IsMember({"dot", "json"}));
    auto* full = app.add_subcommand("report", "run the whole pipeline and write every artifact");
    add_common(full, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (opts.config_path.empty()) {
            if (const char* env = std::getenv("ATTACK_CIRCUIT_CONFIG")) opts.config_path = env;
        }
        // Flags win over config-file values.
        CLI::App* sub = app.get_subcommands().front();
        bool mt_from_flag = sub->count("--match-threshold") > 0;
        double mt_flag_value = opts.scoring.match_threshold;
        if (!opts.config_path.empty()) apply_config_file(opts, opts.config_path);
        if (mt_from_flag) opts.scoring.match_threshold = mt_flag_value;

        if (extract->parsed()) return cmd_extract(opts);
        if (build->parsed()) return cmd_build(opts);
        if (score->parsed()) return cmd_score(opts);
        if (paths->parsed()) return cmd_paths(opts);
        if (exp->parsed()) return cmd_export(opts);
        if (full->parsed()) return cmd_report(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
