#include "atkc/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace atkc::traffic {

namespace {

// Minimal CSV field splitter with double-quote handling.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

const std::set<std::string>& secure_protocols() {
    static const std::set<std::string> protocols = {"TLSv1.2", "TLSv1.3", "TLS", "SSL",
                                                    "QUIC", "SSH", "HTTPS"};
    return protocols;
}

} // namespace

const char* uptime_class_name(UptimeClass c) {
    switch (c) {
        case UptimeClass::AlwaysOnline: return "always_online";
        case UptimeClass::FrequentlyOnline: return "frequently_online";
        case UptimeClass::RarelyOnline: return "rarely_online";
        case UptimeClass::NeverOnline: return "never_online";
    }
    return "?";
}

ParsedLog parse_log(const std::string& csv, const nvd::DeviceCatalog& catalog) {
    std::map<std::string, std::vector<std::string>> devices_by_ip;
    for (const auto& entry : catalog.entries)
        for (const auto& ip : entry.ip_addresses) devices_by_ip[ip].push_back(entry.device_id);

    ParsedLog log;
    for (const auto& entry : catalog.entries) log.by_device[entry.device_id];

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        if (end == std::string::npos) end = csv.size();
        std::string line = csv.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line_no == 1) continue; // header
        if (line.empty() || line == "\r") continue;

        auto fields = split_csv(line);
        if (fields.size() < 6)
            throw FormatError("traffic csv: row " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " columns, expected at least 6");
        PacketRow row;
        try {
            row.index = std::stoll(fields[0]);
            row.time = std::stod(fields[1]);
            row.length = std::stoll(fields[5]);
        } catch (const std::exception&) {
            throw FormatError("traffic csv: row " + std::to_string(line_no) + " has non-numeric No./Time/Length");
        }
        row.source = fields[2];
        row.destination = fields[3];
        row.protocol = fields[4];

        log.total++;
        log.capture_span = std::max(log.capture_span, row.time);

        std::set<std::string> owners;
        auto it = devices_by_ip.find(row.source);
        if (it != devices_by_ip.end()) owners.insert(it->second.begin(), it->second.end());
        it = devices_by_ip.find(row.destination);
        if (it != devices_by_ip.end()) owners.insert(it->second.begin(), it->second.end());
        if (owners.empty()) {
            log.foreign++;
        } else {
            for (const auto& device : owners) log.by_device[device].push_back(row);
        }
    }
    for (auto& [device, rows] : log.by_device)
        std::stable_sort(rows.begin(), rows.end(),
                         [](const PacketRow& a, const PacketRow& b) { return a.time < b.time; });
    return log;
}

UptimeClass uptime_class(const std::vector<PacketRow>& rows, double capture_span,
                         double window_seconds) {
    if (rows.empty()) return UptimeClass::NeverOnline;
    std::int64_t total_windows = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(capture_span / window_seconds)));
    std::set<std::int64_t> active;
    for (const auto& row : rows) {
        std::int64_t w = static_cast<std::int64_t>(row.time / window_seconds);
        active.insert(std::min(w, total_windows - 1));
    }
    double fraction = static_cast<double>(active.size()) / static_cast<double>(total_windows);
    if (fraction >= 0.9) return UptimeClass::AlwaysOnline;
    if (fraction >= 0.4) return UptimeClass::FrequentlyOnline;
    return UptimeClass::RarelyOnline;
}

double nu_multiplier(UptimeClass c) {
    switch (c) {
        case UptimeClass::AlwaysOnline: return 1.6;
        case UptimeClass::FrequentlyOnline: return 1.4;
        case UptimeClass::RarelyOnline: return 1.07;
        case UptimeClass::NeverOnline: return 1.0;
    }
    return 1.0;
}

std::pair<double, double> encryption_metric(const std::vector<PacketRow>& rows) {
    if (rows.empty()) return {0.0, 1.5};
    std::size_t encrypted = 0;
    for (const auto& row : rows)
        if (secure_protocols().count(row.protocol)) ++encrypted;
    double fraction = static_cast<double>(encrypted) / static_cast<double>(rows.size());
    return {fraction, fraction >= 0.5 ? 1.0 : 1.5};
}

std::pair<std::int64_t, double> blacklist_metric(const std::vector<PacketRow>& rows,
                                                 const std::set<std::string>& blacklist) {
    std::int64_t hits = 0;
    for (const auto& row : rows)
        if (blacklist.count(row.source) || blacklist.count(row.destination)) ++hits;
    return {hits, hits > 0 ? 2.0 : 1.0};
}

std::set<std::string> load_blacklist(const std::string& text) {
    std::set<std::string> ips;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) {
            if (end == text.size()) break;
            continue;
        }
        ips.insert(line.substr(first));
        if (end == text.size()) break;
    }
    return ips;
}

Profile default_profile(const std::string& device_id) {
    Profile p;
    p.device_id = device_id;
    p.uptime = UptimeClass::RarelyOnline;
    p.nu = nu_multiplier(p.uptime);
    p.encrypted_fraction = 0.0;
    p.en = 1.5;
    p.blacklist_hits = 0;
    p.ip = 1.0;
    return p;
}

std::map<std::string, Profile> profile_all(const ParsedLog& log, const nvd::DeviceCatalog& catalog,
                                           const std::set<std::string>& blacklist,
                                           double window_seconds, bool parallel) {
    std::vector<const nvd::CatalogEntry*> entries;
    for (const auto& e : catalog.entries) entries.push_back(&e);
    std::vector<Profile> profiles(entries.size());

    auto compute = [&](std::size_t i) {
        const auto& device = entries[i]->device_id;
        static const std::vector<PacketRow> empty;
        auto it = log.by_device.find(device);
        const auto& rows = it == log.by_device.end() ? empty : it->second;
        Profile p;
        p.device_id = device;
        p.uptime = uptime_class(rows, log.capture_span, window_seconds);
        p.nu = nu_multiplier(p.uptime);
        std::tie(p.encrypted_fraction, p.en) = encryption_metric(rows);
        std::tie(p.blacklist_hits, p.ip) = blacklist_metric(rows, blacklist);
        p.window_count = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(log.capture_span / window_seconds)));
        profiles[i] = p;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(entries.size()); ++i) compute(i);
    } else {
        for (std::size_t i = 0; i < entries.size(); ++i) compute(i);
    }

    std::map<std::string, Profile> result;
    for (const auto& p : profiles) result[p.device_id] = p;
    return result;
}

} // namespace atkc::traffic
