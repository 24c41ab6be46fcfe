#ifndef ATKC_TRAFFIC_HPP
#define ATKC_TRAFFIC_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "atkc/nvd.hpp"

namespace atkc::traffic {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One row of a packet-capture CSV export
// (No., Time, Source, Destination, Protocol, Length, Info).
struct PacketRow {
    std::int64_t index = 0;
    double time = 0.0; // seconds since capture start
    std::string source;
    std::string destination;
    std::string protocol;
    std::int64_t length = 0;
};

struct ParsedLog {
    std::map<std::string, std::vector<PacketRow>> by_device; // rows sorted by time
    std::int64_t foreign = 0; // rows touching no catalog device
    std::int64_t total = 0;
    double capture_span = 0.0; // max timestamp over the whole file
};

enum class UptimeClass { AlwaysOnline, FrequentlyOnline, RarelyOnline, NeverOnline };

const char* uptime_class_name(UptimeClass c);

struct Profile {
    std::string device_id;
    UptimeClass uptime = UptimeClass::NeverOnline;
    double nu = 1.0;
    double encrypted_fraction = 0.0;
    double en = 1.5;
    std::int64_t blacklist_hits = 0;
    double ip = 1.0;
    std::int64_t window_count = 0;
};

// Attributes every row to each catalog device whose IP matches its source or
// destination. Throws FormatError naming the first bad row.
ParsedLog parse_log(const std::string& csv, const nvd::DeviceCatalog& catalog);

// Online fraction = windows with >= 1 packet / total windows;
// >= 0.9 always, >= 0.4 frequently, > 0 rarely, else never.
UptimeClass uptime_class(const std::vector<PacketRow>& rows, double capture_span,
                         double window_seconds = 600.0);

double nu_multiplier(UptimeClass c);

// (encrypted packet fraction, EN multiplier: 1.0 encrypted-majority, else 1.5).
std::pair<double, double> encryption_metric(const std::vector<PacketRow>& rows);

// (rows touching a blacklisted IP, IP multiplier: 2.0 on any hit, else 1.0).
std::pair<std::int64_t, double> blacklist_metric(const std::vector<PacketRow>& rows,
                                                 const std::set<std::string>& blacklist);

// Newline-delimited IPs, '#' comments and blank lines allowed.
std::set<std::string> load_blacklist(const std::string& text);

// Static defaults when no traffic was captured for a device:
// rarely online, unencrypted, no blacklist contact.
Profile default_profile(const std::string& device_id);

std::map<std::string, Profile> profile_all(const ParsedLog& log, const nvd::DeviceCatalog& catalog,
                                           const std::set<std::string>& blacklist,
                                           double window_seconds = 600.0, bool parallel = false);

} // namespace atkc::traffic

#endif
