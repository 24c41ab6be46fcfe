#ifndef ATKC_NVD_HPP
#define ATKC_NVD_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "atkc/cvss.hpp"

namespace atkc::nvd {

struct FeedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FeedRecord {
    std::string cve_id;
    std::string description;
    cvss::Vector vector;

    bool operator==(const FeedRecord&) const = default;
};

struct FeedResult {
    std::vector<FeedRecord> records;
    int skipped = 0; // items lacking an English description or a CVSS v3 vector
};

struct CatalogEntry {
    std::string device_id;
    std::string device_name;
    std::vector<std::string> cve_ids;
    std::vector<std::string> ip_addresses;
};

struct DeviceCatalog {
    std::vector<CatalogEntry> entries;

    const CatalogEntry* find(const std::string& device_id) const;
};

// One vulnerability attributed to one device. The same CVE may appear
// under several devices.
struct CveRecord {
    std::string cve_id;
    std::string description;
    cvss::Vector vector;
    std::string device_id;

    bool operator==(const CveRecord&) const = default;
};

struct JoinResult {
    std::map<std::string, std::vector<CveRecord>> by_device;
    std::vector<std::string> unresolved; // catalog cve_ids absent from the feed
};

// Parses an NVD 1.1 JSON feed (CVE_Items array). Items without an English
// description or a cvssV3 block are skipped and counted. Throws FeedError on
// malformed JSON (message carries the byte offset) or a feed with zero
// usable items.
FeedResult parse_feed(const std::string& raw_json);

// Loads and validates a device catalog. Throws CatalogError on duplicate
// device ids or cve ids not matching CVE-<4 digits>-<4+ digits>.
DeviceCatalog load_catalog(const std::string& raw_json);

bool valid_cve_id(const std::string& id);

JoinResult join_catalog(const std::vector<FeedRecord>& feed, const DeviceCatalog& catalog);

// Normalized per-device cache: a JSON array of {id, description, cvss}.
std::string cache_to_json(const std::vector<CveRecord>& records);
std::vector<CveRecord> cache_from_json(const std::string& raw_json, const std::string& device_id);

} // namespace atkc::nvd

#endif
