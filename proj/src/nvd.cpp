#include "atkc/nvd.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "json.hpp"

using nlohmann::json;

namespace atkc::nvd {

const CatalogEntry* DeviceCatalog::find(const std::string& device_id) const {
    for (const auto& e : entries)
        if (e.device_id == device_id) return &e;
    return nullptr;
}

bool valid_cve_id(const std::string& id) {
    static const std::regex re("CVE-[0-9]{4}-[0-9]{4,}");
    return std::regex_match(id, re);
}

FeedResult parse_feed(const std::string& raw_json) {
    json doc;
    try {
        doc = json::parse(raw_json);
    } catch (const json::parse_error& e) {
        throw FeedError("NVD feed: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.contains("CVE_Items") || !doc["CVE_Items"].is_array())
        throw FeedError("NVD feed: missing CVE_Items array");

    FeedResult result;
    for (const auto& item : doc["CVE_Items"]) {
        std::string id = item.value("cve", json::object())
                             .value("CVE_data_meta", json::object())
                             .value("ID", "");
        std::string description;
        if (item.contains("cve") && item["cve"].contains("description")) {
            for (const auto& d : item["cve"]["description"].value("description_data", json::array())) {
                if (d.value("lang", "") == "en") {
                    description = d.value("value", "");
                    break;
                }
            }
        }
        std::string vector_string;
        if (item.contains("impact") && item["impact"].contains("baseMetricV3"))
            vector_string = item["impact"]["baseMetricV3"].value("cvssV3", json::object()).value("vectorString", "");

        if (id.empty() || description.empty() || vector_string.empty()) {
            result.skipped++;
            continue;
        }
        try {
            result.records.push_back({id, description, cvss::parse_vector(vector_string)});
        } catch (const std::invalid_argument&) {
            result.skipped++;
        }
    }
    if (result.records.empty())
        throw FeedError("NVD feed: no usable items (" + std::to_string(result.skipped) + " skipped)");
    return result;
}

DeviceCatalog load_catalog(const std::string& raw_json) {
    json doc;
    try {
        doc = json::parse(raw_json);
    } catch (const json::parse_error& e) {
        throw CatalogError("catalog: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_array()) throw CatalogError("catalog: expected a JSON array of devices");

    DeviceCatalog catalog;
    std::set<std::string> seen;
    for (const auto& item : doc) {
        CatalogEntry e;
        e.device_id = item.value("device_id", "");
        e.device_name = item.value("device_name", e.device_id);
        if (e.device_id.empty()) throw CatalogError("catalog: entry without device_id");
        if (!seen.insert(e.device_id).second)
            throw CatalogError("catalog: duplicate device_id " + e.device_id);
        for (const auto& c : item.value("cve_ids", json::array())) {
            std::string id = c.get<std::string>();
            if (!valid_cve_id(id))
                throw CatalogError("catalog: device " + e.device_id + " has malformed cve id " + id);
            e.cve_ids.push_back(id);
        }
        for (const auto& ip : item.value("ip_addresses", json::array()))
            e.ip_addresses.push_back(ip.get<std::string>());
        catalog.entries.push_back(std::move(e));
    }
    return catalog;
}

JoinResult join_catalog(const std::vector<FeedRecord>& feed, const DeviceCatalog& catalog) {
    JoinResult result;
    std::map<std::string, const FeedRecord*> by_id;
    for (const auto& r : feed)
        if (!by_id.count(r.cve_id)) by_id[r.cve_id] = &r;

    std::set<std::string> missing;
    for (const auto& entry : catalog.entries) {
        auto& records = result.by_device[entry.device_id]; // every device is present, even if empty
        std::set<std::string> device_seen;
        for (const auto& id : entry.cve_ids) {
            if (!device_seen.insert(id).second) continue;
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                missing.insert(id);
                continue;
            }
            records.push_back({it->second->cve_id, it->second->description, it->second->vector, entry.device_id});
        }
    }
    result.unresolved.assign(missing.begin(), missing.end());
    return result;
}

std::string cache_to_json(const std::vector<CveRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
        json obj;
        obj["id"] = r.cve_id;
        obj["description"] = r.description;
        obj["cvss"] = cvss::to_string(r.vector);
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

std::vector<CveRecord> cache_from_json(const std::string& raw_json, const std::string& device_id) {
    json arr;
    try {
        arr = json::parse(raw_json);
    } catch (const json::parse_error& e) {
        throw FeedError("cache: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    std::vector<CveRecord> records;
    for (const auto& obj : arr) {
        records.push_back({obj.at("id").get<std::string>(),
                           obj.at("description").get<std::string>(),
                           cvss::parse_vector(obj.at("cvss").get<std::string>()),
                           device_id});
    }
    return records;
}

} // namespace atkc::nvd
