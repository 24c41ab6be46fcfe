#include "doctest.h"

#include "atkc/nvd.hpp"

using namespace atkc::nvd;

namespace {

std::string feed_item(const std::string& id, const std::string& desc, const std::string& vec,
                      bool with_cvss = true) {
    std::string cvss = with_cvss
                           ? R"("impact":{"baseMetricV3":{"cvssV3":{"vectorString":")" + vec + R"("}}})"
                           : R"("impact":{})";
    return R"({"cve":{"CVE_data_meta":{"ID":")" + id + R"("},"description":{"description_data":[)" +
           R"({"lang":"en","value":")" + desc + R"("}]}},)" + cvss + "}";
}

std::string wrap_feed(const std::vector<std::string>& items) {
    std::string out = R"({"CVE_Items":[)";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out + "]}";
}

const char* kVec = "CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:L/I:N/A:N";

std::string small_catalog() {
    return R"([
        {"device_id": "echo", "device_name": "Amazon Echo",
         "cve_ids": ["CVE-2018-11567"], "ip_addresses": ["192.168.1.10"]},
        {"device_id": "wemo", "device_name": "WeMo Switch",
         "cve_ids": ["CVE-2018-11314", "CVE-2019-0001"],
         "ip_addresses": ["192.168.1.11", "192.168.1.12"]}
    ])";
}

} // namespace

TEST_CASE("feed parsing keeps usable items and counts skips") {
    auto feed = wrap_feed({
        feed_item("CVE-2018-11314", "DNS rebinding issue.", kVec),
        feed_item("CVE-2018-0001", "No vector here.", "", false),
        feed_item("CVE-2018-11567", "Audio trigger issue.", kVec),
    });
    auto r = parse_feed(feed);
    REQUIRE(r.records.size() == 2);
    CHECK(r.skipped == 1);
    CHECK(r.records[0].cve_id == "CVE-2018-11314");
    CHECK(r.records[0].description == "DNS rebinding issue.");
    CHECK(r.records[1].cve_id == "CVE-2018-11567");
    CHECK(r.records[1].vector.version == "3.0");
}

TEST_CASE("malformed feed json names a byte offset") {
    try {
        parse_feed(R"({"CVE_Items":[)");
        FAIL("expected FeedError");
    } catch (const FeedError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("a feed with zero usable items is an error") {
    CHECK_THROWS_AS(parse_feed(R"({"CVE_Items":[]})"), FeedError);
    CHECK_THROWS_AS(parse_feed(wrap_feed({feed_item("CVE-1111-2222", "x", "", false)})), FeedError);
}

TEST_CASE("feed parsing is deterministic") {
    auto feed = wrap_feed({
        feed_item("CVE-2018-11314", "DNS rebinding issue.", kVec),
        feed_item("CVE-2018-11567", "Audio trigger issue.", kVec),
    });
    CHECK(parse_feed(feed).records == parse_feed(feed).records);
}

TEST_CASE("catalog loading and lookup") {
    auto cat = load_catalog(small_catalog());
    REQUIRE(cat.entries.size() == 2);
    const auto* wemo = cat.find("wemo");
    REQUIRE(wemo != nullptr);
    CHECK(wemo->device_name == "WeMo Switch");
    CHECK(wemo->cve_ids.size() == 2);
    CHECK(wemo->ip_addresses.size() == 2);
    CHECK(cat.find("nope") == nullptr);
}

TEST_CASE("catalog validation failures") {
    CHECK_THROWS_AS(load_catalog(R"([
        {"device_id":"a","device_name":"A"},
        {"device_id":"a","device_name":"B"}])"),
                    CatalogError);
    CHECK_THROWS_AS(load_catalog(R"([
        {"device_id":"a","device_name":"A","cve_ids":["CVE-18-1"]}])"),
                    CatalogError);
    CHECK_THROWS_AS(load_catalog(R"({"not":"an array"})"), CatalogError);
    CHECK_THROWS_AS(load_catalog(R"([{"device_name":"no id"}])"), CatalogError);
}

TEST_CASE("cve id validation") {
    CHECK(valid_cve_id("CVE-2018-11314"));
    CHECK(valid_cve_id("CVE-1999-0001"));
    CHECK_FALSE(valid_cve_id("CVE-18-11314"));
    CHECK_FALSE(valid_cve_id("CVE-2018-123"));
    CHECK_FALSE(valid_cve_id("cve-2018-11314"));
}

TEST_CASE("join attributes feed records per device") {
    auto feed = parse_feed(wrap_feed({
        feed_item("CVE-2018-11314", "DNS rebinding issue.", kVec),
        feed_item("CVE-2018-11567", "Audio trigger issue.", kVec),
    }));
    auto cat = load_catalog(small_catalog());
    auto joined = join_catalog(feed.records, cat);
    REQUIRE(joined.by_device.count("echo"));
    REQUIRE(joined.by_device.count("wemo"));
    CHECK(joined.by_device.at("echo").size() == 1);
    CHECK(joined.by_device.at("echo")[0].cve_id == "CVE-2018-11567");
    CHECK(joined.by_device.at("wemo").size() == 1);
    REQUIRE(joined.unresolved.size() == 1);
    CHECK(joined.unresolved[0] == "CVE-2019-0001");
}

TEST_CASE("join keeps the first feed occurrence of a duplicated cve") {
    auto feed = parse_feed(wrap_feed({
        feed_item("CVE-2018-11567", "First description.", kVec),
        feed_item("CVE-2018-11567", "Second description.", kVec),
    }));
    auto joined = join_catalog(feed.records, load_catalog(small_catalog()));
    REQUIRE(joined.by_device.at("echo").size() == 1);
    CHECK(joined.by_device.at("echo")[0].description == "First description.");
}

TEST_CASE("cache round-trips records") {
    auto feed = parse_feed(wrap_feed({feed_item("CVE-2018-11567", "Audio trigger issue.", kVec)}));
    auto joined = join_catalog(feed.records, load_catalog(small_catalog()));
    const auto& records = joined.by_device.at("echo");
    auto restored = cache_from_json(cache_to_json(records), "echo");
    CHECK(restored == records);
}
