#include "doctest.h"

#include "atkc/traffic.hpp"

using namespace atkc::traffic;

namespace {

atkc::nvd::DeviceCatalog two_device_catalog() {
    atkc::nvd::DeviceCatalog cat;
    cat.entries.push_back({"echo", "Amazon Echo", {}, {"192.168.1.10"}});
    cat.entries.push_back({"wemo", "WeMo Switch", {}, {"192.168.1.11"}});
    return cat;
}

const char* kHeader = "\"No.\",\"Time\",\"Source\",\"Destination\",\"Protocol\",\"Length\",\"Info\"\n";

std::string row(int no, double t, const std::string& src, const std::string& dst,
                const std::string& proto, int len, const std::string& info = "info") {
    return "\"" + std::to_string(no) + "\",\"" + std::to_string(t) + "\",\"" + src + "\",\"" +
           dst + "\",\"" + proto + "\",\"" + std::to_string(len) + "\",\"" + info + "\"\n";
}

} // namespace

TEST_CASE("log parsing attributes rows by source or destination ip") {
    std::string csv = std::string(kHeader) +
                      row(1, 0.5, "192.168.1.10", "8.8.8.8", "TLSv1.2", 120) +
                      row(2, 1.5, "10.0.0.1", "192.168.1.11", "HTTP", 64) +
                      row(3, 2.0, "1.1.1.1", "2.2.2.2", "DNS", 80);
    auto log = parse_log(csv, two_device_catalog());
    CHECK(log.total == 3);
    CHECK(log.foreign == 1);
    CHECK(log.capture_span == doctest::Approx(2.0));
    REQUIRE(log.by_device.at("echo").size() == 1);
    CHECK(log.by_device.at("echo")[0].protocol == "TLSv1.2");
    REQUIRE(log.by_device.at("wemo").size() == 1);
    CHECK(log.by_device.at("wemo")[0].length == 64);
}

TEST_CASE("quoted fields with embedded commas parse cleanly") {
    std::string csv = std::string(kHeader) +
                      "\"1\",\"0.1\",\"192.168.1.10\",\"8.8.8.8\",\"DNS\",\"70\",\"query, response\"\n";
    auto log = parse_log(csv, two_device_catalog());
    CHECK(log.total == 1);
    CHECK(log.foreign == 0);
}

TEST_CASE("short rows raise a format error naming the row") {
    std::string csv = std::string(kHeader) + "\"1\",\"0.1\",\"x\"\n";
    try {
        parse_log(csv, two_device_catalog());
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_log(std::string(kHeader) + row(1, 0, "a", "b", "P", 1).replace(1, 1, "x"),
                              two_device_catalog()),
                    FormatError);
}

TEST_CASE("uptime classification thresholds") {
    auto rows_at = [](std::initializer_list<double> times) {
        std::vector<PacketRow> rows;
        for (double t : times) rows.push_back({0, t, "", "", "", 0});
        return rows;
    };
    // 10 windows of 600 s over a 6000 s capture.
    CHECK(uptime_class({}, 6000.0) == UptimeClass::NeverOnline);
    CHECK(uptime_class(rows_at({100}), 6000.0) == UptimeClass::RarelyOnline);
    CHECK(uptime_class(rows_at({100, 700, 1300, 1900}), 6000.0) == UptimeClass::FrequentlyOnline);
    CHECK(uptime_class(rows_at({100, 700, 1300, 1900, 2500, 3100, 3700, 4300, 4900}), 6000.0) ==
          UptimeClass::AlwaysOnline);
}

TEST_CASE("network use multipliers") {
    CHECK(nu_multiplier(UptimeClass::AlwaysOnline) == doctest::Approx(1.6));
    CHECK(nu_multiplier(UptimeClass::FrequentlyOnline) == doctest::Approx(1.4));
    CHECK(nu_multiplier(UptimeClass::RarelyOnline) == doctest::Approx(1.07));
    CHECK(nu_multiplier(UptimeClass::NeverOnline) == doctest::Approx(1.0));
}

TEST_CASE("encryption metric") {
    std::vector<PacketRow> rows = {{1, 0, "", "", "TLSv1.2", 0},
                                   {2, 1, "", "", "HTTP", 0},
                                   {3, 2, "", "", "SSH", 0}};
    auto [fraction, en] = encryption_metric(rows);
    CHECK(fraction == doctest::Approx(2.0 / 3.0));
    CHECK(en == doctest::Approx(1.0));
    rows.push_back({4, 3, "", "", "HTTP", 0});
    rows.push_back({5, 4, "", "", "UDP", 0});
    auto [f2, en2] = encryption_metric(rows);
    CHECK(f2 == doctest::Approx(0.4));
    CHECK(en2 == doctest::Approx(1.5));
}

TEST_CASE("blacklist metric and file loading") {
    auto blacklist = load_blacklist("# known C2 hosts\n6.6.6.6\n  7.7.7.7  # spam\n\n");
    CHECK(blacklist == std::set<std::string>{"6.6.6.6", "7.7.7.7"});
    std::vector<PacketRow> rows = {{1, 0, "192.168.1.10", "6.6.6.6", "HTTP", 0},
                                   {2, 1, "192.168.1.10", "8.8.8.8", "HTTP", 0}};
    auto [hits, ip] = blacklist_metric(rows, blacklist);
    CHECK(hits == 1);
    CHECK(ip == doctest::Approx(2.0));
    auto [no_hits, ip_clean] = blacklist_metric(rows, {});
    CHECK(no_hits == 0);
    CHECK(ip_clean == doctest::Approx(1.0));
}

TEST_CASE("default profile for devices without traffic data") {
    auto p = default_profile("echo");
    CHECK(p.uptime == UptimeClass::RarelyOnline);
    CHECK(p.nu == doctest::Approx(1.07));
    CHECK(p.en == doctest::Approx(1.5));
    CHECK(p.ip == doctest::Approx(1.0));
}

TEST_CASE("profile_all covers every catalog device, serial == parallel") {
    std::string csv = std::string(kHeader);
    for (int i = 0; i < 9; ++i)
        csv += row(i + 1, i * 600.0 + 10.0, "192.168.1.10", "8.8.8.8", "TLSv1.2", 100);
    csv += row(100, 5900.0, "192.168.1.10", "8.8.8.8", "TLSv1.2", 100);
    auto catalog = two_device_catalog();
    auto log = parse_log(csv, catalog);
    auto serial = profile_all(log, catalog, {"8.8.8.8"}, 600.0, false);
    auto parallel = profile_all(log, catalog, {"8.8.8.8"}, 600.0, true);
    REQUIRE(serial.size() == 2);
    CHECK(serial.at("echo").uptime == UptimeClass::AlwaysOnline);
    CHECK(serial.at("echo").en == doctest::Approx(1.0));
    CHECK(serial.at("echo").ip == doctest::Approx(2.0));
    CHECK(serial.at("wemo").uptime == UptimeClass::NeverOnline);
    for (const auto& [device, p] : serial) {
        const auto& q = parallel.at(device);
        CHECK(p.uptime == q.uptime);
        CHECK(p.nu == q.nu);
        CHECK(p.encrypted_fraction == q.encrypted_fraction);
        CHECK(p.en == q.en);
        CHECK(p.blacklist_hits == q.blacklist_hits);
        CHECK(p.ip == q.ip);
    }
}
