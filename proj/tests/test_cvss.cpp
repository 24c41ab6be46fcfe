#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "atkc/cvss.hpp"

using namespace atkc::cvss;

namespace {

std::vector<Vector> all_vectors() {
    std::vector<Vector> out;
    for (int av = 0; av < 4; ++av)
        for (int ac = 0; ac < 2; ++ac)
            for (int pr = 0; pr < 3; ++pr)
                for (int ui = 0; ui < 2; ++ui)
                    for (int sc = 0; sc < 2; ++sc)
                        for (int ci = 0; ci < 3; ++ci)
                            for (int ii = 0; ii < 3; ++ii)
                                for (int ai = 0; ai < 3; ++ai) {
                                    Vector v;
                                    v.av = static_cast<AttackVector>(av);
                                    v.ac = static_cast<AttackComplexity>(ac);
                                    v.pr = static_cast<PrivilegesRequired>(pr);
                                    v.ui = static_cast<UserInteraction>(ui);
                                    v.scope = static_cast<Scope>(sc);
                                    v.conf = static_cast<ImpactLevel>(ci);
                                    v.integ = static_cast<ImpactLevel>(ii);
                                    v.avail = static_cast<ImpactLevel>(ai);
                                    out.push_back(v);
                                }
    return out;
}

} // namespace

TEST_CASE("vector string parsing") {
    Vector v = parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:L/I:N/A:N");
    CHECK(v.av == AttackVector::Network);
    CHECK(v.ac == AttackComplexity::Low);
    CHECK(v.pr == PrivilegesRequired::None);
    CHECK(v.ui == UserInteraction::None);
    CHECK(v.scope == Scope::Unchanged);
    CHECK(v.conf == ImpactLevel::Low);
    CHECK(v.integ == ImpactLevel::None);
    CHECK(v.avail == ImpactLevel::None);
    CHECK(v.version == "3.0");

    CHECK_THROWS_AS(parse_vector("CVSS:2.0/AV:N/AC:L/PR:N/UI:N/S:U/C:L/I:N/A:N"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector("AV:N/AC:L/PR:N/UI:N/S:U/C:L/I:N/A:N"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector("CVSS:3.1/AV:X/AC:L/PR:N/UI:N/S:U/C:L/I:N/A:N"), std::invalid_argument);
}

TEST_CASE("round-trip over every valid vector") {
    for (const auto& v : all_vectors()) {
        CHECK(parse_vector(to_string(v)) == v);
    }
}

TEST_CASE("numeric metric table") {
    Vector v;
    v.av = AttackVector::Network;
    CHECK(numeric(v).av == doctest::Approx(0.85));
    v.conf = ImpactLevel::None;
    CHECK(numeric(v).conf == doctest::Approx(0.0));
    v.pr = PrivilegesRequired::Low;
    v.scope = Scope::Changed;
    CHECK(numeric(v).pr == doctest::Approx(0.68));
    v.scope = Scope::Unchanged;
    CHECK(numeric(v).pr == doctest::Approx(0.62));
    v.av = AttackVector::Physical;
    CHECK(numeric(v).av == doctest::Approx(0.2));
}

TEST_CASE("base exploitability of AV:N/AC:L/PR:N/UI:N") {
    auto b = base_scores(parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N"));
    CHECK(b.exploitability == doctest::Approx(3.887).epsilon(0).scale(1).epsilon(0.001 / 3.887));
    CHECK(b.exploitability == doctest::Approx(8.22 * 0.85 * 0.77 * 0.85 * 0.85));
}

TEST_CASE("base impact of C:L scope unchanged") {
    auto b = base_scores(parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:L/I:N/A:N"));
    CHECK(b.isc_base == doctest::Approx(0.22));
    CHECK(b.impact == doctest::Approx(1.4124));
}

TEST_CASE("base exploitability of AV:L/AC:L/PR:N/UI:R") {
    auto b = base_scores(parse_vector("CVSS:3.0/AV:L/AC:L/PR:N/UI:R/S:U/C:L/I:N/A:N"));
    CHECK(b.exploitability == doctest::Approx(1.835).epsilon(0.001));
}

TEST_CASE("scope-changed impact with full C/I/A") {
    auto b = base_scores(parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:C/C:H/I:H/A:H"));
    CHECK(b.impact == doctest::Approx(6.048).epsilon(0.005 / 6.048));
}

TEST_CASE("zero impact vector") {
    auto b = base_scores(parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N"));
    CHECK(b.isc_base == 0.0);
    CHECK(b.impact == 0.0);
}

TEST_CASE("impact and exploitability invariants over every vector") {
    for (const auto& v : all_vectors()) {
        auto b = base_scores(v);
        CHECK(b.exploitability > 0.0);
        CHECK(b.isc_base >= 0.0);
        CHECK(b.isc_base <= 0.914816 + 1e-12);
        CHECK(b.impact <= 6.05);
        CHECK((b.impact == 0.0) == (b.isc_base == 0.0));

        // Raising a single impact dimension never decreases the impact score.
        if (v.conf != ImpactLevel::High) {
            Vector raised = v;
            raised.conf = v.conf == ImpactLevel::None ? ImpactLevel::Low : ImpactLevel::High;
            CHECK(base_scores(raised).impact >= b.impact - 1e-12);
        }
        // Easing exploitability metrics never decreases the exploitability score.
        if (v.ac == AttackComplexity::High) {
            Vector eased = v;
            eased.ac = AttackComplexity::Low;
            CHECK(base_scores(eased).exploitability >= b.exploitability);
        }
        if (v.pr != PrivilegesRequired::None) {
            Vector eased = v;
            eased.pr = v.pr == PrivilegesRequired::High ? PrivilegesRequired::Low : PrivilegesRequired::None;
            CHECK(base_scores(eased).exploitability >= b.exploitability);
        }
        if (v.ui == UserInteraction::Required) {
            Vector eased = v;
            eased.ui = UserInteraction::None;
            CHECK(base_scores(eased).exploitability >= b.exploitability);
        }
        if (v.av != AttackVector::Network) {
            Vector eased = v;
            eased.av = AttackVector::Network;
            CHECK(base_scores(eased).exploitability >= b.exploitability);
        }
    }
}
