#include "atkc/cvss.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace atkc::cvss {

namespace {

[[noreturn]] void bad(const std::string& s, const std::string& why) {
    throw std::invalid_argument("invalid CVSS v3 vector \"" + s + "\": " + why);
}

} // namespace

Vector parse_vector(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '/')) parts.push_back(item);
    if (parts.size() != 9) bad(s, "expected 9 '/'-separated fields");
    if (parts[0] != "CVSS:3.0" && parts[0] != "CVSS:3.1") bad(s, "unsupported prefix " + parts[0]);

    Vector v;
    v.version = parts[0].substr(5);
    const char* keys[8] = {"AV", "AC", "PR", "UI", "S", "C", "I", "A"};
    std::string vals[8];
    for (int i = 0; i < 8; ++i) {
        const std::string& p = parts[i + 1];
        std::string key = keys[i];
        if (p.size() < key.size() + 2 || p.compare(0, key.size(), key) != 0 || p[key.size()] != ':')
            bad(s, "expected field " + key + ", got \"" + p + "\"");
        vals[i] = p.substr(key.size() + 1);
    }
    auto impact = [&](const std::string& x, const char* field) {
        if (x == "H") return ImpactLevel::High;
        if (x == "L") return ImpactLevel::Low;
        if (x == "N") return ImpactLevel::None;
        bad(s, std::string("bad value for ") + field);
    };
    if (vals[0] == "N") v.av = AttackVector::Network;
    else if (vals[0] == "A") v.av = AttackVector::Adjacent;
    else if (vals[0] == "L") v.av = AttackVector::Local;
    else if (vals[0] == "P") v.av = AttackVector::Physical;
    else bad(s, "bad value for AV");
    if (vals[1] == "L") v.ac = AttackComplexity::Low;
    else if (vals[1] == "H") v.ac = AttackComplexity::High;
    else bad(s, "bad value for AC");
    if (vals[2] == "N") v.pr = PrivilegesRequired::None;
    else if (vals[2] == "L") v.pr = PrivilegesRequired::Low;
    else if (vals[2] == "H") v.pr = PrivilegesRequired::High;
    else bad(s, "bad value for PR");
    if (vals[3] == "N") v.ui = UserInteraction::None;
    else if (vals[3] == "R") v.ui = UserInteraction::Required;
    else bad(s, "bad value for UI");
    if (vals[4] == "U") v.scope = Scope::Unchanged;
    else if (vals[4] == "C") v.scope = Scope::Changed;
    else bad(s, "bad value for S");
    v.conf = impact(vals[5], "C");
    v.integ = impact(vals[6], "I");
    v.avail = impact(vals[7], "A");
    return v;
}

std::string to_string(const Vector& v) {
    auto imp = [](ImpactLevel l) {
        switch (l) {
            case ImpactLevel::High: return "H";
            case ImpactLevel::Low: return "L";
            default: return "N";
        }
    };
    std::string s = "CVSS:" + v.version;
    s += "/AV:";
    switch (v.av) {
        case AttackVector::Network: s += "N"; break;
        case AttackVector::Adjacent: s += "A"; break;
        case AttackVector::Local: s += "L"; break;
        case AttackVector::Physical: s += "P"; break;
    }
    s += (v.ac == AttackComplexity::Low) ? "/AC:L" : "/AC:H";
    switch (v.pr) {
        case PrivilegesRequired::None: s += "/PR:N"; break;
        case PrivilegesRequired::Low: s += "/PR:L"; break;
        case PrivilegesRequired::High: s += "/PR:H"; break;
    }
    s += (v.ui == UserInteraction::None) ? "/UI:N" : "/UI:R";
    s += (v.scope == Scope::Unchanged) ? "/S:U" : "/S:C";
    s += std::string("/C:") + imp(v.conf);
    s += std::string("/I:") + imp(v.integ);
    s += std::string("/A:") + imp(v.avail);
    return s;
}

MetricValues numeric(const Vector& v) {
    MetricValues m{};
    switch (v.av) {
        case AttackVector::Network: m.av = 0.85; break;
        case AttackVector::Adjacent: m.av = 0.62; break;
        case AttackVector::Local: m.av = 0.55; break;
        case AttackVector::Physical: m.av = 0.2; break;
    }
    m.ac = (v.ac == AttackComplexity::Low) ? 0.77 : 0.44;
    // PR values depend on scope.
    switch (v.pr) {
        case PrivilegesRequired::None: m.pr = 0.85; break;
        case PrivilegesRequired::Low: m.pr = (v.scope == Scope::Changed) ? 0.68 : 0.62; break;
        case PrivilegesRequired::High: m.pr = (v.scope == Scope::Changed) ? 0.5 : 0.27; break;
    }
    m.ui = (v.ui == UserInteraction::None) ? 0.85 : 0.62;
    auto imp = [](ImpactLevel l) {
        switch (l) {
            case ImpactLevel::High: return 0.56;
            case ImpactLevel::Low: return 0.22;
            default: return 0.0;
        }
    };
    m.conf = imp(v.conf);
    m.integ = imp(v.integ);
    m.avail = imp(v.avail);
    return m;
}

BaseScores base_scores(const Vector& v) {
    MetricValues m = numeric(v);
    BaseScores b;
    b.conf_metric = m.conf;
    b.integ_metric = m.integ;
    b.avail_metric = m.avail;
    b.exploitability = 8.22 * m.av * m.ac * m.pr * m.ui;
    b.isc_base = 1.0 - (1.0 - m.conf) * (1.0 - m.integ) * (1.0 - m.avail);
    if (v.scope == Scope::Unchanged) {
        b.impact = 6.42 * b.isc_base;
    } else {
        b.impact = 7.52 * (b.isc_base - 0.029) - 3.25 * std::pow(b.isc_base - 0.02, 15.0);
    }
    // Zero impact in every dimension means zero impact subscore, even on the
    // Changed branch, whose polynomial would otherwise go slightly negative.
    if (b.isc_base <= 0.0) b.impact = 0.0;
    return b;
}

} // namespace atkc::cvss
