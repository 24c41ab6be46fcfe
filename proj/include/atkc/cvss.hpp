#ifndef ATKC_CVSS_HPP
#define ATKC_CVSS_HPP

#include <string>

namespace atkc::cvss {

enum class AttackVector { Network, Adjacent, Local, Physical };
enum class AttackComplexity { Low, High };
enum class PrivilegesRequired { None, Low, High };
enum class UserInteraction { None, Required };
enum class Scope { Unchanged, Changed };
enum class ImpactLevel { High, Low, None };

// CVSS v3 base metric vector. Temporal/environmental groups are not modeled.
struct Vector {
    AttackVector av = AttackVector::Network;
    AttackComplexity ac = AttackComplexity::Low;
    PrivilegesRequired pr = PrivilegesRequired::None;
    UserInteraction ui = UserInteraction::None;
    Scope scope = Scope::Unchanged;
    ImpactLevel conf = ImpactLevel::None;
    ImpactLevel integ = ImpactLevel::None;
    ImpactLevel avail = ImpactLevel::None;
    std::string version = "3.1";

    bool operator==(const Vector&) const = default;
};

struct MetricValues {
    double av, ac, pr, ui;
    double conf, integ, avail;
};

// Raw (unrounded) base subscores. exploitability lives on the
// 8.22-scaled axis, impact on the 6.42/7.52 axis.
struct BaseScores {
    double exploitability = 0.0;
    double impact = 0.0;
    double isc_base = 0.0;
    double conf_metric = 0.0;
    double integ_metric = 0.0;
    double avail_metric = 0.0;
};

// Parses "CVSS:3.x/AV:_/AC:_/PR:_/UI:_/S:_/C:_/I:_/A:_".
// Throws std::invalid_argument on malformed input.
Vector parse_vector(const std::string& s);

std::string to_string(const Vector& v);

// Numeric metric values per the CVSS v3 standard table.
MetricValues numeric(const Vector& v);

BaseScores base_scores(const Vector& v);

} // namespace atkc::cvss

#endif
