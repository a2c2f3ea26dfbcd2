#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "realdyn/families.hpp"

namespace realdyn {

/// Ordered key=value assignments. Assignments are separated by whitespace,
/// ';', ',' or newlines; '#' starts a comment. A value runs until the next
/// "key=" token, so lists such as "mu=0,0.25" need no quoting.
using Assignments = std::vector<std::pair<std::string, std::string>>;

Assignments parse_assignments(std::string_view text);

/// Decimal, scientific or rational ("p/q") number.
double parse_number(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

FamilyKind parse_kind(std::string_view name);

/// Family from its key=value block, e.g. "kind=trig_lift D=1 m=1 mu=0,0.25".
FamilyMap parse_family(std::string_view text);
/// Same, from already-split assignments; unknown keys are an error.
FamilyMap family_from_assignments(const Assignments& kv);
std::string format_family(const FamilyMap& f);

/// Positional CLI form: trig "D,m,mu1..mu2m", cosine/standard "a,b", exponential "a".
FamilyMap family_from_params(std::string_view kind, std::span<const double> params);

}  // namespace realdyn
