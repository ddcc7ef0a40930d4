#pragma once

// One JSON object per line for every check record.

#include <json.hpp>
#include <ostream>
#include <span>
#include <string>

#include "haarlib/invariance.hpp"

namespace haarlib {

/// Fields in fixed order. Exact values replace estimate/reference as "p/q"
/// strings; non-finite numbers become null.
nlohmann::ordered_json report_json(const CheckReport& r);
std::string report_line(const CheckReport& r);
void write_reports(std::ostream& out, std::span<const CheckReport> reports);

}  // namespace haarlib
