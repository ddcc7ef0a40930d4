#include "haarlib/report.hpp"

#include <cmath>

namespace haarlib {

namespace {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["group"] = r.group;
  if (r.exact_estimate) {
    j["estimate"] = *r.exact_estimate;
  } else {
    j["estimate"] = number(r.estimate);
  }
  if (r.exact_reference) {
    j["reference"] = *r.exact_reference;
  } else if (r.reference) {
    j["reference"] = number(*r.reference);
  } else {
    j["reference"] = nullptr;
  }
  j["deviation"] = number(r.max_rel_deviation);
  j["tolerance"] = number(r.tolerance);
  j["passed"] = r.passed;
  j["seed"] = r.seed;
  j["paper_ref"] = r.anchor;
  j["samples"] = r.samples;
  j["expect_failure"] = r.expect_failure;
  for (const auto& [k, v] : r.fields) j[k] = v;
  return j;
}

std::string report_line(const CheckReport& r) { return report_json(r).dump(); }

void write_reports(std::ostream& out, std::span<const CheckReport> reports) {
  for (const auto& r : reports) out << report_line(r) << '\n';
  out.flush();
}

}  // namespace haarlib
