#include <json.hpp>

#include "fieldlint/report.hpp"

#ifndef FIELDLINT_VERSION
#define FIELDLINT_VERSION "unknown"
#endif

namespace fieldlint {

std::string_view artifact_version() { return FIELDLINT_VERSION; }

std::string format_json(const std::vector<Report>& reports) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["artifact_version"] = artifact_version();
  doc["reports"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json jr;
    jr["id"] = r.id;
    jr["passed"] = r.passed();
    jr["checks"] = ordered_json::array();
    for (const auto& c : r.checks) {
      ordered_json jc;
      jc["name"] = c.name;
      jc["verdict"] = to_string(c.verdict);
      jc["witness"] = c.witness;
      jc["tolerance"] = c.tolerance ? ordered_json(*c.tolerance) : ordered_json(nullptr);
      jr["checks"].push_back(std::move(jc));
    }
    jr["timing_ms"] = r.elapsed_ms;
    doc["reports"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

std::string format_text(const std::vector<Report>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += r.id + ": " + (r.passed() ? "PASS" : "FAIL") + "\n";
    for (const auto& c : r.checks) {
      out += "  [" + std::string(to_string(c.verdict)) + "] " + c.name;
      if (!c.witness.empty()) out += ": " + c.witness;
      out += "\n";
    }
  }
  return out;
}

}  // namespace fieldlint
