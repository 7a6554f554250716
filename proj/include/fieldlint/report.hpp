#ifndef FIELDLINT_REPORT_HPP
#define FIELDLINT_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fieldlint {

enum class Verdict { Pass, Fail, Info };

std::string_view to_string(Verdict v);

struct Check {
  std::string name;
  Verdict verdict = Verdict::Info;
  /// Rendered DSL expression or number backing the verdict.
  std::string witness;
  std::optional<double> tolerance;
};

struct Report {
  std::string id;
  std::vector<Check> checks;
  double elapsed_ms = 0.0;

  void add(std::string name, Verdict verdict, std::string witness = {},
           std::optional<double> tolerance = std::nullopt) {
    checks.push_back(Check{std::move(name), verdict, std::move(witness), tolerance});
  }

  /// True when no check failed.
  bool passed() const;
};

/// Version string embedded in serialized reports.
std::string_view artifact_version();

/// {"artifact_version", "reports": [{"id", "passed", "checks": [{"name",
/// "verdict", "witness", "tolerance"}], "timing_ms"}]} with keys in this
/// order.  See docs/report-schema.json.
std::string format_json(const std::vector<Report>& reports);

/// One header line per report and one line per check; timing is omitted
/// so the output is stable across runs.
std::string format_text(const std::vector<Report>& reports);

}  // namespace fieldlint

#endif  // FIELDLINT_REPORT_HPP
