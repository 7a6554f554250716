#ifndef FIELDLINT_SCENARIOS_HPP
#define FIELDLINT_SCENARIOS_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fieldlint/dsl.hpp"
#include "fieldlint/numeric.hpp"
#include "fieldlint/report.hpp"

namespace fieldlint {

struct ScenarioInfo {
  std::string id;
  std::string description;
  std::string model;
};

struct RunOptions {
  double tolerance = kEqualityTolerance;
  double finite_difference_tolerance = kFiniteDifferenceTolerance;
};

/// Scenario catalog: `.lagr` models plus a manifest.json that lists the
/// scenarios with their expected results (symbolic goldens as DSL text,
/// numeric fixtures as numbers).  Each check in a scenario report passes
/// when the expectation is met, including expected negative outcomes.
class Catalog {
 public:
  /// The catalog compiled into the library.
  static Catalog builtin();

  /// Reads manifest.json and every *.lagr file in `dir`.  Throws
  /// ConfigError when the manifest is missing or malformed.
  static Catalog load(const std::filesystem::path& dir);

  std::vector<std::string> list() const;
  const std::vector<ScenarioInfo>& scenarios() const { return infos_; }
  std::vector<std::string> model_names() const;

  /// Throws ConfigError for unknown model names.
  const std::string& source(const std::string& model) const;
  LagrangianModel model(const std::string& name) const;

  /// Throws Error for unknown ids.
  Report run(const std::string& id, const RunOptions& options = {}) const;

 private:
  Catalog(std::map<std::string, std::string> models, const std::string& manifest);

  std::map<std::string, std::string> models_;
  std::vector<ScenarioInfo> infos_;
  std::map<std::string, std::string> expectations_;  // id -> JSON text
};

}  // namespace fieldlint

#endif  // FIELDLINT_SCENARIOS_HPP
