#include "fieldlint/report.hpp"

#include <algorithm>

namespace fieldlint {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Info:
      return "info";
  }
  return "?";
}

bool Report::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.verdict == Verdict::Fail; });
}

}  // namespace fieldlint
