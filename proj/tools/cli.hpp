#ifndef FIELDLINT_TOOLS_CLI_HPP
#define FIELDLINT_TOOLS_CLI_HPP

#include <ostream>

namespace fieldlint {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `fieldlint` command; reports go to `out`,
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fieldlint

#endif  // FIELDLINT_TOOLS_CLI_HPP
