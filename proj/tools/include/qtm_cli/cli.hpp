#pragma once

#include <ostream>

namespace qtm::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kSolverError = 2;
inline constexpr int kValidationFailed = 3;

// Entry point shared by the executable and the tests. Artifacts go to `out`
// unless an output file is named; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qtm::cli
