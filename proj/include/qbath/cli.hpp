#pragma once

#include <string>
#include <vector>

namespace qbath::cli {

/// Entry point behind the `qbath` binary. Exit codes: 0 success, 2 usage
/// error, 3 domain error, 4 resource error.
int run(int argc, const char* const* argv);

/// Convenience overload for in-process invocation ("qbath" is implied).
int run(const std::vector<std::string>& args);

}  // namespace qbath::cli
