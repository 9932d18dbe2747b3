#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dlambda::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDomainError = 2,
  kCheckFailure = 3,
};

/// Environment variable holding the sweep worker count.
inline constexpr const char* kWorkersEnv = "DLAMBDA_WORKERS";

/// Runs one command line. `args` excludes the program name, e.g.
/// {"fig4a", "--od", "200"}. Tables go to `out` unless --output names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlambda::cli
