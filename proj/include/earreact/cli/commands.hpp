#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace earreact::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "EARREACT_CONFIG";

/// Parses argv and dispatches one subcommand: simulate, detect, eval,
/// train-hmm, train-tree or recommend. Returns 0 on success, 1 on a usage
/// error and 2 on a data or configuration error. Logs go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace earreact::cli
