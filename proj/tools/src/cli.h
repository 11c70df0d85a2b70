#ifndef STORAGELAB_TOOLS_CLI_H_
#define STORAGELAB_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace storagelab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitInternal = 3,
};

// Runs `storagelab <args...>`; args exclude the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace storagelab::cli

#endif  // STORAGELAB_TOOLS_CLI_H_
