#ifndef ARDI_CLI_HPP
#define ARDI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ardi {

// Entry point behind the `ardi` binary; testable in-process.
// Exit codes: 0 success, 1 diagnostics with errors, 2 usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ardi

#endif  // ARDI_CLI_HPP
