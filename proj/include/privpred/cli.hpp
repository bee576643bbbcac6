#ifndef PRIVPRED_CLI_HPP
#define PRIVPRED_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace privpred {

// Runs one command line (args excludes the program name). Returns the exit code:
// 0 success, 1 computation failure, 2 input or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace privpred

#endif  // PRIVPRED_CLI_HPP
