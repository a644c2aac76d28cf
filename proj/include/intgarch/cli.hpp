#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace intgarch {

/**
 * Entry point of the `intgarch` tool. `args` excludes the program name.
 * Returns the process exit code: 0 ok, 2 bad input, 3 numerical failure,
 * 4 non-convergence.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace intgarch
