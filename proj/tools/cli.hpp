/**
 * The cekit command line, callable in-process.  Exit codes: 0 success,
 * 1 a verified negative answer, 2 bad input or a failed precondition.
 */

#ifndef CEKIT_TOOLS_CLI_HPP
#define CEKIT_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cekit::cli {

/** args excludes the program name. */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cekit::cli

#endif
