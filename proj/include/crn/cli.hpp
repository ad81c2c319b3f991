// cli.hpp: command-line front end, callable in-process for tests.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace crn {

/// Runs one CLI invocation (args exclude the program name). Exit codes:
/// 0 success, 1 analysis failure (error object on stdout), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crn
