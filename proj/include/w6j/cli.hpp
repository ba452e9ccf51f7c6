#pragma once

// Command-line front end.  Kept in the library so the whole surface is
// drivable in-process by tests; the binary's main() is a two-line shim.

#include <iosfwd>
#include <string>
#include <vector>

namespace w6j {

// Runs one CLI invocation.  args excludes the program name; normal output
// goes to out, diagnostics to err.  Returns the process exit code:
// 0 success, 2 usage error, 3 domain error, 4 resource limit.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace w6j
