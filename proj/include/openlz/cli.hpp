#pragma once

// Command-line front end.  Kept separate from main() so the argument
// handling, output formatting, and exit-code policy are unit-testable
// in process.
//
// Exit codes: 0 success, 1 partial cell failures (or a runtime failure in a
// single-cell run), 2 configuration / usage error, 3 verification failure.

#include <ostream>
#include <string>
#include <vector>

namespace openlz {

// args excludes the program name (i.e. pass argv+1 .. argv+argc).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace openlz
