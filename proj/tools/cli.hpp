#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hermite::cli {

// Runs one command line (args excludes the program name). Reports go to out,
// diagnostics to err. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hermite::cli
