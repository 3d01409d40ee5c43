#pragma once

// The ptor command line. run() parses and dispatches one invocation; exit
// codes are 0 on success, 1 when a checked property fails and 2 on usage
// or input errors.

#include <ostream>
#include <string>
#include <vector>

namespace ptor::cli {

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptor::cli
