#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bdb {

/// Runs one CLI invocation (args excludes the program name). Returns 0 on
/// success, 1 on usage/configuration errors, 2 on data or numeric errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace bdb
