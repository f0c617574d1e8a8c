#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace graphpde::cli {

// Entry point shared by the binary and the in-process tests. Returns the
// process exit code: 0 success, 1 error (bad input, I/O), 2 failed
// hypothesis/validation checks.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphpde::cli
