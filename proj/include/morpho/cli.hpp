#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace morpho {

/// Entry point of the `morpho` tool. Returns the process exit code:
/// 0 success, 2 bad input, 3 unusable data, 4 broken invariant.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morpho
