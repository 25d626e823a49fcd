#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toric {

/// Exit codes: 0 pass, 1 assertion failure or failed precondition,
/// 2 usage or parse error.
int cli_dispatch(int argc, char** argv);
/// `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace toric
