#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hologen::cli {

/// Exit codes: 0 checks passed or verdict emitted, 1 violation found,
/// 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hologen::cli
