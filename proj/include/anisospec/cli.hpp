#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anisospec::cli {

/// Exit codes: 0 success, 1 computation or I/O failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace anisospec::cli
