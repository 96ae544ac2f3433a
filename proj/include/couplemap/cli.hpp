#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace couplemap::cli {

/// Runs the command-line tool. `args` excludes the program name. Returns the
/// process exit code; failures print a single `Kind:detail` line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace couplemap::cli
