#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace taco::cli {

/// Runs one command line (args excludes the program name) and returns the
/// process exit code: 0 ok, 2 validation or I/O failure, 3 provider failure,
/// 4 parse-fatal model output.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace taco::cli
