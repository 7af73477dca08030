#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace newsreg::cli {

/// Output layout version written to every manifest and report table.
inline constexpr int kSchemaVersion = 1;

/// Runs one command line (args[0] is the program name). Exit status: 0 on
/// success, 1 with an error JSON on stderr for failures, 2 for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace newsreg::cli
