#pragma once

// Command-line surface.  Every subcommand prints one JSON document (or CSV
// with --csv) on stdout; diagnostics go to stderr only, gated by the
// MDREGIONS_LOG environment variable (quiet | info | debug, default quiet).

#include <iosfwd>
#include <string>
#include <vector>

namespace mdr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;        // bad inputs, usage errors
inline constexpr int kExitValidationFailure = 2;  // mc-validate report failed

// args excludes the program name.  Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdr::cli
