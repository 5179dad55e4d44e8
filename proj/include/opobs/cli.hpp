#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opobs::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kNumerical = 2;
inline constexpr int kInvariant = 3;

/// Runs one `opobs` invocation; `args` excludes the program name. Data goes to
/// `out` (or to --out files), diagnostics and JSON error records to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opobs::cli
