#pragma once

#include <iosfwd>

namespace johnell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCertificateFailed = 2;

// Entry point of the `johnell` tool. Reports go to `out` (or --out),
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace johnell::cli
