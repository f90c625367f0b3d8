#pragma once

#include <iosfwd>

namespace bailab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Default directory for simulate outputs when --out-dir is not given.
inline constexpr const char* kOutDirEnv = "BAILAB_OUT_DIR";

// Subcommands: instance, gamma, bounds, simulate, dp, report.
// Returns 0 on success, 2 on a configuration error (bad flags, unreadable
// config, invalid instance, unwritable path), 1 on any other failure.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bailab::cli
