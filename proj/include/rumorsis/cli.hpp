#pragma once

#include <iosfwd>

namespace rumorsis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kToolVersion = "rumorsis 1.0.0";

/// Runs one subcommand (steady | dynamics | sweep | optimize | thresholds).
/// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rumorsis::cli
