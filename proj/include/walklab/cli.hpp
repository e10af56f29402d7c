#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace walklab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 2;

/// Entry point of the `walklab` tool. `args` excludes the program name.
/// Subcommands: simulate, ensemble, analyze, exponents, verify-law.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace walklab
